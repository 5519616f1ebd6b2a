#include "nswiener/dense_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nswiener/errors.hpp"

namespace nswiener {

namespace {

void place_blocks(const NSOperator& f, const IndexWindow& w, bool replicate, CMatrix* data) {
  const int m = f.block_size();
  for (const auto& [n, d] : f.diagonals()) {
    std::int64_t lo = w.lo;
    std::int64_t hi = w.hi;
    if (!replicate) {
      lo = std::max(lo, d.window().lo);
      hi = std::min(hi, d.window().hi);
    }
    for (std::int64_t col = lo; col <= hi; ++col) {
      const std::int64_t row = col - n;
      if (!w.contains(row)) continue;
      const CMatrix& b = replicate ? d.block_clamped(col) : d.block(col);
      const int r0 = static_cast<int>((row - w.lo) * m);
      const int c0 = static_cast<int>((col - w.lo) * m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) (*data)(r0 + i, c0 + j) += b(i, j);
    }
  }
}

}  // namespace

DenseTruncation render(const NSOperator& f, const IndexWindow& window) {
  for (const auto& [n, d] : f.diagonals()) {
    if (d.window().lo < window.lo || d.window().hi > window.hi)
      throw DimensionError("render window does not cover the stored diagonals (offset " +
                           std::to_string(n) + ")");
  }
  const int m = f.block_size();
  DenseTruncation t{window, m,
                    CMatrix(static_cast<int>(window.length() * m),
                            static_cast<int>(window.length() * m)),
                    window};
  place_blocks(f, window, /*replicate=*/false, &t.data);
  return t;
}

DenseTruncation render(const NSOperator& f) { return render(f, entry_span(f)); }

DenseTruncation finite_section(const NSOperator& f, const IndexWindow& window, Extension ext) {
  const int m = f.block_size();
  DenseTruncation t{window, m,
                    CMatrix(static_cast<int>(window.length() * m),
                            static_cast<int>(window.length() * m)),
                    window};
  place_blocks(f, window, ext == Extension::kReplicate, &t.data);
  if (ext == Extension::kReplicate) {
    const auto e = intersect_opt(window, f.exact_interior());
    t.exact_interior = e ? *e : window;  // metadata only; replicated borders are a model
  }
  return t;
}

NSOperator extract_diagonals(const DenseTruncation& t) {
  const int m = t.block_size;
  NSOperator out = NSOperator::zero(m, t.window);
  for (std::int64_t n = -(t.window.length() - 1); n <= t.window.length() - 1; ++n) {
    const std::int64_t lo = t.window.lo + std::max<std::int64_t>(n, 0);
    const std::int64_t hi = t.window.hi + std::min<std::int64_t>(n, 0);
    std::vector<CMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t col = lo; col <= hi; ++col) blocks.push_back(t.block(col - n, col));
    out.set_diagonal(n, Diagonal(IndexWindow(lo, hi), std::move(blocks)));
  }
  out.set_exact_interior(t.exact_interior);
  return out;
}

namespace {

// Scalar half-bandwidth of a square matrix (largest |i-j| with a nonzero).
int scalar_bandwidth(const CMatrix& a) {
  int bw = 0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != Complex(0.0, 0.0)) bw = std::max(bw, std::abs(i - j));
  return bw;
}

void require_hermitian(const CMatrix& a, const char* who) {
  if (a.rows() != a.cols()) throw DimensionError(std::string(who) + ": matrix not square");
  double dev = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i; j < a.cols(); ++j)
      dev = std::max(dev, std::abs(a(i, j) - std::conj(a(j, i))));
  if (dev > 1e-10)
    throw DomainError(std::string(who) + ": input deviates from Hermitian by " +
                      std::to_string(dev));
}

}  // namespace

std::optional<CMatrix> try_cholesky_upper(const CMatrix& a, double pivot_floor) {
  require_hermitian(a, "cholesky_upper");
  const int n = a.rows();
  const int bw = scalar_bandwidth(a);
  // Lower factor L with A = L L*; the returned upper factor is R = L*.
  // Band-preserving: only entries within the input bandwidth are written.
  CMatrix l(n, n);
  for (int j = 0; j < n; ++j) {
    double s = a(j, j).real();
    for (int k = std::max(0, j - bw); k < j; ++k) s -= std::norm(l(j, k));
    if (!(s > pivot_floor)) return std::nullopt;
    const double d = std::sqrt(s);
    l(j, j) = d;
    for (int i = j + 1; i <= std::min(n - 1, j + bw); ++i) {
      Complex v = a(i, j);
      for (int k = std::max(0, i - bw); k < j; ++k) v -= l(i, k) * std::conj(l(j, k));
      l(i, j) = v / d;
    }
  }
  return l.adjoint();
}

DenseTruncation cholesky_upper(const DenseTruncation& t, double pivot_floor) {
  auto r = try_cholesky_upper(t.data, pivot_floor);
  if (!r)
    throw PositivityError("cholesky_upper: pivot at or below floor; matrix not positive "
                          "definite on this window",
                          0.0);
  return DenseTruncation{t.window, t.block_size, std::move(*r), t.exact_interior};
}

CMatrix triangular_solve_upper(const DenseTruncation& r, const CMatrix& b) {
  const int m = r.block_size;
  const std::int64_t nblk = r.block_count();
  if (r.data.rows() != b.rows())
    throw DimensionError("triangular_solve_upper: right-hand side height mismatch");
  // Entries strictly below the block diagonal must vanish.
  for (std::int64_t ib = 0; ib < nblk; ++ib)
    for (std::int64_t jb = 0; jb < ib; ++jb) {
      const CMatrix blk =
          r.data.submatrix(static_cast<int>(ib) * m, static_cast<int>(jb) * m, m, m);
      if (blk.max_abs() != 0.0)
        throw DomainError("triangular_solve_upper: matrix is not block upper triangular");
    }
  CMatrix x(b.rows(), b.cols());
  CMatrix acc(m, b.cols());
  for (std::int64_t ib = nblk - 1; ib >= 0; --ib) {
    acc = b.submatrix(static_cast<int>(ib) * m, 0, m, b.cols());
    for (std::int64_t jb = ib + 1; jb < nblk; ++jb) {
      const CMatrix rij =
          r.data.submatrix(static_cast<int>(ib) * m, static_cast<int>(jb) * m, m, m);
      if (rij.max_abs() == 0.0) continue;
      acc = acc - rij * x.submatrix(static_cast<int>(jb) * m, 0, m, b.cols());
    }
    const CMatrix rii =
        r.data.submatrix(static_cast<int>(ib) * m, static_cast<int>(ib) * m, m, m);
    CMatrix rinv;
    try {
      rinv = inverse(rii);
    } catch (const DomainError&) {
      throw DomainError("triangular_solve_upper: singular diagonal block at index " +
                        std::to_string(r.window.lo + ib));
    }
    x.set_submatrix(static_cast<int>(ib) * m, 0, rinv * acc);
  }
  return x;
}

double min_eig_lower_bound(const CMatrix& a, double tol) {
  require_hermitian(a, "min_eig_lower_bound");
  const int n = a.rows();
  if (n == 0) return 0.0;
  // Gershgorin lower bound: definitely feasible as the bisection's "passes
  // Cholesky" end once pushed one unit further down.
  double gersh = a(0, 0).real();
  double diag_min = a(0, 0).real();
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) row += std::abs(a(i, j));
    gersh = std::min(gersh, a(i, i).real() - row);
    diag_min = std::min(diag_min, a(i, i).real());
  }
  const auto shifted_ok = [&a, n](double lambda) {
    CMatrix s = a;
    for (int i = 0; i < n; ++i) s(i, i) -= lambda;
    return try_cholesky_upper(s).has_value();
  };
  double ok = gersh - 1.0;
  if (!shifted_ok(ok)) return ok;  // pathological scaling; still a valid lower bound
  // The smallest eigenvalue never exceeds the smallest diagonal entry, where
  // the shifted matrix stops being positive definite.
  double bad = diag_min + 1.0;
  while (bad - ok > tol) {
    const double mid = 0.5 * (ok + bad);
    if (shifted_ok(mid))
      ok = mid;
    else
      bad = mid;
  }
  return ok;
}

double min_eig_lower_bound(const DenseTruncation& t, double tol) {
  return min_eig_lower_bound(t.data, tol);
}

}  // namespace nswiener
