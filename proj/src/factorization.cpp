#include "nswiener/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "nswiener/algebra.hpp"
#include "nswiener/dense_oracle.hpp"
#include "nswiener/errors.hpp"
#include "nswiener/seed.hpp"
#include "nswiener/zadeh.hpp"

namespace nswiener {

namespace {

constexpr double kSelfAdjointTol = 1e-10;
// Above this fitted decay rate the lower-edge margin would exceed any
// reasonable window, so the factorization is reported as not stabilized.
constexpr double kDecayCeiling = 0.98;

void require_self_adjoint(const NSOperator& w, const char* who) {
  const double dev = max_abs_diff(w, adjoint(w));
  if (dev > kSelfAdjointTol) {
    std::ostringstream os;
    os << who << ": input is not self-adjoint (deviation " << dev << ")";
    throw DomainError(os.str());
  }
}

CMatrix hermitian_average(const CMatrix& a) { return (a + a.adjoint()) * Complex(0.5, 0.0); }

// Least-squares fit of log(norm) against the offset; returns exp(slope), or
// 0 when fewer than two usable points exist (nothing to extrapolate).
double fit_decay_rate(const std::vector<double>& norms) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t m = 0; m < norms.size(); ++m) {
    if (norms[m] > 0.0) pts.emplace_back(static_cast<double>(m), std::log(norms[m]));
  }
  if (pts.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0) return 0.0;
  const double slope = (n * sxy - sx * sy) / denom;
  return std::exp(slope);
}

// Columns within this distance of the lower data edge still depend on the
// unobserved operator below the window at a level above tol, no matter how
// far the section is padded: that bias decays like rho^(2k) in the distance
// k from the edge, so it is invisible to pad doubling and has to be cut off
// by fiat.  Never less than the band width.
std::int64_t lower_edge_margin(double tol, double rho, std::int64_t band) {
  if (!(rho > 0.0) || rho >= 1.0) return band;  // no decay evidence: minimal margin
  const double k = std::ceil(std::log(tol) / (2.0 * std::log(rho)));
  const auto ki = static_cast<std::int64_t>(std::max(0.0, k));
  return std::max(band, ki);
}

// Exact column range of offset m of a product of operators whose columns are
// complete on `accepted` (upper factors): both participating columns must be
// stored.
std::optional<IndexWindow> exact_offset_window(const IndexWindow& accepted, std::int64_t m) {
  const std::int64_t lo = accepted.lo + std::max<std::int64_t>(m, 0);
  const std::int64_t hi = accepted.hi + std::min<std::int64_t>(m, 0);
  if (lo > hi) return std::nullopt;
  return IndexWindow(lo, hi);
}

double sum_clipped_diagonal_norms(const NSOperator& d, const IndexWindow& accepted) {
  double total = 0.0;
  for (const auto& [m, diag] : d.diagonals()) {
    const auto ew = exact_offset_window(accepted, m);
    if (!ew) continue;
    const auto clipped = clip_diagonal(diag, *ew);
    if (clipped) total += clipped->norm();
  }
  return total;
}

}  // namespace

double check_positive(const NSOperator& w, const IndexWindow& window, double delta) {
  require_self_adjoint(w, "check_positive");
  DenseTruncation section = finite_section(w, window, Extension::kReplicate);
  section.data = hermitian_average(section.data);
  const double certificate = min_eig_lower_bound(section);
  if (certificate < delta) {
    std::ostringstream os;
    os << "positivity certificate " << certificate << " below required " << delta
       << " on window [" << window.lo << ", " << window.hi << "]";
    throw PositivityError(os.str(), certificate);
  }
  return certificate;
}

InverseResult triangular_inverse(const NSOperator& u, double eps_tail, std::int64_t max_offset) {
  if (!u.is_upper()) throw DomainError("triangular_inverse: operator is not upper triangular");
  const Diagonal* u0 = u.diagonal(0);
  if (u0 == nullptr) throw DomainError("triangular_inverse: no offset-0 diagonal to invert");
  const IndexWindow win = u0->window();
  const int bs = u.block_size();
  const std::int64_t band = u.n_max();

  // Blockwise inverse of the offset-0 diagonal.
  std::map<std::int64_t, CMatrix> inv0;
  for (std::int64_t i = win.lo; i <= win.hi; ++i) inv0.emplace(i, inverse(u0->block(i)));

  InverseResult out{NSOperator::zero(bs, win), 0.0, 0.0, true};
  std::vector<Diagonal> stored;  // offset m = index
  std::vector<double> norms;
  {
    std::vector<CMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(win.length()));
    for (std::int64_t i = win.lo; i <= win.hi; ++i) blocks.push_back(inv0.at(i));
    stored.emplace_back(win, std::move(blocks));
    norms.push_back(stored[0].norm());
  }

  for (std::int64_t m = 1;; ++m) {
    const std::int64_t lo = win.lo + m;
    if (lo > win.hi) break;  // the view is fully inverted; nothing was omitted
    std::vector<CMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(win.hi - lo + 1));
    for (std::int64_t c = lo; c <= win.hi; ++c) {
      CMatrix acc(bs, bs);
      for (std::int64_t n = 1; n <= std::min(band, m); ++n) {
        const Diagonal* un = u.diagonal(n);
        if (un == nullptr) continue;
        acc = acc + un->block_at(c - m + n) * stored[static_cast<std::size_t>(m - n)].block_at(c);
      }
      blocks.push_back(inv0.at(c - m) * acc * Complex(-1.0, 0.0));
    }
    Diagonal d(IndexWindow(lo, win.hi), std::move(blocks));
    const double nu = d.norm();
    if (nu < eps_tail || m > max_offset) {
      out.tail_mass = nu;
      break;
    }
    stored.push_back(std::move(d));
    norms.push_back(nu);
  }

  for (std::size_t m = 0; m < stored.size(); ++m) {
    if (!stored[m].is_zero()) out.inverse.set_diagonal(static_cast<std::int64_t>(m), stored[m]);
  }
  out.inverse.set_exact_interior(win);
  out.decay_rho = fit_decay_rate(norms);
  out.decay_ok = out.decay_rho < 1.0;
  return out;
}

double reconstruction_residual_on(const NSOperator& w, const NSOperator& factor,
                                  const IndexWindow& accepted) {
  const NSOperator diff = subtract(multiply(adjoint(factor), factor), w);
  return sum_clipped_diagonal_norms(diff, accepted);
}

double inverse_residual_on(const NSOperator& factor, const NSOperator& inverse,
                           const IndexWindow& accepted) {
  const NSOperator diff =
      subtract(multiply(factor, inverse), NSOperator::identity(factor.block_size(), accepted));
  return sum_clipped_diagonal_norms(diff, accepted);
}

FactorizationReport spectral_factor(const NSOperator& w, std::int64_t pad, double tol,
                                    const FactorizationOptions& opts) {
  if (pad < 1) throw DomainError("spectral_factor: pad must be at least 1");
  if (!(tol > 0.0)) throw DomainError("spectral_factor: tol must be positive");
  if (!(opts.eps_tail > 0.0)) throw DomainError("spectral_factor: eps_tail must be positive");

  const std::int64_t band = w.support_radius();
  const std::int64_t max_offset =
      opts.max_offset >= 0 ? opts.max_offset : std::max<std::int64_t>(8 * band, 40);
  const IndexWindow data = w.window();
  const int bs = w.block_size();

  FactorizationReport report{NSOperator::zero(bs, data), NSOperator::zero(bs, data),
                             data,  0.0, 0.0, 0.0, 0.0, 0.0,
                             0.0,   true, pad, tol, opts.eps_tail, max_offset};

  // One certificate on the widest window used anywhere.  Replicate-extended
  // sections are nested principal submatrices across windows (the (i, j)
  // entry depends on (i, j) alone), so this bound covers the narrower
  // section as well.
  const IndexWindow window2(data.lo - 2 * pad, data.hi + 2 * pad);
  report.min_eig_certificate = check_positive(w, window2, opts.delta);

  if (w.is_diagonal()) {
    // Block-diagonal input: the factor is local to each block, every column
    // is exact, and no padding question arises.
    const Diagonal* w0 = w.diagonal(0);
    std::vector<CMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(data.length()));
    for (std::int64_t i = data.lo; i <= data.hi; ++i) {
      const CMatrix b = hermitian_average(w0 ? w0->block_at(i) : CMatrix(bs, bs));
      auto r = try_cholesky_upper(b, opts.pivot_floor);
      if (!r) {
        throw PositivityError("spectral_factor: diagonal block is not positive definite",
                              report.min_eig_certificate);
      }
      blocks.push_back(std::move(*r));
    }
    report.factor = NSOperator::zero(bs, data);
    report.factor.set_diagonal(0, Diagonal(data, std::move(blocks)));
    report.factor.set_exact_interior(data);
    report.accepted_window = data;
    InverseResult inv = triangular_inverse(report.factor, opts.eps_tail, max_offset);
    report.inverse_factor = inv.inverse;
    report.tail_mass = inv.tail_mass;
    report.decay_rho = inv.decay_rho;
    report.decay_ok = inv.decay_ok;
    report.reconstruction_residual = reconstruction_residual_on(w, report.factor, data);
    report.inverse_residual = inverse_residual_on(report.factor, report.inverse_factor, data);
    return report;
  }

  // Factor two finite sections, pad and double pad, both extended by edge
  // replication, and keep the columns on which they agree.
  const IndexWindow window1(data.lo - pad, data.hi + pad);
  DenseTruncation sec1 = finite_section(w, window1, Extension::kReplicate);
  DenseTruncation sec2 = finite_section(w, window2, Extension::kReplicate);
  sec1.data = hermitian_average(sec1.data);
  sec2.data = hermitian_average(sec2.data);
  NSOperator u1 = extract_diagonals(cholesky_upper(sec1, opts.pivot_floor));
  NSOperator u2 = extract_diagonals(cholesky_upper(sec2, opts.pivot_floor));
  if (!u1.is_upper() || !u2.is_upper() || u1.n_max() > band || u2.n_max() > band) {
    throw DomainError("spectral_factor: section factor left the expected band");
  }

  // Per-column change under pad doubling.
  std::vector<double> gap(static_cast<std::size_t>(data.length()), 0.0);
  for (std::int64_t i = data.lo; i <= data.hi; ++i) {
    double g = 0.0;
    for (std::int64_t n = 0; n <= band; ++n) {
      const Diagonal* d1 = u1.diagonal(n);
      const Diagonal* d2 = u2.diagonal(n);
      const CMatrix b1 = d1 ? d1->block_at(i) : CMatrix(bs, bs);
      const CMatrix b2 = d2 ? d2->block_at(i) : CMatrix(bs, bs);
      g = std::max(g, b1.max_abs_diff(b2));
    }
    gap[static_cast<std::size_t>(i - data.lo)] = g;
  }

  // Longest contiguous run of columns whose change is within tol.
  std::int64_t best_lo = 0, best_len = 0, cur_lo = 0, cur_len = 0;
  for (std::int64_t k = 0; k < data.length(); ++k) {
    if (gap[static_cast<std::size_t>(k)] <= tol) {
      if (cur_len == 0) cur_lo = k;
      ++cur_len;
      if (cur_len > best_len) {
        best_len = cur_len;
        best_lo = cur_lo;
      }
    } else {
      cur_len = 0;
    }
  }
  if (best_len == 0) {
    std::ostringstream os;
    os << "no column stabilized under pad doubling (pad " << pad << ", tol " << tol
       << "); smallest change " << *std::min_element(gap.begin(), gap.end());
    throw StabilizationError(os.str());
  }
  const IndexWindow run(data.lo + best_lo, data.lo + best_lo + best_len - 1);

  // Decay rate of the inverse expansion, fitted on the stable columns.
  InverseResult probe = triangular_inverse(restrict_columns(u2, run), opts.eps_tail, max_offset);
  if (!probe.decay_ok || (probe.decay_rho > 0.0 && probe.decay_rho >= kDecayCeiling)) {
    std::ostringstream os;
    os << "inverse diagonals decay too slowly to bound the edge bias (fitted rate "
       << probe.decay_rho << ")";
    throw StabilizationError(os.str());
  }

  const std::int64_t margin = lower_edge_margin(tol, probe.decay_rho, band);
  std::optional<IndexWindow> accepted;
  if (data.lo + margin <= data.hi) {
    accepted = IndexWindow::intersect(run, IndexWindow(data.lo + margin, data.hi));
  }
  if (!accepted) {
    std::ostringstream os;
    os << "stable run [" << run.lo << ", " << run.hi
       << "] lies entirely inside the lower-edge margin of " << margin
       << " columns; enlarge the data window or loosen tol";
    throw StabilizationError(os.str());
  }

  report.accepted_window = *accepted;
  report.factor = restrict_columns(u2, *accepted);
  report.factor.set_exact_interior(*accepted);
  double worst = 0.0;
  for (std::int64_t i = accepted->lo; i <= accepted->hi; ++i) {
    worst = std::max(worst, gap[static_cast<std::size_t>(i - data.lo)]);
  }
  report.stabilization_gap = worst;

  InverseResult inv = triangular_inverse(report.factor, opts.eps_tail, max_offset);
  report.inverse_factor = inv.inverse;
  report.tail_mass = inv.tail_mass;
  report.decay_rho = inv.decay_rho;
  report.decay_ok = inv.decay_ok;
  report.reconstruction_residual = reconstruction_residual_on(w, report.factor, *accepted);
  report.inverse_residual = inverse_residual_on(report.factor, report.inverse_factor, *accepted);
  return report;
}

CayleyResult cayley_contraction_check(const NSOperator& w) {
  const NSOperator phi = analytic_completion(w);
  const std::int64_t band = std::max<std::int64_t>(w.support_radius(), 1);
  const IndexWindow padded(w.window().lo - 2 * band, w.window().hi + 2 * band);

  DenseTruncation sec = finite_section(phi, padded, Extension::kReplicate);
  const int n = sec.data.rows();
  CMatrix plus = sec.data, minus = sec.data * Complex(-1.0, 0.0);
  for (int i = 0; i < n; ++i) {
    plus(i, i) += 1.0;
    minus(i, i) += 1.0;
  }
  DenseTruncation plus_t{padded, sec.block_size, std::move(plus), padded};
  const CMatrix s = triangular_solve_upper(plus_t, minus);

  CayleyResult out;
  out.s_norm_estimate = power_sigma_max(s, 2000, 1e-13, power_iteration_seed());

  const Complex samples[] = {Complex(0.0, 0.0), Complex(0.5, 0.0),
                             Complex(0.9, 0.0) * std::exp(Complex(0.0, 1.2)),
                             std::exp(Complex(0.0, 0.3))};
  out.re_positive = true;
  for (const Complex& z : samples) {
    const ZadehEvaluation ev = zadeh_eval(phi, z);
    const CMatrix h = hermitian_average(ev.dense.data);
    if (min_eig_lower_bound(h) <= 0.0) out.re_positive = false;
  }
  return out;
}

NSOperator normalize_positive_diagonal(const NSOperator& u) {
  if (!u.is_upper()) {
    throw DomainError("normalize_positive_diagonal: operator is not upper triangular");
  }
  const Diagonal* u0 = u.diagonal(0);
  if (u0 == nullptr) throw DomainError("normalize_positive_diagonal: no offset-0 diagonal");

  // Unitary q(row) = sqrt(B* B) B^-1 per offset-0 block B: applying it on the
  // row side turns B into its Hermitian positive definite polar factor while
  // leaving column data (and the product U* U) unchanged.
  std::map<std::int64_t, CMatrix> q;
  auto unitary_for_row = [&](std::int64_t r) -> const CMatrix& {
    auto it = q.find(r);
    if (it != q.end()) return it->second;
    const CMatrix b = u0->block_at(r);
    if (b.max_abs() == 0.0) {
      throw DomainError("normalize_positive_diagonal: offset-0 block missing for a stored row");
    }
    const CMatrix h = hermitian_sqrt(b.adjoint() * b);
    return q.emplace(r, h * inverse(b)).first->second;
  };

  NSOperator out = NSOperator::zero(u.block_size(), u.window());
  for (const auto& [m, d] : u.diagonals()) {
    std::vector<CMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(d.window().length()));
    for (std::int64_t i = d.window().lo; i <= d.window().hi; ++i) {
      blocks.push_back(unitary_for_row(i - m) * d.block(i));
    }
    out.set_diagonal(m, Diagonal(d.window(), std::move(blocks)));
  }
  out.set_exact_interior(u.exact_interior());
  return out;
}

VerificationResult verify_factorization(const NSOperator& w, const FactorizationReport& report,
                                        const std::vector<double>& t_samples) {
  VerificationResult res;
  const IndexWindow& acc = report.accepted_window;
  const std::int64_t band = w.support_radius();
  const int bs = w.block_size();

  res.reconstruction_residual = reconstruction_residual_on(w, report.factor, acc);
  res.inverse_residual = inverse_residual_on(report.factor, report.inverse_factor, acc);

  // Dense circle samples: the section of factor(z)* factor(z) matches the
  // section of w(z) except on the bottom `band` block rows and columns,
  // where the sum over rows of the factor leaves the stored columns.
  const NSOperator w_acc = restrict_section(w, acc);
  for (const double t : t_samples) {
    const Complex z = std::exp(Complex(0.0, t));
    const CMatrix uz = render(zadeh_eval(report.factor, z).result, acc).data;
    const CMatrix wz = render(zadeh_eval(w_acc, z).result, acc).data;
    const CMatrix diff = uz.adjoint() * uz - wz;
    const std::int64_t keep = acc.length() - band;
    if (keep <= 0) continue;
    const int skip = static_cast<int>(band) * bs;
    const int side = static_cast<int>(keep) * bs;
    res.circle_residual =
        std::max(res.circle_residual, diff.submatrix(skip, skip, side, side).max_abs());
  }

  // Uniqueness: a run with a different pad, polar-normalized, must agree on
  // the common accepted columns.
  FactorizationOptions opts;
  opts.eps_tail = report.eps_tail;
  opts.max_offset = report.max_offset;
  const FactorizationReport other = spectral_factor(w, report.pad + 2, report.tol, opts);
  const auto common = IndexWindow::intersect(acc, other.accepted_window);
  if (common) {
    // Compare the factors' sections on the common window: entries with both
    // indices inside it, so every normalizing row unitary has its offset-0
    // block available.
    const NSOperator a = normalize_positive_diagonal(restrict_section(report.factor, *common));
    const NSOperator b = normalize_positive_diagonal(restrict_section(other.factor, *common));
    res.uniqueness_difference = max_abs_diff(a, b);
  } else {
    res.uniqueness_difference = 0.0;  // nothing in common to compare
  }

  const double inverse_budget = std::max(report.tol, 100.0 * report.eps_tail);
  res.passed = res.reconstruction_residual <= report.tol &&
               res.circle_residual <= report.tol + 1e-10 &&
               res.inverse_residual <= inverse_budget &&
               res.uniqueness_difference <= report.tol;
  return res;
}

}  // namespace nswiener
