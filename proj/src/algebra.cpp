#include "nswiener/algebra.hpp"

#include <algorithm>
#include <cmath>

#include "nswiener/dense_oracle.hpp"
#include "nswiener/errors.hpp"
#include "nswiener/seed.hpp"

namespace nswiener {

namespace {

void require_same_block_size(const NSOperator& f, const NSOperator& g, const char* who) {
  if (f.block_size() != g.block_size())
    throw DimensionError(std::string(who) + ": block sizes differ (" +
                         std::to_string(f.block_size()) + " vs " +
                         std::to_string(g.block_size()) + ")");
}

// Shrink a window by the given margins; nullopt when nothing remains.
std::optional<IndexWindow> shrink(const std::optional<IndexWindow>& w, std::int64_t at_lo,
                                  std::int64_t at_hi) {
  if (!w) return std::nullopt;
  const std::int64_t lo = w->lo + at_lo;
  const std::int64_t hi = w->hi - at_hi;
  if (lo > hi) return std::nullopt;
  return IndexWindow(lo, hi);
}

// Columns where a product is exact: the right factor must be exact at the
// column itself and the left factor at every column the convolution reaches
// through the right factor's support.
std::optional<IndexWindow> product_exact(const NSOperator& f, const NSOperator& g) {
  if (g.empty_support() || f.empty_support()) {
    // The product is identically zero: exact wherever anything is stored.
    return IndexWindow::hull(f.window(), g.window());
  }
  if (!f.exact_interior() || !g.exact_interior()) return std::nullopt;
  const std::int64_t lo = f.exact_interior()->lo + g.n_max();
  const std::int64_t hi = f.exact_interior()->hi + g.n_min();
  if (lo > hi) return std::nullopt;
  return intersect_opt(g.exact_interior(), IndexWindow(lo, hi));
}

}  // namespace

NSOperator add(const NSOperator& f, const NSOperator& g) {
  require_same_block_size(f, g, "add");
  NSOperator out = NSOperator::zero(f.block_size(), IndexWindow::hull(f.window(), g.window()));
  for (const auto& [n, d] : f.diagonals()) {
    const Diagonal* e = g.diagonal(n);
    out.set_diagonal(n, e ? add_diagonals(d, *e) : d);
  }
  for (const auto& [n, e] : g.diagonals()) {
    if (!f.diagonal(n)) out.set_diagonal(n, e);
  }
  out.set_exact_interior(intersect_opt(f.exact_interior(), g.exact_interior()));
  return out;
}

NSOperator subtract(const NSOperator& f, const NSOperator& g) {
  return add(f, scale(g, Complex(-1.0, 0.0)));
}

NSOperator scale(const NSOperator& f, Complex s) {
  NSOperator out = NSOperator::zero(f.block_size(), f.window());
  for (const auto& [n, d] : f.diagonals()) out.set_diagonal(n, scale_diagonal(d, s));
  out.set_exact_interior(f.exact_interior());
  return out;
}

NSOperator multiply(const NSOperator& f, const NSOperator& g) {
  require_same_block_size(f, g, "multiply");
  NSOperator out = NSOperator::zero(f.block_size(), IndexWindow::hull(f.window(), g.window()));
  if (!f.empty_support() && !g.empty_support()) {
    for (std::int64_t m = f.n_min() + g.n_min(); m <= f.n_max() + g.n_max(); ++m) {
      std::optional<Diagonal> acc;
      for (const auto& [n, fd] : f.diagonals()) {
        const Diagonal* gd = g.diagonal(m - n);
        if (!gd) continue;
        auto term = diagonal_product(fd.shifted(m - n), *gd);
        if (!term) continue;
        acc = acc ? add_diagonals(*acc, *term) : *term;
      }
      if (acc) out.set_diagonal(m, *acc);
    }
  }
  out.set_exact_interior(product_exact(f, g));
  return out;
}

NSOperator adjoint(const NSOperator& f) {
  NSOperator out = NSOperator::zero(f.block_size(), f.window());
  for (const auto& [n, d] : f.diagonals())
    out.set_diagonal(-n, d.conj_transpose().shifted(-n));
  const std::int64_t r = f.support_radius();
  out.set_exact_interior(shrink(f.exact_interior(), r, r));
  return out;
}

NSOperator real_part(const NSOperator& f) {
  return scale(add(f, adjoint(f)), Complex(0.5, 0.0));
}

NSOperator analytic_completion(const NSOperator& w) {
  if (max_abs_diff(w, adjoint(w)) > 1e-12)
    throw DomainError("analytic_completion: input is not self-adjoint within 1e-12");
  NSOperator out = NSOperator::zero(w.block_size(), w.window());
  for (const auto& [n, d] : w.diagonals()) {
    if (n < 0) continue;
    out.set_diagonal(n, n == 0 ? d : scale_diagonal(d, Complex(2.0, 0.0)));
  }
  out.set_exact_interior(w.exact_interior());
  return out;
}

NormReport norms(const NSOperator& f) {
  NormReport r;
  double hs_sq = 0.0;
  for (const auto& [n, d] : f.diagonals()) {
    r.wiener += d.norm();
    hs_sq += d.hs_norm_sq();
  }
  r.hilbert_schmidt = std::sqrt(hs_sq);
  if (!f.empty_support()) {
    const DenseTruncation t = render(f);
    r.operator_norm_estimate = power_sigma_max(t.data, 200, 1e-12, power_iteration_seed());
  }
  return r;
}

NSOperator gram_diagonals(const NSOperator& v, const NSOperator& u, double r) {
  require_same_block_size(v, u, "gram_diagonals");
  if (!v.is_upper() || !u.is_upper())
    throw DomainError("gram_diagonals: factors must be upper triangular");
  if (!(r > 0.0) || r > 1.0) throw DomainError("gram_diagonals: radius must lie in (0, 1]");

  NSOperator out = NSOperator::zero(u.block_size(), IndexWindow::hull(v.window(), u.window()));

  // Offsets m >= 0 directly from the quoted series.
  for (std::int64_t m = 0; m <= u.n_max(); ++m) {
    std::optional<Diagonal> acc;
    for (std::int64_t p = m; p <= u.n_max(); ++p) {
      const Diagonal* vd = v.diagonal(p - m);
      const Diagonal* ud = u.diagonal(p);
      if (!vd || !ud) continue;
      auto term = diagonal_product(vd->conj_transpose().shifted(m), *ud);
      if (!term) continue;
      Diagonal scaled = scale_diagonal(*term, std::pow(r, static_cast<double>(2 * p - m)));
      acc = acc ? add_diagonals(*acc, scaled) : scaled;
    }
    if (acc) out.set_diagonal(m, *acc);
  }
  // Offsets m < 0 via the adjoint rule applied to the mirrored series for
  // U(z)* V(z).
  for (std::int64_t mu = 1; mu <= v.n_max(); ++mu) {
    std::optional<Diagonal> acc;
    for (std::int64_t p = mu; p <= v.n_max(); ++p) {
      const Diagonal* ud = u.diagonal(p - mu);
      const Diagonal* vd = v.diagonal(p);
      if (!ud || !vd) continue;
      auto term = diagonal_product(ud->conj_transpose().shifted(mu), *vd);
      if (!term) continue;
      Diagonal scaled = scale_diagonal(*term, std::pow(r, static_cast<double>(2 * p - mu)));
      acc = acc ? add_diagonals(*acc, scaled) : scaled;
    }
    if (acc) out.set_diagonal(-mu, acc->conj_transpose().shifted(-mu));
  }
  out.set_exact_interior(product_exact(adjoint(v), u));
  return out;
}

}  // namespace nswiener
