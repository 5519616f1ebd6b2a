#include "nswiener/zadeh.hpp"

#include <cmath>
#include <string>

#include "nswiener/algebra.hpp"
#include "nswiener/errors.hpp"

namespace nswiener {

namespace {

Complex int_pow(Complex z, std::int64_t n) {
  if (n < 0) return int_pow(Complex(1.0, 0.0) / z, -n);
  Complex acc(1.0, 0.0);
  for (std::int64_t k = 0; k < n; ++k) acc *= z;
  return acc;
}

}  // namespace

ZadehEvaluation zadeh_eval(const NSOperator& f, Complex z) {
  const double az = std::abs(z);
  if (az > 1.0 + 1e-12)
    throw DomainError("zadeh_eval: |z| = " + std::to_string(az) + " exceeds 1");
  if (!f.is_upper() && std::abs(az - 1.0) > 1e-9)
    throw DomainError("zadeh_eval: operators with negative offsets require |z| = 1");
  NSOperator out = NSOperator::zero(f.block_size(), f.window());
  for (const auto& [n, d] : f.diagonals()) out.set_diagonal(n, scale_diagonal(d, int_pow(z, n)));
  out.set_exact_interior(f.exact_interior());
  return ZadehEvaluation{z, out, render(out)};
}

double zadeh_product_residual(const NSOperator& u1, const NSOperator& u2, Complex z) {
  const NSOperator lhs = zadeh_eval(multiply(u1, u2), z).result;
  const NSOperator rhs = multiply(zadeh_eval(u1, z).result, zadeh_eval(u2, z).result);
  return max_abs_diff(lhs, rhs);
}

double circle_conjugation_residual(const NSOperator& f, double t) {
  const Complex z = std::polar(1.0, t);
  const IndexWindow span = entry_span(f);
  const DenseTruncation evaluated = render(zadeh_eval(f, z).result, span);

  // Independent route: conjugate the plain rendering by the modulation
  // diagonal with entries z^(kModulationExponentSign * k).
  const DenseTruncation plain = render(f, span);
  const int m = f.block_size();
  const int dim = plain.data.rows();
  CMatrix lambda(dim, dim);
  CMatrix lambda_inv(dim, dim);
  for (std::int64_t i = span.lo; i <= span.hi; ++i) {
    const Complex li = int_pow(z, kModulationExponentSign * i);
    const int base = static_cast<int>((i - span.lo) * m);
    for (int k = 0; k < m; ++k) {
      lambda(base + k, base + k) = li;
      lambda_inv(base + k, base + k) = Complex(1.0, 0.0) / li;
    }
  }
  const CMatrix conjugated = lambda * plain.data * lambda_inv;
  return conjugated.max_abs_diff(evaluated.data);
}

RadialBound radial_limit_bound(const NSOperator& u, double r, double t) {
  if (!u.is_upper()) throw DomainError("radial_limit_bound: operator must be upper triangular");
  if (!(r > 0.0) || !(r < 1.0)) throw DomainError("radial_limit_bound: radius must lie in (0, 1)");
  const NSOperator at_r = zadeh_eval(u, std::polar(r, t)).result;
  const NSOperator at_1 = zadeh_eval(u, std::polar(1.0, t)).result;
  RadialBound out;
  out.actual = norms(subtract(at_r, at_1)).wiener;
  for (const auto& [n, d] : u.diagonals())
    out.bound += (1.0 - std::pow(r, static_cast<double>(n))) * d.norm();
  if (out.actual > out.bound + 1e-12)
    throw DomainError("radial_limit_bound: computed distance exceeds its bound");
  return out;
}

}  // namespace nswiener
