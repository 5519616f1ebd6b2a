// Pointwise evaluation of diagonal-form operators on the closed unit disk:
// the offset-n diagonal is scaled by z^n.  Upper-triangular operators admit
// any |z| <= 1; operators with negative offsets are only defined on the unit
// circle, where z^-1 = conj(z).
#pragma once

#include "nswiener/dense_oracle.hpp"
#include "nswiener/diag_core.hpp"

namespace nswiener {

// The evaluation scales diagonals exactly like conjugation by the diagonal
// modulation operator whose entry at index k is z^(sign * k) with this sign.
// Kept as a named constant so the convention stays testable in one place.
inline constexpr int kModulationExponentSign = -1;

struct ZadehEvaluation {
  Complex z;
  NSOperator result;
  DenseTruncation dense;  // faithful rendering of the result
};

ZadehEvaluation zadeh_eval(const NSOperator& f, Complex z);

// Largest entrywise difference between evaluating a product and multiplying
// the evaluations (zero in exact arithmetic).
double zadeh_product_residual(const NSOperator& u1, const NSOperator& u2, Complex z);

// Largest entrywise difference between the dense evaluation at z = e^{it}
// and conjugating the dense rendering by the modulation diagonal built from
// kModulationExponentSign (an independent route; zero in exact arithmetic).
double circle_conjugation_residual(const NSOperator& f, double t);

struct RadialBound {
  double actual = 0.0;  // distance in the summed-diagonal norm
  double bound = 0.0;   // sum over n of (1 - r^n) * norm of the offset-n diagonal
};

// Distance between the evaluations at r e^{it} and e^{it} for an upper
// operator and 0 < r < 1, together with its radius-only upper bound.
RadialBound radial_limit_bound(const NSOperator& u, double r, double t);

}  // namespace nswiener
