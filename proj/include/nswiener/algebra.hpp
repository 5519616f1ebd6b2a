// Exact arithmetic on diagonal-form operators and the summable-diagonal
// norm machinery.
//
// The product is computed diagonal by diagonal:
//
//   (FG)_[m] = sum over n of  shift_conjugate(F_[n], m - n) * G_[m - n]
//
// with the sum taken in ascending n for reproducibility.  The adjoint obeys
// (F*)_[-n] = shift_conjugate(conj_transpose(F_[n]), -n).
#pragma once

#include "nswiener/diag_core.hpp"

namespace nswiener {

struct NormReport {
  // Sum over offsets of the largest block spectral norm per diagonal.
  // Submultiplicative: wiener(FG) <= wiener(F) * wiener(G).
  double wiener = 0.0;
  // sqrt of the sum over offsets of the squared Hilbert-Schmidt norms of the
  // stored diagonals; an upper bound for the operator norm.
  double hilbert_schmidt = 0.0;
  // Power-iteration estimate of the largest singular value of the dense
  // rendering: a certified lower bound for the true operator norm, so it is
  // only ever asserted against upper bounds.
  double operator_norm_estimate = 0.0;
};

NSOperator add(const NSOperator& f, const NSOperator& g);
NSOperator subtract(const NSOperator& f, const NSOperator& g);
NSOperator scale(const NSOperator& f, Complex s);
NSOperator multiply(const NSOperator& f, const NSOperator& g);
NSOperator adjoint(const NSOperator& f);

// (F + F*) / 2.
NSOperator real_part(const NSOperator& f);

// Upper-triangular completion of self-adjoint W: offset 0 keeps W_[0],
// offsets n >= 1 carry 2 W_[n], so that real_part(analytic_completion(W))
// equals W.  Requires W self-adjoint within 1e-12.
NSOperator analytic_completion(const NSOperator& w);

NormReport norms(const NSOperator& f);

// Diagonals of V(z)* U(z) for z = r e^{it}, computed directly from the
// stored diagonals of the upper-triangular factors (the result does not
// depend on t):
//
//   Omega_[m](r) = sum over p >= m of r^(2p-m)
//                  * shift_conjugate(conj_transpose(V_[p-m]), m) * U_[p]
//
// for m >= 0, and Omega_[-m] by the adjoint rule applied to U(z)* V(z).
// At r = 1 this coincides with multiply(adjoint(V), U).
NSOperator gram_diagonals(const NSOperator& v, const NSOperator& u, double r);

}  // namespace nswiener
