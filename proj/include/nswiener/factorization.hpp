// Spectral factorization W = U* U of positive definite self-adjoint band
// operators, with U upper triangular, via finite sections.
//
// The stored W is treated as a window view of an infinite operator; sections
// are rendered with edge-replicated diagonals beyond the data window (a
// window of genuinely finite support would be singular on any padded
// window).  The upper Cholesky factor of the section converges columnwise to
// the infinite factor going down-window, so:
//
//   * the pad-P and pad-2P factors are compared column by column, and
//   * the accepted window additionally keeps a margin above the lower data
//     edge, sized from the factor's inverse decay rate, inside which the
//     factor still depends on unobserved data below the window at a level
//     above the stabilization tolerance (pad doubling alone cannot see that
//     bias, because both passes extend the data the same way).
//
// Columns of the factor carry no influence from above the window at all:
// Cholesky elimination is forward-only, which is the finite-section face of
// causality.
#pragma once

#include <vector>

#include "nswiener/diag_core.hpp"

namespace nswiener {

struct FactorizationOptions {
  double eps_tail = 1e-10;      // stop the inverse recursion below this diagonal norm
  std::int64_t max_offset = -1; // cap for inverse offsets; -1 = max(8 * support width, 40)
  double delta = 1e-8;          // required positivity certificate
  double pivot_floor = 1e-10;   // Cholesky pivot floor
};

struct FactorizationReport {
  NSOperator factor;          // upper triangular, positive real diagonal
  NSOperator inverse_factor;  // upper triangular inverse of the factor
  IndexWindow accepted_window;
  double reconstruction_residual = 0.0;  // summed-diagonal norm of factor*factor - W
  double inverse_residual = 0.0;         // summed-diagonal norm of factor*inverse - I
  double stabilization_gap = 0.0;        // largest pad-P vs pad-2P entry change
  double min_eig_certificate = 0.0;
  double tail_mass = 0.0;   // norm of the first omitted inverse diagonal
  double decay_rho = 0.0;   // fitted geometric decay rate of the inverse diagonals
  bool decay_ok = true;     // rate < 1 (summable inverse expansion witnessed)
  std::int64_t pad = 0;
  double tol = 0.0;
  double eps_tail = 0.0;
  std::int64_t max_offset = 0;
};

struct InverseResult {
  NSOperator inverse;
  double tail_mass = 0.0;
  double decay_rho = 0.0;
  bool decay_ok = true;
};

struct CayleyResult {
  double s_norm_estimate = 0.0;
  bool re_positive = false;
};

struct VerificationResult {
  bool passed = false;
  double reconstruction_residual = 0.0;
  double circle_residual = 0.0;      // worst dense residual over the t samples
  double inverse_residual = 0.0;
  double uniqueness_difference = 0.0;  // vs a re-run with a different pad
};

// Certified lower bound on the smallest eigenvalue of the edge-replicated
// finite section of self-adjoint W on the given window.  Throws
// PositivityError (carrying the certificate) when the bound is below delta.
double check_positive(const NSOperator& w, const IndexWindow& window, double delta);

// Finite-section spectral factorization with pad doubling.  Throws
// PositivityError when the section fails the certificate and
// StabilizationError when no column of the requested window stabilizes.
FactorizationReport spectral_factor(const NSOperator& w, std::int64_t pad, double tol,
                                    const FactorizationOptions& opts = {});

// Inverse of an upper triangular operator with invertible offset-0 blocks by
// forward recursion on the offsets:
//
//   V_[0] = blockwise inverse of U_[0]
//   V_[m] = -(inverse of U_[0] conjugated by shift^m)
//           * sum over n = 1..m of shift_conjugate(U_[n], m - n) * V_[m - n]
//
// stopping at the first offset whose diagonal norm falls below eps_tail or
// at max_offset; the first omitted norm is reported as tail_mass.
InverseResult triangular_inverse(const NSOperator& u, double eps_tail, std::int64_t max_offset);

// Cayley transform check for positive real part: builds the upper completion
// Phi of W, forms S = (I + Phi)^-1 (I - Phi) on a padded section, and
// certifies the Hermitian part of the disk evaluations of Phi on a fixed
// sample grid.  For positive definite W the transform is a strict
// contraction.
CayleyResult cayley_contraction_check(const NSOperator& w);

// Left-multiplies each row of the factor by the unitary that makes its
// offset-0 block Hermitian positive definite (polar normalization).  Two
// factors of the same W agree after this normalization.
NSOperator normalize_positive_diagonal(const NSOperator& u);

// Re-checks a factorization end to end: reconstruction in diagonal
// arithmetic on the accepted window, dense circle samples at the given t
// values, inverse residual, and agreement with a re-run at a different pad.
// All residuals are compared against report.tol.
VerificationResult verify_factorization(const NSOperator& w, const FactorizationReport& report,
                                        const std::vector<double>& t_samples);

// Residual helpers shared by the engine, the verifier, and the tests.  Both
// restrict each compared diagonal to the columns where the product of
// window-limited factors is fully determined by stored data.
double reconstruction_residual_on(const NSOperator& w, const NSOperator& factor,
                                  const IndexWindow& accepted);
double inverse_residual_on(const NSOperator& factor, const NSOperator& inverse,
                           const IndexWindow& accepted);

}  // namespace nswiener
