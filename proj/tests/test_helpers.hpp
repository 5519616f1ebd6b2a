// Deterministic generators and small builders shared by the test binaries.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "nswiener/algebra.hpp"
#include "nswiener/diag_core.hpp"

namespace testutil {

using nswiener::CMatrix;
using nswiener::Complex;
using nswiener::Diagonal;
using nswiener::IndexWindow;
using nswiener::NSOperator;

using Rng = std::mt19937_64;

inline double unif(Rng& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline Complex rand_complex(Rng& g, double scale) {
  return Complex(unif(g, -scale, scale), unif(g, -scale, scale));
}

inline CMatrix random_block(Rng& g, int m, double scale) {
  CMatrix b(m, m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) b(r, c) = rand_complex(g, scale);
  }
  return b;
}

// Block with smallest singular value at least ~0.55: random positive
// diagonal in [0.65, 1] plus a perturbation of spectral norm at most 0.1.
inline CMatrix random_wellconditioned_block(Rng& g, int m) {
  CMatrix b = random_block(g, m, 0.1 / m);
  for (int r = 0; r < m; ++r) b(r, r) += unif(g, 0.65, 1.0);
  return b;
}

inline Diagonal random_diagonal(Rng& g, IndexWindow w, int m, double scale) {
  std::vector<CMatrix> blocks;
  blocks.reserve(static_cast<std::size_t>(w.length()));
  for (std::int64_t i = w.lo; i <= w.hi; ++i) blocks.push_back(random_block(g, m, scale));
  return Diagonal(w, std::move(blocks));
}

// Generic operator with diagonals at every offset in [n_min, n_max], all on
// the full window.
inline NSOperator random_operator(Rng& g, int m, IndexWindow w, std::int64_t n_min,
                                  std::int64_t n_max, double scale) {
  NSOperator f = NSOperator::zero(m, w);
  for (std::int64_t n = n_min; n <= n_max; ++n) f.set_diagonal(n, random_diagonal(g, w, m, scale));
  return f;
}

// Self-adjoint operator with constant blocks: upper_blocks[0] (made
// Hermitian) at offset 0 and upper_blocks[n] at offsets +-n with the windows
// of a matrix section, so the result is exactly self-adjoint.
inline NSOperator toeplitz_self_adjoint(IndexWindow w, int m,
                                        const std::vector<CMatrix>& upper_blocks) {
  NSOperator out = NSOperator::zero(m, w);
  for (std::size_t n = 0; n < upper_blocks.size(); ++n) {
    const auto off = static_cast<std::int64_t>(n);
    if (off > w.length() - 1) break;
    CMatrix b = upper_blocks[n];
    if (off == 0) b = (b + b.adjoint()) * Complex(0.5, 0.0);
    const IndexWindow upper_w(w.lo + off, w.hi);
    std::vector<CMatrix> blocks(static_cast<std::size_t>(upper_w.length()), b);
    out.set_diagonal(off, Diagonal(upper_w, blocks));
    if (off > 0) {
      const IndexWindow lower_w(w.lo, w.hi - off);
      std::vector<CMatrix> lblocks(static_cast<std::size_t>(lower_w.length()), b.adjoint());
      out.set_diagonal(-off, Diagonal(lower_w, lblocks));
    }
  }
  out.set_exact_interior(w);
  return out;
}

inline NSOperator scalar_toeplitz(IndexWindow w, double diag, double off) {
  std::vector<CMatrix> blocks(2, CMatrix(1, 1));
  blocks[0](0, 0) = diag;
  blocks[1](0, 0) = off;
  return toeplitz_self_adjoint(w, 1, blocks);
}

// Upper triangular factor with invertible offset-0 blocks, staircase windows
// (offset n on [w.lo + n, w.hi]) and off-diagonal mass split evenly across
// the band.  Each diagonal is constant for columns at or below freeze_below
// and for columns at or above freeze_above (pass values outside the window
// to disable freezing).
inline NSOperator random_upper_factor(Rng& g, int m, IndexWindow w, std::int64_t band,
                                      double mass, std::int64_t freeze_below,
                                      std::int64_t freeze_above) {
  NSOperator u = NSOperator::zero(m, w);
  for (std::int64_t n = 0; n <= band; ++n) {
    const IndexWindow dw(w.lo + n, w.hi);
    std::vector<CMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(dw.length()));
    CMatrix low_frozen, high_frozen;
    for (std::int64_t i = dw.lo; i <= dw.hi; ++i) {
      if (i <= freeze_below && low_frozen.rows() != 0) {
        blocks.push_back(low_frozen);
        continue;
      }
      if (i >= freeze_above && high_frozen.rows() != 0) {
        blocks.push_back(high_frozen);
        continue;
      }
      CMatrix b = n == 0 ? random_wellconditioned_block(g, m) : random_block(g, m, 1.0);
      if (n > 0) {
        // Rescale so the whole diagonal's norm is mass / band.
        const double s = nswiener::spectral_norm(b);
        b = b * Complex(s > 0 ? mass / (static_cast<double>(band) * s) : 0.0, 0.0);
      }
      if (i <= freeze_below) low_frozen = b;
      if (i >= freeze_above) high_frozen = b;
      blocks.push_back(b);
    }
    u.set_diagonal(n, Diagonal(dw, std::move(blocks)));
  }
  u.set_exact_interior(w);
  return u;
}

// One test case for the factorization round trip: a ground-truth factor on
// an extended window, frozen near both edges so that the edge-replicated
// continuation of W coincides with the true operator outside the window, and
// the exactly self-adjoint W on `window` it generates.
struct FactorCase {
  NSOperator u_true;  // on the extended window
  NSOperator w;       // on `window`
  double mass = 0.0;
};

inline FactorCase make_factor_case(Rng& g, int m, std::int64_t band, IndexWindow window) {
  const double mass = unif(g, 0.1, 0.3);
  const IndexWindow extended(window.lo - (2 * band + 2), window.hi);
  // Freeze all columns the replicate extension can reach: offsets clamp to
  // their outermost stored column, and W's diagonals depend on factor columns
  // up to `band` above their own.  With both ends frozen the replicated
  // continuation of W equals the true infinite operator, so sections stay
  // positive definite and the recovered factor can be compared to u_true.
  NSOperator u_true = random_upper_factor(g, m, extended, band, mass, window.lo + band,
                                          window.hi - band);
  NSOperator w = nswiener::restrict_section(
      nswiener::real_part(nswiener::multiply(nswiener::adjoint(u_true), u_true)), window);
  w.set_exact_interior(window);
  return FactorCase{std::move(u_true), std::move(w), mass};
}

// Largest entry difference between two upper operators over the entries with
// row and column both inside `w` (their sections on w).
inline double section_max_diff(const NSOperator& a, const NSOperator& b, const IndexWindow& w) {
  return nswiener::max_abs_diff(nswiener::restrict_section(a, w),
                                nswiener::restrict_section(b, w));
}

}  // namespace testutil
