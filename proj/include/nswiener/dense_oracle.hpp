// Dense window truncations of diagonal-form operators, and the brute-force
// linear algebra used both as an independent cross-check for the diagonal
// arithmetic and as the factorization kernel.
//
// All routines are plain sequential loops so results are bit-deterministic
// for fixed input.
#pragma once

#include <optional>

#include "nswiener/diag_core.hpp"

namespace nswiener {

// A dense matrix image of an operator on a window: rows and columns both run
// over window.lo..window.hi, each index carrying a block_size-wide slice.
// exact_interior marks the sub-window whose entries are known to agree with
// the untruncated operator (a fresh rendering is exact everywhere; products
// of renderings are not).
struct DenseTruncation {
  IndexWindow window;
  int block_size = 1;
  CMatrix data;
  IndexWindow exact_interior;

  std::int64_t block_count() const { return window.length(); }
  int row_of(std::int64_t i) const {
    return static_cast<int>((i - window.lo) * block_size);
  }
  CMatrix block(std::int64_t i, std::int64_t j) const {
    return data.submatrix(row_of(i), row_of(j), block_size, block_size);
  }
};

// How a finite section treats columns outside the stored windows.
enum class Extension {
  kZero,       // stored data only: the literal truncation of the view
  kReplicate,  // clamp each diagonal to its nearest stored column (extends
               // the boundary pattern, as for a view of an infinite operator)
};

// Faithful dense image of F on the window.  The window must cover every
// diagonal's column window (otherwise stored data would be silently cropped,
// which is refused).  Entries whose row falls outside the window are part of
// the complement of the section and are dropped; pass a window covering
// entry_span(F) (the default) to retain every stored entry, in which case
// extract_diagonals is an exact inverse.
DenseTruncation render(const NSOperator& f, const IndexWindow& window);
DenseTruncation render(const NSOperator& f);

// Finite section of F on an arbitrary window with the chosen boundary
// extension.  No preconditions on the window; used by the factorization
// engine, which pads beyond the stored data.
DenseTruncation finite_section(const NSOperator& f, const IndexWindow& window, Extension ext);

// Reads every diagonal back out of a dense truncation (zero diagonals are
// pruned).  Exact inverse of render on windows covering entry_span.
NSOperator extract_diagonals(const DenseTruncation& t);

// Upper Cholesky factor R with positive real diagonal: data = R* R.
// Requires Hermitian data (within 1e-10) and positive definiteness; a pivot
// at or below pivot_floor reports failure.  Elimination never touches
// entries outside the scalar bandwidth of the input, so banded input yields
// a factor with the same bandwidth (assertable by a zero-pattern check).
DenseTruncation cholesky_upper(const DenseTruncation& t, double pivot_floor = 1e-10);

// Non-throwing core used by the bisection certificate below: returns nullopt
// instead of throwing when a pivot fails (still throws on non-Hermitian
// input, which is a caller bug rather than an indefiniteness finding).
std::optional<CMatrix> try_cholesky_upper(const CMatrix& a, double pivot_floor = 1e-10);

// Solves R X = B by block back-substitution for block upper triangular R
// (entries strictly below the block diagonal must vanish; diagonal blocks
// must be invertible).
CMatrix triangular_solve_upper(const DenseTruncation& r, const CMatrix& b);

// Certified lower bound on the smallest eigenvalue of Hermitian data: the
// largest shift lambda found by bisection such that data - lambda I admits a
// Cholesky factorization.  Never exceeds the true smallest eigenvalue, and
// returns values <= 0 for indefinite input.
double min_eig_lower_bound(const DenseTruncation& t, double tol = 1e-8);
double min_eig_lower_bound(const CMatrix& a, double tol = 1e-8);

}  // namespace nswiener
