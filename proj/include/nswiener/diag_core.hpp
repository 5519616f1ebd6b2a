// Data model for block operators stored as a finite family of diagonals.
//
// An operator F is a sum over offsets n of (shift^n * F_[n]) where F_[n] is a
// block-diagonal operator.  Each diagonal is indexed by COLUMN: the block of
// F_[n] stored at column i is the (i-n, i) block entry of F.  Offsets n > 0
// are super-diagonals (causal direction), n < 0 sub-diagonals.
//
// Stored data is a window view: blocks outside a diagonal's window are zero.
// Every operator additionally records the sub-window on which its entries
// match the untruncated computation (`exact_interior`); constructions are
// exact on their whole window, while multiplication and adjoints shrink the
// exact interior by the support radius of the operands.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "nswiener/cmatrix.hpp"

namespace nswiener {

struct IndexWindow {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  IndexWindow() = default;
  IndexWindow(std::int64_t l, std::int64_t h);

  std::int64_t length() const { return hi - lo + 1; }
  bool contains(std::int64_t i) const { return i >= lo && i <= hi; }
  IndexWindow shifted(std::int64_t j) const { return IndexWindow(lo + j, hi + j); }

  static IndexWindow hull(const IndexWindow& a, const IndexWindow& b);
  static std::optional<IndexWindow> intersect(const IndexWindow& a, const IndexWindow& b);

  bool operator==(const IndexWindow& o) const { return lo == o.lo && hi == o.hi; }
};

// Intersection of two optional windows (nullopt means the empty set).
std::optional<IndexWindow> intersect_opt(const std::optional<IndexWindow>& a,
                                         const std::optional<IndexWindow>& b);

// One stored diagonal: a contiguous run of square blocks indexed by column.
class Diagonal {
 public:
  Diagonal(IndexWindow window, std::vector<CMatrix> blocks);

  const IndexWindow& window() const { return window_; }
  int block_size() const { return block_size_; }

  // Block at column i; zero outside the window.
  CMatrix block_at(std::int64_t i) const;
  // Block at the column clamped into the window (used for edge replication).
  const CMatrix& block_clamped(std::int64_t i) const;
  const CMatrix& block(std::int64_t i) const;  // i must be inside the window

  // Shift conjugation at diagonal level: every block moves from column i to
  // column i + j; the stored values are unchanged.
  Diagonal shifted(std::int64_t j) const;

  // Blockwise conjugate transpose (columns unchanged).
  Diagonal conj_transpose() const;

  // Operator norm: the largest spectral norm over the window.
  double norm() const;
  double hs_norm_sq() const;
  double max_abs() const;
  bool is_zero() const { return max_abs() == 0.0; }

 private:
  IndexWindow window_;
  int block_size_ = 0;
  std::vector<CMatrix> blocks_;
};

Diagonal add_diagonals(const Diagonal& a, const Diagonal& b);
Diagonal scale_diagonal(const Diagonal& a, Complex s);
// Columnwise block product over the window intersection; nullopt when the
// windows are disjoint.
std::optional<Diagonal> diagonal_product(const Diagonal& a, const Diagonal& b);
// Clip to the given window; nullopt when nothing remains.
std::optional<Diagonal> clip_diagonal(const Diagonal& a, const IndexWindow& w);
double max_abs_diff(const Diagonal& a, const Diagonal& b);

class NSOperator {
 public:
  static NSOperator zero(int block_size, IndexWindow window);
  static NSOperator identity(int block_size, IndexWindow window);

  int block_size() const { return block_size_; }
  const IndexWindow& window() const { return window_; }
  const std::optional<IndexWindow>& exact_interior() const { return exact_; }
  void set_exact_interior(std::optional<IndexWindow> w) { exact_ = std::move(w); }

  const std::map<std::int64_t, Diagonal>& diagonals() const { return diagonals_; }
  const Diagonal* diagonal(std::int64_t n) const;
  bool empty_support() const { return diagonals_.empty(); }
  std::int64_t n_min() const;  // 0 for empty support
  std::int64_t n_max() const;
  // Largest |offset| in the support.
  std::int64_t support_radius() const;

  bool is_upper() const { return empty_support() || n_min() >= 0; }
  bool is_lower() const { return empty_support() || n_max() <= 0; }
  bool is_diagonal() const { return empty_support() || (n_min() == 0 && n_max() == 0); }

  // Stores a diagonal (replacing any previous one at that offset).  Exact
  // zero diagonals are pruned; the operator window grows to cover the
  // diagonal's window.  The exact interior is left untouched.
  NSOperator& set_diagonal(std::int64_t offset, const Diagonal& d);

 private:
  NSOperator(int block_size, IndexWindow window);

  int block_size_ = 1;
  IndexWindow window_;
  std::optional<IndexWindow> exact_;
  std::map<std::int64_t, Diagonal> diagonals_;
};

// Block entry of F at (row, col); zero when absent.
CMatrix get_entry(const NSOperator& f, std::int64_t row, std::int64_t col);

// Conjugation by the j-th power of the shift: block (s, t) moves to
// (s + j, t + j).  Support offsets are unchanged, windows shift by j, and
// all diagonal norms are preserved exactly.
NSOperator shift_conjugate(const NSOperator& f, std::int64_t j);

// Keep only columns inside w (every diagonal keeps its full block columns).
// This is the right restriction for causal factors: a column slab of data.
NSOperator restrict_columns(const NSOperator& f, const IndexWindow& w);

// Keep only entries whose row AND column both lie inside w, like taking a
// finite matrix section.  This is the right restriction for self-adjoint
// data: the surviving entry set is symmetric.
NSOperator restrict_section(const NSOperator& f, const IndexWindow& w);

// Hull of all rows and columns carrying stored blocks (the smallest window
// on which a dense rendering loses nothing).  Falls back to the declared
// window for empty support.
IndexWindow entry_span(const NSOperator& f);

// Largest absolute difference between corresponding block entries, taken
// over the union of supports and windows.  Operators that differ only in
// window bookkeeping (zero padding) compare equal.
double max_abs_diff(const NSOperator& a, const NSOperator& b);

bool approx_equal(const NSOperator& a, const NSOperator& b, double tol = 1e-12);

}  // namespace nswiener
