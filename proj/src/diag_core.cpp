#include "nswiener/diag_core.hpp"

#include <algorithm>
#include <cmath>

#include "nswiener/errors.hpp"

namespace nswiener {

IndexWindow::IndexWindow(std::int64_t l, std::int64_t h) : lo(l), hi(h) {
  if (l > h) throw DimensionError("window lower edge exceeds upper edge");
}

IndexWindow IndexWindow::hull(const IndexWindow& a, const IndexWindow& b) {
  return IndexWindow(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

std::optional<IndexWindow> IndexWindow::intersect(const IndexWindow& a, const IndexWindow& b) {
  const std::int64_t lo = std::max(a.lo, b.lo);
  const std::int64_t hi = std::min(a.hi, b.hi);
  if (lo > hi) return std::nullopt;
  return IndexWindow(lo, hi);
}

std::optional<IndexWindow> intersect_opt(const std::optional<IndexWindow>& a,
                                         const std::optional<IndexWindow>& b) {
  if (!a || !b) return std::nullopt;
  return IndexWindow::intersect(*a, *b);
}

Diagonal::Diagonal(IndexWindow window, std::vector<CMatrix> blocks)
    : window_(window), blocks_(std::move(blocks)) {
  if (static_cast<std::int64_t>(blocks_.size()) != window_.length())
    throw DimensionError("diagonal block count does not match window length");
  block_size_ = blocks_.front().rows();
  if (block_size_ < 1) throw DimensionError("diagonal blocks must be at least 1x1");
  for (const CMatrix& b : blocks_) {
    if (b.rows() != block_size_ || b.cols() != block_size_)
      throw DimensionError("diagonal blocks must be square and equally sized");
    if (!b.all_finite()) throw DomainError("diagonal block contains a non-finite entry");
  }
}

CMatrix Diagonal::block_at(std::int64_t i) const {
  if (!window_.contains(i)) return CMatrix(block_size_, block_size_);
  return blocks_[static_cast<std::size_t>(i - window_.lo)];
}

const CMatrix& Diagonal::block_clamped(std::int64_t i) const {
  const std::int64_t j = std::clamp(i, window_.lo, window_.hi);
  return blocks_[static_cast<std::size_t>(j - window_.lo)];
}

const CMatrix& Diagonal::block(std::int64_t i) const {
  return blocks_[static_cast<std::size_t>(i - window_.lo)];
}

Diagonal Diagonal::shifted(std::int64_t j) const {
  return Diagonal(window_.shifted(j), blocks_);
}

Diagonal Diagonal::conj_transpose() const {
  std::vector<CMatrix> out;
  out.reserve(blocks_.size());
  for (const CMatrix& b : blocks_) out.push_back(b.adjoint());
  return Diagonal(window_, std::move(out));
}

double Diagonal::norm() const {
  double m = 0.0;
  for (const CMatrix& b : blocks_) m = std::max(m, spectral_norm(b));
  return m;
}

double Diagonal::hs_norm_sq() const {
  double s = 0.0;
  for (const CMatrix& b : blocks_) s += b.frobenius_sq();
  return s;
}

double Diagonal::max_abs() const {
  double m = 0.0;
  for (const CMatrix& b : blocks_) m = std::max(m, b.max_abs());
  return m;
}

Diagonal add_diagonals(const Diagonal& a, const Diagonal& b) {
  if (a.block_size() != b.block_size())
    throw DimensionError("adding diagonals with different block sizes");
  const IndexWindow w = IndexWindow::hull(a.window(), b.window());
  std::vector<CMatrix> blocks;
  blocks.reserve(static_cast<std::size_t>(w.length()));
  for (std::int64_t i = w.lo; i <= w.hi; ++i) blocks.push_back(a.block_at(i) + b.block_at(i));
  return Diagonal(w, std::move(blocks));
}

Diagonal scale_diagonal(const Diagonal& a, Complex s) {
  std::vector<CMatrix> blocks;
  blocks.reserve(static_cast<std::size_t>(a.window().length()));
  for (std::int64_t i = a.window().lo; i <= a.window().hi; ++i)
    blocks.push_back(a.block(i) * s);
  return Diagonal(a.window(), std::move(blocks));
}

std::optional<Diagonal> diagonal_product(const Diagonal& a, const Diagonal& b) {
  if (a.block_size() != b.block_size())
    throw DimensionError("multiplying diagonals with different block sizes");
  const auto w = IndexWindow::intersect(a.window(), b.window());
  if (!w) return std::nullopt;
  std::vector<CMatrix> blocks;
  blocks.reserve(static_cast<std::size_t>(w->length()));
  for (std::int64_t i = w->lo; i <= w->hi; ++i) blocks.push_back(a.block(i) * b.block(i));
  return Diagonal(*w, std::move(blocks));
}

std::optional<Diagonal> clip_diagonal(const Diagonal& a, const IndexWindow& w) {
  const auto iw = IndexWindow::intersect(a.window(), w);
  if (!iw) return std::nullopt;
  std::vector<CMatrix> blocks;
  blocks.reserve(static_cast<std::size_t>(iw->length()));
  for (std::int64_t i = iw->lo; i <= iw->hi; ++i) blocks.push_back(a.block(i));
  return Diagonal(*iw, std::move(blocks));
}

double max_abs_diff(const Diagonal& a, const Diagonal& b) {
  const IndexWindow w = IndexWindow::hull(a.window(), b.window());
  double m = 0.0;
  for (std::int64_t i = w.lo; i <= w.hi; ++i)
    m = std::max(m, a.block_at(i).max_abs_diff(b.block_at(i)));
  return m;
}

NSOperator::NSOperator(int block_size, IndexWindow window)
    : block_size_(block_size), window_(window), exact_(window) {
  if (block_size < 1) throw DimensionError("block size must be at least 1");
}

NSOperator NSOperator::zero(int block_size, IndexWindow window) {
  return NSOperator(block_size, window);
}

NSOperator NSOperator::identity(int block_size, IndexWindow window) {
  NSOperator f(block_size, window);
  std::vector<CMatrix> blocks(static_cast<std::size_t>(window.length()),
                              CMatrix::identity(block_size));
  f.set_diagonal(0, Diagonal(window, std::move(blocks)));
  return f;
}

const Diagonal* NSOperator::diagonal(std::int64_t n) const {
  const auto it = diagonals_.find(n);
  return it == diagonals_.end() ? nullptr : &it->second;
}

std::int64_t NSOperator::n_min() const {
  return diagonals_.empty() ? 0 : diagonals_.begin()->first;
}

std::int64_t NSOperator::n_max() const {
  return diagonals_.empty() ? 0 : diagonals_.rbegin()->first;
}

std::int64_t NSOperator::support_radius() const {
  return std::max(std::abs(n_min()), std::abs(n_max()));
}

NSOperator& NSOperator::set_diagonal(std::int64_t offset, const Diagonal& d) {
  if (d.block_size() != block_size_)
    throw DimensionError("diagonal block size does not match operator block size");
  if (d.is_zero()) {
    diagonals_.erase(offset);
    return *this;
  }
  window_ = IndexWindow::hull(window_, d.window());
  diagonals_.insert_or_assign(offset, d);
  return *this;
}

CMatrix get_entry(const NSOperator& f, std::int64_t row, std::int64_t col) {
  const Diagonal* d = f.diagonal(col - row);
  if (!d) return CMatrix(f.block_size(), f.block_size());
  return d->block_at(col);
}

NSOperator shift_conjugate(const NSOperator& f, std::int64_t j) {
  NSOperator out = NSOperator::zero(f.block_size(), f.window().shifted(j));
  for (const auto& [n, d] : f.diagonals()) out.set_diagonal(n, d.shifted(j));
  if (f.exact_interior())
    out.set_exact_interior(f.exact_interior()->shifted(j));
  else
    out.set_exact_interior(std::nullopt);
  return out;
}

NSOperator restrict_columns(const NSOperator& f, const IndexWindow& w) {
  NSOperator out = NSOperator::zero(f.block_size(), w);
  for (const auto& [n, d] : f.diagonals()) {
    const auto c = clip_diagonal(d, w);
    if (c) out.set_diagonal(n, *c);
  }
  out.set_exact_interior(intersect_opt(f.exact_interior(), w));
  return out;
}

NSOperator restrict_section(const NSOperator& f, const IndexWindow& w) {
  NSOperator out = NSOperator::zero(f.block_size(), w);
  for (const auto& [n, d] : f.diagonals()) {
    // Columns whose row partner i - n also lies inside w.
    const std::int64_t lo = w.lo + std::max<std::int64_t>(n, 0);
    const std::int64_t hi = w.hi + std::min<std::int64_t>(n, 0);
    if (lo > hi) continue;
    const auto c = clip_diagonal(d, IndexWindow(lo, hi));
    if (c) out.set_diagonal(n, *c);
  }
  out.set_exact_interior(intersect_opt(f.exact_interior(), w));
  return out;
}

IndexWindow entry_span(const NSOperator& f) {
  IndexWindow span = f.window();
  for (const auto& [n, d] : f.diagonals()) {
    span = IndexWindow::hull(span, d.window());
    span = IndexWindow::hull(span, d.window().shifted(-n));  // row range
  }
  return span;
}

double max_abs_diff(const NSOperator& a, const NSOperator& b) {
  if (a.block_size() != b.block_size())
    throw DimensionError("comparing operators with different block sizes");
  double m = 0.0;
  const CMatrix z(a.block_size(), a.block_size());
  for (const auto& [n, d] : a.diagonals()) {
    const Diagonal* e = b.diagonal(n);
    m = std::max(m, e ? max_abs_diff(d, *e) : d.max_abs());
  }
  for (const auto& [n, e] : b.diagonals()) {
    if (!a.diagonal(n)) m = std::max(m, e.max_abs());
  }
  return m;
}

bool approx_equal(const NSOperator& a, const NSOperator& b, double tol) {
  return max_abs_diff(a, b) <= tol;
}

}  // namespace nswiener
