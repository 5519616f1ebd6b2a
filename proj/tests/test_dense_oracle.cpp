#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <optional>
#include <vector>

#include "nswiener/dense_oracle.hpp"
#include "nswiener/diag_core.hpp"
#include "nswiener/errors.hpp"
#include "test_helpers.hpp"

using namespace nswiener;
using testutil::Rng;

namespace {

NSOperator single_shift(IndexWindow w) {
  // Offset-1 diagonal of ones on w: entries (i-1, i) = 1.
  NSOperator f = NSOperator::zero(1, w);
  std::vector<CMatrix> blocks(static_cast<std::size_t>(w.length()), CMatrix::identity(1));
  f.set_diagonal(1, Diagonal(w, std::move(blocks)));
  return f;
}

DenseTruncation scalar_truncation(IndexWindow w, const CMatrix& data) {
  return DenseTruncation{w, 1, data, w};
}

}  // namespace

TEST_CASE("render places blocks and drops rows outside the window") {
  NSOperator f = single_shift(IndexWindow(0, 2));

  // On the column window itself, the row -1 entry of the column-0 block has
  // no row to live in and is dropped.
  DenseTruncation t = render(f, IndexWindow(0, 2));
  CHECK(t.data.rows() == 3);
  CHECK(t.data(0, 1) == Complex(1.0, 0.0));
  CHECK(t.data(1, 2) == Complex(1.0, 0.0));
  int nonzeros = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (t.data(i, j) != Complex(0.0, 0.0)) ++nonzeros;
  CHECK(nonzeros == 2);

  NSOperator clipped = extract_diagonals(t);
  REQUIRE(clipped.diagonal(1) != nullptr);
  CHECK(clipped.diagonal(1)->window() == IndexWindow(1, 2));  // column 0 was lost

  // The no-argument form renders on entry_span and loses nothing.
  DenseTruncation full = render(f);
  CHECK(full.window == IndexWindow(-1, 2));
  CHECK(max_abs_diff(extract_diagonals(full), f) == 0.0);
}

TEST_CASE("render refuses windows that crop stored columns") {
  NSOperator f = single_shift(IndexWindow(0, 2));
  CHECK_THROWS_AS(render(f, IndexWindow(1, 2)), DimensionError);
  CHECK_THROWS_AS(render(f, IndexWindow(0, 1)), DimensionError);
}

TEST_CASE("render and extract_diagonals are inverse on entry spans") {
  Rng g(0x00D15E7);
  for (int rep = 0; rep < 12; ++rep) {
    const int m = 1 + static_cast<int>(rep % 3);
    NSOperator f = testutil::random_operator(g, m, IndexWindow(-3, 4), -2, 2, 1.0);
    NSOperator back = extract_diagonals(render(f));
    CHECK(max_abs_diff(back, f) == 0.0);
    // Recovered diagonals live on the staircase clip of the rendered span:
    // offset n keeps the columns whose row and column both fit in the span.
    const IndexWindow span = entry_span(f);
    for (const auto& [n, d] : f.diagonals()) {
      REQUIRE(back.diagonal(n) != nullptr);
      const IndexWindow expect(span.lo + std::max<std::int64_t>(n, 0),
                               span.hi + std::min<std::int64_t>(n, 0));
      CHECK(back.diagonal(n)->window() == expect);
      CHECK(expect.lo <= d.window().lo);
      CHECK(expect.hi >= d.window().hi);
    }
  }
}

TEST_CASE("finite sections extend by zero or by edge replication") {
  NSOperator w = testutil::scalar_toeplitz(IndexWindow(0, 10), 1.25, 0.5);

  DenseTruncation zero_ext = finite_section(w, IndexWindow(-3, 13), Extension::kZero);
  CHECK(zero_ext.block(-3, -3).max_abs() == 0.0);
  CHECK(zero_ext.block(-3, -2).max_abs() == 0.0);
  CHECK(zero_ext.block(13, 13).max_abs() == 0.0);
  CHECK(zero_ext.block(0, 0)(0, 0) == Complex(1.25, 0.0));

  DenseTruncation rep = finite_section(w, IndexWindow(-3, 13), Extension::kReplicate);
  CHECK(rep.block(-3, -3)(0, 0) == Complex(1.25, 0.0));
  CHECK(rep.block(-3, -2)(0, 0) == Complex(0.5, 0.0));
  CHECK(rep.block(-2, -3)(0, 0) == Complex(0.5, 0.0));
  CHECK(rep.block(13, 13)(0, 0) == Complex(1.25, 0.0));
  CHECK(rep.block(12, 13)(0, 0) == Complex(0.5, 0.0));
  // Inside the data window the two sections agree.
  CHECK(rep.block(5, 6).max_abs_diff(zero_ext.block(5, 6)) == 0.0);

  // Replicated sections of self-adjoint data are exactly Hermitian.
  CHECK(rep.data.max_abs_diff(rep.data.adjoint()) == 0.0);
}

TEST_CASE("upper Cholesky factorizes a stationary section and keeps the band") {
  NSOperator w = testutil::scalar_toeplitz(IndexWindow(0, 30), 1.25, 0.5);
  DenseTruncation t = render(w, IndexWindow(0, 30));
  DenseTruncation r = cholesky_upper(t);

  // Residual of the factorization.
  CHECK((r.data.adjoint() * r.data).max_abs_diff(t.data) <= 1e-12);

  // The diagonal converges down-window to the symbol factor 1 + 0.5 z.
  CHECK(std::abs(r.data(15, 15).real() - 1.0) <= 1e-6);
  CHECK(std::abs(r.data(15, 16).real() - 0.5) <= 1e-6);
  CHECK(r.data(0, 0).real() == doctest::Approx(std::sqrt(1.25)).epsilon(1e-14));

  // Banded input gives a banded factor with exact zeros outside the band,
  // and exact zeros below the diagonal.
  for (int i = 0; i < 31; ++i)
    for (int j = 0; j < 31; ++j)
      if (j < i || j > i + 1) CHECK(r.data(i, j) == Complex(0.0, 0.0));

  // Bit-determinism: same input, same factor.
  DenseTruncation r2 = cholesky_upper(t);
  CHECK(r.data.max_abs_diff(r2.data) == 0.0);
}

TEST_CASE("Cholesky rejects indefinite and non-Hermitian input") {
  // Symbol 1 + 1.2 cos(theta) dips below zero; the length-11 section is
  // indefinite.
  NSOperator bad = testutil::scalar_toeplitz(IndexWindow(0, 10), 1.0, 0.6);
  DenseTruncation t = render(bad, IndexWindow(0, 10));
  CHECK_THROWS_AS(cholesky_upper(t), PositivityError);
  CHECK_FALSE(try_cholesky_upper(t.data).has_value());

  CMatrix nh(2, 2);
  nh(0, 0) = 1.0;
  nh(1, 1) = 1.0;
  nh(0, 1) = 0.5;  // missing mirror entry
  CHECK_THROWS_AS(cholesky_upper(scalar_truncation(IndexWindow(0, 1), nh)), DomainError);
  CHECK_THROWS_AS(try_cholesky_upper(nh), DomainError);
}

TEST_CASE("triangular back substitution on a frozen bidiagonal system") {
  const int n = 8;
  CMatrix rm(n, n);
  for (int i = 0; i < n; ++i) {
    rm(i, i) = 1.0;
    if (i + 1 < n) rm(i, i + 1) = 0.5;
  }
  DenseTruncation r = scalar_truncation(IndexWindow(0, 7), rm);

  CMatrix b(n, 1);
  b(n - 1, 0) = 1.0;
  CMatrix x = triangular_solve_upper(r, b);
  // Back substitution gives x_{7-k} = (-1/2)^k exactly (powers of two).
  for (int k = 0; k < n; ++k)
    CHECK(x(n - 1 - k, 0) == Complex(std::pow(-0.5, k), 0.0));

  // Residual on a multi-column right-hand side.
  CMatrix bm(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 3; ++j) bm(i, j) = Complex(std::sin(i + j), std::cos(2 * i - j));
  CMatrix xm = triangular_solve_upper(r, bm);
  CHECK((rm * xm).max_abs_diff(bm) <= 1e-14);

  CHECK_THROWS_AS(triangular_solve_upper(r, CMatrix(3, 1)), DimensionError);

  CMatrix lower = rm.adjoint();
  CHECK_THROWS_WITH_AS(triangular_solve_upper(scalar_truncation(IndexWindow(0, 7), lower), b),
                       "triangular_solve_upper: matrix is not block upper triangular",
                       DomainError);

  CMatrix singular = rm;
  singular(3, 3) = 0.0;
  CHECK_THROWS_WITH_AS(triangular_solve_upper(scalar_truncation(IndexWindow(0, 7), singular), b),
                       "triangular_solve_upper: singular diagonal block at index 3",
                       DomainError);
}

TEST_CASE("certified smallest-eigenvalue bound against the closed form") {
  // Tridiagonal Toeplitz section: eigenvalues 1.25 + cos(k pi / 6).
  NSOperator w = testutil::scalar_toeplitz(IndexWindow(0, 4), 1.25, 0.5);
  DenseTruncation t = render(w, IndexWindow(0, 4));
  const double lambda_min = 1.25 - std::cos(std::acos(-1.0) / 6.0);
  const double bound = min_eig_lower_bound(t);
  CHECK(bound <= lambda_min + 1e-12);  // never exceeds the truth
  CHECK(bound >= lambda_min - 1e-6);

  // Indefinite diagonal matrix: the bound goes negative and stays below the
  // smallest eigenvalue.
  CMatrix d(3, 3);
  d(0, 0) = 2.0;
  d(1, 1) = -0.1;
  d(2, 2) = 1.0;
  const double neg = min_eig_lower_bound(d);
  CHECK(neg <= -0.1 + 1e-12);
  CHECK(neg >= -0.1 - 1e-6);

  // A rotated 2x2 with eigenvalues {0.3, -0.2}.
  const double c = std::cos(0.7), s = std::sin(0.7);
  CMatrix q(2, 2);
  q(0, 0) = c;
  q(0, 1) = -s;
  q(1, 0) = s;
  q(1, 1) = c;
  CMatrix diag(2, 2);
  diag(0, 0) = 0.3;
  diag(1, 1) = -0.2;
  CMatrix rot = q * diag * q.adjoint();
  const double rb = min_eig_lower_bound(rot);
  CHECK(rb <= -0.2 + 1e-12);
  CHECK(rb >= -0.2 - 1e-6);

  // Determinism.
  CHECK(min_eig_lower_bound(rot) == rb);
}

TEST_CASE("dense truncation block accessors index by window position") {
  Rng g(42);
  NSOperator f = testutil::random_operator(g, 2, IndexWindow(-2, 2), -1, 1, 1.0);
  DenseTruncation t = render(f);
  CHECK(t.block_count() == t.window.length());
  for (std::int64_t i = t.window.lo; i <= t.window.hi; ++i)
    for (std::int64_t j = t.window.lo; j <= t.window.hi; ++j)
      CHECK(t.block(i, j).max_abs_diff(get_entry(f, i, j)) == 0.0);
}
