// Small dense complex matrix used for operator blocks and for the dense
// truncation oracle.  Everything here is plain value semantics and plain
// loops: inputs are desk scale, and bit-for-bit determinism of the results
// matters more than speed.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace nswiener {

using Complex = std::complex<double>;

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

  static CMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Complex& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Complex& operator()(int r, int c) const {
    return a_[static_cast<std::size_t>(r) * cols_ + c];
  }

  CMatrix operator+(const CMatrix& o) const;
  CMatrix operator-(const CMatrix& o) const;
  CMatrix operator*(const CMatrix& o) const;
  CMatrix operator*(Complex s) const;

  // Conjugate transpose.
  CMatrix adjoint() const;

  double max_abs() const;
  double frobenius_sq() const;
  bool all_finite() const;

  // Largest absolute entry of (*this - o); the two shapes must match.
  double max_abs_diff(const CMatrix& o) const;

  CMatrix submatrix(int r0, int c0, int nrows, int ncols) const;
  void set_submatrix(int r0, int c0, const CMatrix& block);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Complex> a_;
};

// Gauss-Jordan inverse with partial pivoting.  Throws DomainError on a
// (numerically) singular input.
CMatrix inverse(const CMatrix& a);

// Largest singular value.  1x1 and 2x2 use closed forms; larger matrices use
// power iteration on A*A with two fixed deterministic starts (so the result
// is reproducible and robust against a start vector orthogonal to the top
// singular space).  The returned value never exceeds the true norm.
double spectral_norm(const CMatrix& a);

// Power iteration estimate of the largest singular value with a seeded
// random start.  Returns a certified lower bound on the true value.
double power_sigma_max(const CMatrix& a, int max_iters, double rtol, std::uint64_t seed);

// Principal square root of a Hermitian positive definite matrix.  1x1 and
// 2x2 use closed forms; larger sizes use a Denman-Beavers iteration.
CMatrix hermitian_sqrt(const CMatrix& a);

}  // namespace nswiener
