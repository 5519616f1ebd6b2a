#include "nswiener/cmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nswiener/errors.hpp"

namespace nswiener {

CMatrix CMatrix::identity(int n) {
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
  CMatrix r(rows_, cols_);
  for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
  return r;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
  CMatrix r(rows_, cols_);
  for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
  return r;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
  if (cols_ != o.rows_) throw DimensionError("matrix product shape mismatch");
  CMatrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const Complex f = (*this)(i, k);
      if (f == Complex(0.0, 0.0)) continue;
      for (int j = 0; j < o.cols_; ++j) r(i, j) += f * o(k, j);
    }
  }
  return r;
}

CMatrix CMatrix::operator*(Complex s) const {
  CMatrix r(rows_, cols_);
  for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
  return r;
}

CMatrix CMatrix::adjoint() const {
  CMatrix r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& z : a_) m = std::max(m, std::abs(z));
  return m;
}

double CMatrix::frobenius_sq() const {
  double s = 0.0;
  for (const Complex& z : a_) s += std::norm(z);
  return s;
}

bool CMatrix::all_finite() const {
  for (const Complex& z : a_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

double CMatrix::max_abs_diff(const CMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix shape mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a_.size(); ++k) m = std::max(m, std::abs(a_[k] - o.a_[k]));
  return m;
}

CMatrix CMatrix::submatrix(int r0, int c0, int nrows, int ncols) const {
  CMatrix r(nrows, ncols);
  for (int i = 0; i < nrows; ++i)
    for (int j = 0; j < ncols; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
  return r;
}

void CMatrix::set_submatrix(int r0, int c0, const CMatrix& block) {
  for (int i = 0; i < block.rows(); ++i)
    for (int j = 0; j < block.cols(); ++j) (*this)(r0 + i, c0 + j) = block(i, j);
}

CMatrix inverse(const CMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("inverse of non-square matrix");
  const int n = a.rows();
  CMatrix w = a;
  CMatrix inv = CMatrix::identity(n);
  for (int col = 0; col < n; ++col) {
    // Partial pivoting on absolute value.
    int piv = col;
    double best = std::abs(w(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(w(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best < 1e-300) throw DomainError("singular block: no usable pivot");
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(w(piv, j), w(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    const Complex d = w(col, col);
    for (int j = 0; j < n; ++j) {
      w(col, j) /= d;
      inv(col, j) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Complex f = w(r, col);
      if (f == Complex(0.0, 0.0)) continue;
      for (int j = 0; j < n; ++j) {
        w(r, j) -= f * w(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

namespace {

double vec_norm(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const Complex& z : v) s += std::norm(z);
  return std::sqrt(s);
}

// One power-iteration run on A*A from the given start vector.
double power_run(const CMatrix& a, std::vector<Complex> v, int max_iters, double rtol) {
  const int n = a.cols();
  const double nv = vec_norm(v);
  if (nv == 0.0) return 0.0;
  for (Complex& z : v) z /= nv;
  double sigma = 0.0;
  double prev = -1.0;
  std::vector<Complex> w(static_cast<std::size_t>(a.rows()));
  std::vector<Complex> u(static_cast<std::size_t>(n));
  for (int it = 0; it < max_iters; ++it) {
    // w = A v
    for (int i = 0; i < a.rows(); ++i) {
      Complex s = 0.0;
      for (int j = 0; j < n; ++j) s += a(i, j) * v[j];
      w[i] = s;
    }
    sigma = vec_norm(w);
    if (sigma == 0.0) return 0.0;
    // u = A* w
    for (int j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (int i = 0; i < a.rows(); ++i) s += std::conj(a(i, j)) * w[i];
      u[j] = s;
    }
    const double nu = vec_norm(u);
    if (nu == 0.0) return sigma;
    for (int j = 0; j < n; ++j) v[j] = u[j] / nu;
    if (prev >= 0.0 && std::abs(sigma - prev) <= rtol * std::max(sigma, 1e-300)) break;
    prev = sigma;
  }
  return sigma;
}

}  // namespace

double power_sigma_max(const CMatrix& a, int max_iters, double rtol, std::uint64_t seed) {
  if (a.rows() == 0 || a.cols() == 0 || a.max_abs() == 0.0) return 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<Complex> v(static_cast<std::size_t>(a.cols()));
  for (Complex& z : v) z = Complex(uni(rng), uni(rng));
  return power_run(a, std::move(v), max_iters, rtol);
}

double spectral_norm(const CMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  if (a.rows() == 1 && a.cols() == 1) return std::abs(a(0, 0));
  if (a.rows() == 2 && a.cols() == 2) {
    // Eigenvalues of the 2x2 Hermitian Gram matrix A*A in closed form.
    const double g00 = std::norm(a(0, 0)) + std::norm(a(1, 0));
    const double g11 = std::norm(a(0, 1)) + std::norm(a(1, 1));
    const Complex g01 = std::conj(a(0, 0)) * a(0, 1) + std::conj(a(1, 0)) * a(1, 1);
    const double mid = 0.5 * (g00 + g11);
    const double rad = std::sqrt(0.25 * (g00 - g11) * (g00 - g11) + std::norm(g01));
    return std::sqrt(std::max(0.0, mid + rad));
  }
  const double s1 = power_sigma_max(a, 1000, 1e-15, 0xC0FFEEull);
  const double s2 = power_sigma_max(a, 1000, 1e-15, 0xBADDCAFEull);
  return std::max(s1, s2);
}

CMatrix hermitian_sqrt(const CMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("square root of non-square matrix");
  const int n = a.rows();
  if (n == 1) {
    const double v = a(0, 0).real();
    if (v <= 0.0) throw DomainError("square root of non-positive 1x1 matrix");
    CMatrix r(1, 1);
    r(0, 0) = std::sqrt(v);
    return r;
  }
  if (n == 2) {
    // sqrt(M) = (M + sqrt(det) I) / sqrt(trace + 2 sqrt(det)) for Hermitian
    // positive definite M.
    const double tr = a(0, 0).real() + a(1, 1).real();
    const double det = a(0, 0).real() * a(1, 1).real() - std::norm(a(0, 1));
    if (det <= 0.0 || tr <= 0.0) throw DomainError("square root of non-positive 2x2 matrix");
    const double sd = std::sqrt(det);
    const double denom = std::sqrt(tr + 2.0 * sd);
    CMatrix r = a;
    r(0, 0) += sd;
    r(1, 1) += sd;
    return r * Complex(1.0 / denom, 0.0);
  }
  // Denman-Beavers iteration: Y -> (Y + Z^-1)/2, Z -> (Z + Y^-1)/2.
  CMatrix y = a;
  CMatrix z = CMatrix::identity(n);
  for (int it = 0; it < 60; ++it) {
    const CMatrix yi = inverse(y);
    const CMatrix zi = inverse(z);
    const CMatrix y_next = (y + zi) * Complex(0.5, 0.0);
    const CMatrix z_next = (z + yi) * Complex(0.5, 0.0);
    const double step = y_next.max_abs_diff(y);
    y = y_next;
    z = z_next;
    if (step <= 1e-15 * std::max(1.0, y.max_abs())) break;
  }
  return y;
}

}  // namespace nswiener
