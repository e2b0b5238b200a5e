#pragma once

// Fixed-size dense linear algebra: 2x2/4x4 complex and 3x3 real matrices,
// cyclic Jacobi eigensolvers and the Hermitian PSD square root.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <type_traits>

namespace chshkit {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;

template <class T, std::size_t N>
struct Matrix {
  std::array<std::array<T, N>, N> a{};

  static constexpr std::size_t size() { return N; }

  T& operator()(std::size_t i, std::size_t j) { return a[i][j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a[i][j]; }

  static Matrix zero() { return Matrix{}; }

  static Matrix identity() {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m.a[i][i] = T(1);
    return m;
  }

  static Matrix diagonal(const std::array<T, N>& d) {
    Matrix m;
    for (std::size_t i = 0; i < N; ++i) m.a[i][i] = d[i];
    return m;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

using ComplexMatrix2 = Matrix<Complex, 2>;
using ComplexMatrix4 = Matrix<Complex, 4>;
using RealMatrix3 = Matrix<double, 3>;

template <class T, std::size_t N>
Matrix<T, N> operator+(const Matrix<T, N>& x, const Matrix<T, N>& y) {
  Matrix<T, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = x(i, j) + y(i, j);
  return r;
}

template <class T, std::size_t N>
Matrix<T, N> operator-(const Matrix<T, N>& x, const Matrix<T, N>& y) {
  Matrix<T, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = x(i, j) - y(i, j);
  return r;
}

template <class T, std::size_t N, class S>
  requires std::is_convertible_v<S, T>
Matrix<T, N> operator*(S s, const Matrix<T, N>& x) {
  Matrix<T, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = T(s) * x(i, j);
  return r;
}

template <class T, std::size_t N>
Matrix<T, N> operator*(const Matrix<T, N>& x, const Matrix<T, N>& y) {
  Matrix<T, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      const T xik = x(i, k);
      for (std::size_t j = 0; j < N; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

inline double conj_of(double v) { return v; }
inline Complex conj_of(Complex v) { return std::conj(v); }

template <class T, std::size_t N>
Matrix<T, N> adjoint(const Matrix<T, N>& x) {
  Matrix<T, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = conj_of(x(j, i));
  return r;
}

template <class T, std::size_t N>
Matrix<T, N> transpose(const Matrix<T, N>& x) {
  Matrix<T, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = x(j, i);
  return r;
}

/// Entrywise complex conjugate.
inline ComplexMatrix4 conjugate(const ComplexMatrix4& x) {
  ComplexMatrix4 r;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r(i, j) = std::conj(x(i, j));
  return r;
}

template <class T, std::size_t N>
T trace(const Matrix<T, N>& x) {
  T t{};
  for (std::size_t i = 0; i < N; ++i) t += x(i, i);
  return t;
}

/// max_ij |x_ij - y_ij|
template <class T, std::size_t N>
double max_abs_diff(const Matrix<T, N>& x, const Matrix<T, N>& y) {
  double m = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) m = std::max(m, std::abs(x(i, j) - y(i, j)));
  return m;
}

template <class T, std::size_t N>
bool all_finite(const Matrix<T, N>& x) {
  for (const auto& row : x.a)
    for (const auto& v : row)
      if (!std::isfinite(std::real(v)) || !std::isfinite(std::imag(v))) return false;
  return true;
}

/// Kronecker product of two single-qubit operators; index 2*i + k is row
/// (i of the first factor, k of the second).
ComplexMatrix4 kron(const ComplexMatrix2& x, const ComplexMatrix2& y);

// Real 3-vector helpers.

inline double dot(const Vec3& x, const Vec3& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; }
inline double norm(const Vec3& x) { return std::sqrt(dot(x, x)); }
inline Vec3 operator+(const Vec3& x, const Vec3& y) { return {x[0] + y[0], x[1] + y[1], x[2] + y[2]}; }
inline Vec3 operator-(const Vec3& x, const Vec3& y) { return {x[0] - y[0], x[1] - y[1], x[2] - y[2]}; }
inline Vec3 operator*(double s, const Vec3& x) { return {s * x[0], s * x[1], s * x[2]}; }

inline Vec3 operator*(const RealMatrix3& m, const Vec3& v) {
  Vec3 r{};
  for (std::size_t i = 0; i < 3; ++i) r[i] = m(i, 0) * v[0] + m(i, 1) * v[1] + m(i, 2) * v[2];
  return r;
}

inline RealMatrix3 outer(const Vec3& x, const Vec3& y) {
  RealMatrix3 r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r(i, j) = x[i] * y[j];
  return r;
}

/// Eigen-decomposition of a Hermitian (or real symmetric) matrix.
/// `vectors` holds the orthonormal eigenvectors as columns, in the same order
/// as `values` (descending).
template <class T, std::size_t N>
struct Spectrum {
  std::array<double, N> values{};
  Matrix<T, N> vectors{};

  std::array<T, N> vector(std::size_t k) const {
    std::array<T, N> v;
    for (std::size_t i = 0; i < N; ++i) v[i] = vectors(i, k);
    return v;
  }
};

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kJacobiOffTol = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;
/// Eigenvalues closer than this are ordered by their eigenvectors instead.
inline constexpr double kDegeneracyTol = 1e-12;
inline constexpr double kPsdClampTol = 1e-8;

/// Throws Errc::NotHermitian when ||m - m^H||_max > 1e-10 and
/// Errc::NoConvergence after 100 sweeps.
Spectrum<Complex, 4> eig_hermitian(const ComplexMatrix4& m);

/// Throws Errc::NotSymmetric / Errc::NoConvergence.
Spectrum<double, 3> eig_symmetric3(const RealMatrix3& m);

/// V diag(v) V^H
ComplexMatrix4 reconstruct(const Spectrum<Complex, 4>& s);
RealMatrix3 reconstruct(const Spectrum<double, 3>& s);

/// Singular values, descending, by one-sided (Hestenes) Jacobi: column
/// rotations until every column pair is orthogonal to 1e-15 relative. These are
/// the square roots of the eigenvalues of m^H m, but small ones come out with
/// absolute accuracy near eps ||m|| rather than sqrt(eps ||m||^2).
/// Throws Errc::NoConvergence after 100 sweeps.
std::array<double, 4> singular_values(const ComplexMatrix4& m);

/// Principal square root of a Hermitian positive semidefinite matrix.
/// Eigenvalues in [-1e-8, 0) are clamped to zero; anything below throws
/// Errc::NotPsd.
ComplexMatrix4 sqrt_psd(const ComplexMatrix4& m);

}  // namespace chshkit
