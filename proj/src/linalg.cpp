#include "chshkit/linalg.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "chshkit/error.hpp"

namespace chshkit {

ComplexMatrix4 kron(const ComplexMatrix2& x, const ComplexMatrix2& y) {
  ComplexMatrix4 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = x(i, j) * y(k, l);
  return r;
}

namespace {

template <class T, std::size_t N>
double off_diagonal_norm(const Matrix<T, N>& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      if (i != j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

template <class T, std::size_t N>
double frobenius(const Matrix<T, N>& m) {
  double s = 0.0;
  for (const auto& row : m.a)
    for (const auto& v : row) s += std::norm(v);
  return std::sqrt(s);
}

inline double phase_unit(double v) { return v < 0.0 ? -1.0 : 1.0; }
inline Complex phase_unit(Complex v) { return v / std::abs(v); }

// Lexicographic "greater" on eigenvector columns, real part before imaginary.
template <class T, std::size_t N>
bool column_greater(const Matrix<T, N>& v, std::size_t x, std::size_t y) {
  for (std::size_t i = 0; i < N; ++i) {
    const double dr = std::real(v(i, x)) - std::real(v(i, y));
    if (std::abs(dr) > kDegeneracyTol) return dr > 0.0;
    const double di = std::imag(v(i, x)) - std::imag(v(i, y));
    if (std::abs(di) > kDegeneracyTol) return di > 0.0;
  }
  return false;
}

template <class T, std::size_t N>
Spectrum<T, N> jacobi(Matrix<T, N> a) {
  Matrix<T, N> v = Matrix<T, N>::identity();
  const double tol = kJacobiOffTol * std::max(1.0, frobenius(a));

  bool converged = false;
  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= tol) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const T apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;

        // Rotate by diag(1, conj(e)) to make the pivot real, then apply the
        // usual real Jacobi rotation.
        const T e = phase_unit(apq);
        const double app = std::real(a(p, p));
        const double aqq = std::real(a(q, q));
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;

        const T jpp = T(c);
        const T jpq = T(s);
        const T jqp = T(-s) * conj_of(e);
        const T jqq = T(c) * conj_of(e);

        // a <- a J
        for (std::size_t k = 0; k < N; ++k) {
          const T akp = a(k, p);
          const T akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        // a <- J^H a
        for (std::size_t k = 0; k < N; ++k) {
          const T apk = a(p, k);
          const T aqk = a(q, k);
          a(p, k) = conj_of(jpp) * apk + conj_of(jqp) * aqk;
          a(q, k) = conj_of(jpq) * apk + conj_of(jqq) * aqk;
        }
        a(p, q) = T(0);
        a(q, p) = T(0);
        a(p, p) = T(std::real(a(p, p)));
        a(q, q) = T(std::real(a(q, q)));
        // v <- v J
        for (std::size_t k = 0; k < N; ++k) {
          const T vkp = v(k, p);
          const T vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }
  if (!converged && off_diagonal_norm(a) > tol)
    throw Error(Errc::NoConvergence, "Jacobi iteration exceeded " + std::to_string(kJacobiMaxSweeps) + " sweeps");

  // Fix the phase of each eigenvector: the first component of non-negligible
  // magnitude becomes real and positive.
  for (std::size_t k = 0; k < N; ++k) {
    for (std::size_t i = 0; i < N; ++i) {
      if (std::abs(v(i, k)) > 1e-8) {
        const T ph = conj_of(phase_unit(v(i, k)));
        for (std::size_t r = 0; r < N; ++r) v(r, k) *= ph;
        v(i, k) = T(std::abs(v(i, k)));
        break;
      }
    }
  }

  std::array<std::size_t, N> order;
  for (std::size_t k = 0; k < N; ++k) order[k] = k;
  auto before = [&](std::size_t x, std::size_t y) {
    const double dx = std::real(a(x, x));
    const double dy = std::real(a(y, y));
    if (std::abs(dx - dy) > kDegeneracyTol) return dx > dy;
    return column_greater(v, x, y);
  };
  // Insertion sort: the tolerance comparator is not a strict weak ordering.
  for (std::size_t i = 1; i < N; ++i)
    for (std::size_t j = i; j > 0 && before(order[j], order[j - 1]); --j) std::swap(order[j], order[j - 1]);

  Spectrum<T, N> out;
  for (std::size_t k = 0; k < N; ++k) {
    out.values[k] = std::real(a(order[k], order[k]));
    for (std::size_t i = 0; i < N; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

template <class T, std::size_t N>
Matrix<T, N> reconstruct_impl(const Spectrum<T, N>& s) {
  Matrix<T, N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      T acc{};
      for (std::size_t k = 0; k < N; ++k) acc += s.vectors(i, k) * s.values[k] * conj_of(s.vectors(j, k));
      r(i, j) = acc;
    }
  return r;
}

}  // namespace

Spectrum<Complex, 4> eig_hermitian(const ComplexMatrix4& m) {
  const auto mh = adjoint(m);
  const double asym = max_abs_diff(m, mh);
  if (!(asym <= kHermitianTol))
    throw Error(Errc::NotHermitian, "max |m - m^H| = " + std::to_string(asym));
  return jacobi(0.5 * (m + mh));
}

Spectrum<double, 3> eig_symmetric3(const RealMatrix3& m) {
  const auto mt = transpose(m);
  const double asym = max_abs_diff(m, mt);
  if (!(asym <= kHermitianTol))
    throw Error(Errc::NotSymmetric, "max |m - m^T| = " + std::to_string(asym));
  return jacobi(0.5 * (m + mt));
}

ComplexMatrix4 reconstruct(const Spectrum<Complex, 4>& s) { return reconstruct_impl(s); }
RealMatrix3 reconstruct(const Spectrum<double, 3>& s) { return reconstruct_impl(s); }

std::array<double, 4> singular_values(const ComplexMatrix4& m) {
  constexpr double kOrthoTol = 1e-15;
  auto b = m;
  auto column_dot = [&](std::size_t p, std::size_t q) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) s += std::conj(b(i, p)) * b(i, q);
    return s;
  };
  bool converged = false;
  for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p < 3; ++p) {
      for (std::size_t q = p + 1; q < 4; ++q) {
        const double app = column_dot(p, p).real();
        const double aqq = column_dot(q, q).real();
        const Complex apq = column_dot(p, q);
        const double g = std::abs(apq);
        if (g == 0.0 || g <= kOrthoTol * std::sqrt(app * aqq)) continue;
        converged = false;
        // Rotation zeroing the (p, q) entry of b^H b.
        const Complex e = apq / g;
        const double zeta = (aqq - app) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < 4; ++i) {
          const Complex x = b(i, p);
          const Complex y = b(i, q);
          b(i, p) = c * x - s * std::conj(e) * y;
          b(i, q) = s * e * x + c * y;
        }
      }
    }
  }
  if (!converged)
    throw Error(Errc::NoConvergence, "one-sided Jacobi exceeded " + std::to_string(kJacobiMaxSweeps) + " sweeps");

  std::array<double, 4> sv{};
  for (std::size_t j = 0; j < 4; ++j) sv[j] = std::sqrt(column_dot(j, j).real());
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

ComplexMatrix4 sqrt_psd(const ComplexMatrix4& m) {
  auto spec = eig_hermitian(m);
  for (double& ev : spec.values) {
    if (ev < -kPsdClampTol) throw Error(Errc::NotPsd, "eigenvalue " + std::to_string(ev) + " < -1e-8");
    ev = ev > 0.0 ? std::sqrt(ev) : 0.0;
  }
  return reconstruct(spec);
}

}  // namespace chshkit
