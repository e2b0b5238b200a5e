#pragma once

// Independent reference computations used only by tests. None of these go
// through the library's eigensolver or Pauli tables.

#include <algorithm>
#include <array>
#include <complex>
#include <span>
#include <vector>

#include "chshkit/chsh.hpp"
#include "chshkit/state.hpp"

namespace chshkit::test {

using LComplex = std::complex<long double>;
using LMatrix4 = std::array<std::array<LComplex, 4>, 4>;

inline LMatrix4 to_long(const ComplexMatrix4& m) {
  LMatrix4 r{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r[i][j] = {m(i, j).real(), m(i, j).imag()};
  return r;
}

// Quad-precision complex arithmetic for the tangle oracle. Near-zero roots of
// the quartic enter the tangle through a square root, so their absolute error
// must sit far below 1e-16; long double is not enough for low-rank states.
using Quad = __float128;

inline Quad qsqrt(Quad x) {
  if (x <= 0) return 0;
  Quad r = std::sqrt(static_cast<long double>(x));
  for (int i = 0; i < 3; ++i) r = 0.5 * (r + x / r);
  return r;
}

struct QComplex {
  Quad re = 0;
  Quad im = 0;
  QComplex() = default;
  QComplex(Quad r, Quad i = 0) : re(r), im(i) {}
  QComplex& operator+=(const QComplex& o) { re += o.re; im += o.im; return *this; }
  QComplex& operator-=(const QComplex& o) { re -= o.re; im -= o.im; return *this; }
  QComplex& operator*=(const QComplex& o) { return *this = QComplex(re * o.re - im * o.im, re * o.im + im * o.re); }
  QComplex& operator/=(const QComplex& o) {
    const Quad n = o.re * o.re + o.im * o.im;
    return *this = QComplex((re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n);
  }
  friend QComplex operator+(QComplex a, const QComplex& b) { return a += b; }
  friend QComplex operator-(QComplex a, const QComplex& b) { return a -= b; }
  friend QComplex operator*(QComplex a, const QComplex& b) { return a *= b; }
  friend QComplex operator/(QComplex a, const QComplex& b) { return a /= b; }
  friend QComplex operator-(const QComplex& a) { return {-a.re, -a.im}; }
};

inline Quad qabs(const QComplex& z) { return qsqrt(z.re * z.re + z.im * z.im); }
inline QComplex qconj(const QComplex& z) { return {z.re, -z.im}; }

using QMatrix4 = std::array<std::array<QComplex, 4>, 4>;

inline QMatrix4 to_quad(const ComplexMatrix4& m) {
  QMatrix4 r{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r[i][j] = {m(i, j).real(), m(i, j).imag()};
  return r;
}

inline QMatrix4 mul(const QMatrix4& x, const QMatrix4& y) {
  QMatrix4 r{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t j = 0; j < 4; ++j) r[i][j] += x[i][k] * y[k][j];
  return r;
}

/// Coefficients c[0..3] of det(lambda I - m) = lambda^4 + c3 lambda^3 + c2 lambda^2 + c1 lambda + c0,
/// by the Faddeev-LeVerrier recursion.
inline std::array<QComplex, 4> characteristic_polynomial(const QMatrix4& m) {
  std::array<QComplex, 4> c{};
  QMatrix4 mk{};  // M_k
  QComplex ck = 1;  // c_{n}
  for (int k = 1; k <= 4; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I
    QMatrix4 next = mul(m, mk);
    for (std::size_t i = 0; i < 4; ++i) next[i][i] += ck;
    mk = next;
    const QMatrix4 am = mul(m, mk);
    QComplex tr = 0;
    for (std::size_t i = 0; i < 4; ++i) tr += am[i][i];
    ck = -tr / QComplex(k);
    c[4 - k] = ck;
  }
  return c;
}

// Polynomial with coefficients highest degree first.
inline QComplex horner(const std::vector<QComplex>& q, const QComplex& v) {
  QComplex acc = 0;
  for (const auto& coef : q) acc = acc * v + coef;
  return acc;
}

inline std::vector<QComplex> derivative(const std::vector<QComplex>& q) {
  std::vector<QComplex> d;
  const std::size_t deg = q.size() - 1;
  for (std::size_t t = 0; t < deg; ++t) d.push_back(q[t] * QComplex(static_cast<Quad>(deg - t)));
  return d;
}

inline constexpr long double kClusterTol = 1e-9L;

/// Roots of the monic quartic by Durand-Kerner iteration, then Newton polish.
inline std::array<QComplex, 4> quartic_roots(const std::array<QComplex, 4>& c) {
  const std::vector<QComplex> poly = {1, c[3], c[2], c[1], c[0]};
  const auto dpoly = derivative(poly);
  std::array<QComplex, 4> z;
  const QComplex seed(0.4, 0.9);
  z[0] = 1;
  for (std::size_t i = 1; i < 4; ++i) z[i] = z[i - 1] * seed;
  for (int it = 0; it < 5000; ++it) {
    Quad change = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      QComplex den = 1;
      for (std::size_t j = 0; j < 4; ++j)
        if (j != i) den *= (z[i] - z[j]);
      const QComplex step = horner(poly, z[i]) / den;
      z[i] -= step;
      change = std::max(change, qabs(step));
    }
    if (change < 1e-32) break;
  }
  for (auto& r : z) {
    for (int it = 0; it < 5; ++it) {
      const QComplex d = horner(dpoly, r);
      if (qabs(d) < 1e-60) break;
      r -= horner(poly, r) / d;
    }
  }
  // A k-fold root is only linearly convergent above, but it is a simple root
  // of the (k-1)-th derivative: group tight clusters and polish there.
  std::array<bool, 4> done{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (done[i]) continue;
    std::vector<std::size_t> members{i};
    for (std::size_t j = i + 1; j < 4; ++j)
      if (!done[j] && qabs(z[j] - z[i]) < kClusterTol * std::max<Quad>(1, qabs(z[i]))) members.push_back(j);
    QComplex x = 0;
    for (auto k : members) x += z[k];
    x /= QComplex(static_cast<Quad>(members.size()));
    if (members.size() > 1) {
      auto p = poly;
      for (std::size_t d = 1; d < members.size(); ++d) p = derivative(p);
      const auto dp = derivative(p);
      for (int it = 0; it < 100; ++it) {
        const QComplex dv = horner(dp, x);
        if (qabs(dv) == 0) break;
        const QComplex step = horner(p, x) / dv;
        x -= step;
        if (qabs(step) < 1e-34) break;
      }
    }
    for (auto k : members) {
      z[k] = x;
      done[k] = true;
    }
  }
  return z;
}

/// Tangle from the quartic characteristic polynomial of the non-Hermitian
/// product rho (sy(x)sy) rho* (sy(x)sy).
inline double tangle_quartic_oracle(const DensityMatrix& rho) {
  const QMatrix4 r = to_quad(rho.matrix());
  // sigma_y (x) sigma_y written out in the {++, +-, -+, --} basis.
  QMatrix4 yy{};
  yy[0][3] = -1;
  yy[1][2] = 1;
  yy[2][1] = 1;
  yy[3][0] = -1;
  QMatrix4 rc{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) rc[i][j] = qconj(r[i][j]);
  const QMatrix4 prod = mul(r, mul(yy, mul(rc, yy)));
  const auto roots = quartic_roots(characteristic_polynomial(prod));
  std::array<Quad, 4> lambda;
  for (std::size_t i = 0; i < 4; ++i) lambda[i] = qsqrt(roots[i].re);
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  return static_cast<double>(std::max<Quad>(lambda[0] - lambda[1] - lambda[2] - lambda[3], 0));
}

/// det(m - x I) by cofactor expansion of the 4x4.
inline LComplex shifted_det(const ComplexMatrix4& m, double x) {
  LMatrix4 a = to_long(m);
  for (std::size_t i = 0; i < 4; ++i) a[i][i] -= x;
  auto det3 = [&](std::size_t skip_col) {
    std::array<std::size_t, 3> c{};
    for (std::size_t j = 0, k = 0; j < 4; ++j)
      if (j != skip_col) c[k++] = j;
    return a[1][c[0]] * (a[2][c[1]] * a[3][c[2]] - a[2][c[2]] * a[3][c[1]]) -
           a[1][c[1]] * (a[2][c[0]] * a[3][c[2]] - a[2][c[2]] * a[3][c[0]]) +
           a[1][c[2]] * (a[2][c[0]] * a[3][c[1]] - a[2][c[1]] * a[3][c[0]]);
  };
  LComplex d = 0.0L;
  for (std::size_t j = 0; j < 4; ++j) d += (j % 2 == 0 ? 1.0L : -1.0L) * a[0][j] * det3(j);
  return d;
}

/// Tr[rho (s_i (x) s_j)] with the Pauli matrices spelled out by hand.
inline Complex direct_pauli_trace(const ComplexMatrix4& rho, int i, int j) {
  const Complex I(0.0, 1.0);
  const std::array<std::array<std::array<Complex, 2>, 2>, 4> s = {{
      {{{1.0, 0.0}, {0.0, 1.0}}},
      {{{0.0, 1.0}, {1.0, 0.0}}},
      {{{0.0, -I}, {I, 0.0}}},
      {{{1.0, 0.0}, {0.0, -1.0}}},
  }};
  Complex t = 0.0;
  // (s_i (x) s_j)[(a,b),(c,d)] = s_i[a][c] s_j[b][d]; Tr(rho X) = sum rho[r][c] X[c][r]
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) t += rho(2 * a + b, 2 * c + d) * s[i][c][a] * s[j][d][b];
  return t;
}

/// argmin of chi_square over a uniform gamma grid on [0, 1].
inline double grid_search_gamma(std::span<const ChshDatum> data, double step = 1e-4) {
  double best_g = 0.0;
  double best = chi_square_at(data, 0.0);
  const int n = static_cast<int>(std::lround(1.0 / step));
  for (int i = 1; i <= n; ++i) {
    const double g = i * step;
    const double c = chi_square_at(data, g);
    if (c < best) {
      best = c;
      best_g = g;
    }
  }
  return best_g;
}

/// Singlet correlation -cos(phi1 - phi2), summed into the CHSH combination.
inline double singlet_chsh_closed_form(const AngleSettings& s) {
  auto e = [](double x, double y) { return -std::cos((x - y) * M_PI / 180.0); };
  return std::abs(e(s.phi1, s.phi2) + e(s.phi1, s.phi2p) + e(s.phi1p, s.phi2) - e(s.phi1p, s.phi2p));
}

}  // namespace chshkit::test
