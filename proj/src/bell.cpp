#include "chshkit/bell.hpp"

#include <algorithm>
#include <string>

#include "chshkit/error.hpp"

namespace chshkit {

AnalyzerDirections::AnalyzerDirections(const Vec3& a, const Vec3& a_prime, const Vec3& b, const Vec3& b_prime)
    : a_(a), a_prime_(a_prime), b_(b), b_prime_(b_prime) {
  for (const Vec3* v : {&a_, &a_prime_, &b_, &b_prime_}) {
    const double n = norm(*v);
    if (!(std::abs(n - 1.0) <= kUnitTol))
      throw Error(Errc::NonUnitDirection, "analyzer direction has norm " + std::to_string(n));
  }
}

ComplexMatrix4 spin_flip(const DensityMatrix& rho) {
  const auto yy = pauli_product(2, 2);
  return yy * conjugate(rho.matrix()) * yy;
}

double tangle(const DensityMatrix& rho) {
  // sqrt(rho) R sqrt(rho) = B^H B with B = conj(sqrt(rho)) (sy x sy) sqrt(rho), so the
  // lambdas are the singular values of B. Taking them directly avoids square
  // roots of eigenvalues that are zero up to rounding.
  const auto root = sqrt_psd(rho.matrix());
  const auto lambda = singular_values(conjugate(root) * pauli_product(2, 2) * root);
  return std::max(lambda[0] - lambda[1] - lambda[2] - lambda[3], 0.0);
}

double bell_mean(const RealMatrix3& correlation, const AnalyzerDirections& dirs) {
  return dot(dirs.a(), correlation * (dirs.b() + dirs.b_prime())) +
         dot(dirs.a_prime(), correlation * (dirs.b() - dirs.b_prime()));
}

double bell_mean(const DensityMatrix& rho, const AnalyzerDirections& dirs) {
  return bell_mean(decompose(rho).correlation, dirs);
}

namespace {

Vec3 normalized(const Vec3& v) { return (1.0 / norm(v)) * v; }

Vec3 to_vec3(const std::array<double, 3>& v) { return {v[0], v[1], v[2]}; }

// D^T D has the spectrum of D D^T; its eigenvectors are the second
// particle's directions c maximizing |Dc|^2.
Spectrum<double, 3> correlation_spectrum(const RealMatrix3& d) { return eig_symmetric3(transpose(d) * d); }

double two_largest(const Spectrum<double, 3>& s) { return std::max(s.values[0] + s.values[1], 0.0); }

}  // namespace

BellReport horodecki_max(const DensityMatrix& rho) {
  const RealMatrix3 d = decompose(rho).correlation;
  const auto spec = correlation_spectrum(d);

  BellReport report;
  report.m = two_largest(spec);
  report.max_violation = 2.0 * std::sqrt(report.m);
  report.violates = report.max_violation > kBellLimit;
  report.purity = purity(rho);
  report.tangle = tangle(rho);

  const Vec3 c = to_vec3(spec.vector(0));
  const Vec3 c_prime = to_vec3(spec.vector(1));
  const Vec3 dc = d * c;
  const Vec3 dc_prime = d * c_prime;
  const double n1 = norm(dc);
  const double n2 = norm(dc_prime);
  if (n1 <= kDegenerateDTol) return report;

  const double theta = n2 > 0.0 ? std::atan2(n2, n1) : 0.0;
  const Vec3 a = normalized(dc);
  // With theta = 0 the a' term carries weight b - b' = 0, so any unit vector works.
  const Vec3 a_prime = n2 > 0.0 ? normalized(dc_prime) : a;
  const Vec3 b = normalized(std::cos(theta) * c + std::sin(theta) * c_prime);
  const Vec3 b_prime = normalized(std::cos(theta) * c - std::sin(theta) * c_prime);
  report.optimal.emplace(a, a_prime, b, b_prime);
  return report;
}

bool violates_chsh(const DensityMatrix& rho) {
  return 2.0 * std::sqrt(two_largest(correlation_spectrum(decompose(rho).correlation))) > kBellLimit;
}

}  // namespace chshkit
