#pragma once

// Entanglement and CHSH-violation figures of merit for two-qubit states.

#include <optional>

#include "chshkit/state.hpp"

namespace chshkit {

inline constexpr double kUnitTol = 1e-10;
inline constexpr double kDegenerateDTol = 1e-12;
/// Local hidden-variable bound on the CHSH combination.
inline constexpr double kBellLimit = 2.0;

/// Analyzer directions a, a' (first particle) and b, b' (second particle).
class AnalyzerDirections {
 public:
  /// Errc::NonUnitDirection unless every vector has norm 1 within 1e-10.
  AnalyzerDirections(const Vec3& a, const Vec3& a_prime, const Vec3& b, const Vec3& b_prime);

  const Vec3& a() const noexcept { return a_; }
  const Vec3& a_prime() const noexcept { return a_prime_; }
  const Vec3& b() const noexcept { return b_; }
  const Vec3& b_prime() const noexcept { return b_prime_; }

 private:
  Vec3 a_, a_prime_, b_, b_prime_;
};

struct BellReport {
  double tangle = 0.0;
  double m = 0.0;              // sum of the two largest eigenvalues of D D^T
  double max_violation = 0.0;  // 2 sqrt(m)
  double purity = 0.0;
  bool violates = false;       // max_violation > 2
  /// Absent when the correlation matrix vanishes (no preferred direction).
  std::optional<AnalyzerDirections> optimal;
};

/// max{l1 - l2 - l3 - l4, 0}, l_i the descending square roots of the
/// eigenvalues of rho (sy(x)sy) rho* (sy(x)sy). Evaluated through the
/// Hermitian matrix sqrt(rho) R sqrt(rho), which has the same spectrum.
/// Note this is the Wootters concurrence; "tangle" is kept as the name.
double tangle(const DensityMatrix& rho);

/// (sy(x)sy) rho* (sy(x)sy)
ComplexMatrix4 spin_flip(const DensityMatrix& rho);

/// <B> = a.[D(b + b')] + a'.[D(b - b')]
double bell_mean(const RealMatrix3& correlation, const AnalyzerDirections& dirs);
double bell_mean(const DensityMatrix& rho, const AnalyzerDirections& dirs);

/// Largest CHSH mean value over all analyzer directions, 2 sqrt(M(rho)), with
/// directions that attain it.
BellReport horodecki_max(const DensityMatrix& rho);

bool violates_chsh(const DensityMatrix& rho);

}  // namespace chshkit
