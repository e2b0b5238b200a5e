#pragma once

// Two-qubit density matrices in the computational basis
// {|++>, |+->, |-+>, |-->} (sigma_z |+> = +|+>) and their Pauli/Bloch form
//
//   rho = 1/4 (I(x)I + A.sigma(x)I + I(x)P.sigma + sum_ij D_ij sigma_i(x)sigma_j).

#include "chshkit/linalg.hpp"

namespace chshkit {

inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-8;

/// sigma_0 = I, sigma_1..3 = x, y, z.
const ComplexMatrix2& pauli(std::size_t i);

/// sigma_i (x) sigma_j for i, j in 0..3.
ComplexMatrix4 pauli_product(std::size_t i, std::size_t j);

/// A validated two-qubit state: Hermitian, unit trace, positive semidefinite.
/// Only obtainable through validate(), so holding one is proof of validity.
class DensityMatrix {
 public:
  /// Errc::NotHermitian, Errc::TraceNotOne or Errc::NotPositive on failure.
  static DensityMatrix validate(const ComplexMatrix4& mat);

  const ComplexMatrix4& matrix() const noexcept { return mat_; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return mat_(i, j); }

 private:
  explicit DensityMatrix(const ComplexMatrix4& mat) : mat_(mat) {}
  ComplexMatrix4 mat_;
};

struct PauliDecomposition {
  Vec3 bloch_a{};          // first particle, A_i = Tr[rho (sigma_i (x) I)]
  Vec3 bloch_b{};          // second particle, P_j = Tr[rho (I (x) sigma_j)]
  RealMatrix3 correlation{};  // D_ij = Tr[rho (sigma_i (x) sigma_j)]
};

PauliDecomposition decompose(const DensityMatrix& rho);

/// Inverse of decompose. Throws Errc::NotPositive when the coefficients do not
/// describe a physical state.
DensityMatrix compose(const PauliDecomposition& pd);

/// Tr(rho^2), in [1/4, 1].
double purity(const DensityMatrix& rho);

}  // namespace chshkit
