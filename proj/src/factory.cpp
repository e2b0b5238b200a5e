#include "chshkit/factory.hpp"

#include <string>

#include "chshkit/error.hpp"

namespace chshkit {

WernerParameter::WernerParameter(double gamma) : gamma_(gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw Error(Errc::GammaOutOfRange, "gamma = " + std::to_string(gamma) + " not in [0, 1]");
}

namespace {

// |psi><psi| for psi = (|i> + sign |j>)/sqrt(2).
ComplexMatrix4 bell_projector(std::size_t i, std::size_t j, double sign) {
  ComplexMatrix4 m;
  m(i, i) = 0.5;
  m(j, j) = 0.5;
  m(i, j) = 0.5 * sign;
  m(j, i) = 0.5 * sign;
  return m;
}

ComplexMatrix4 unpolarized_matrix() { return 0.25 * ComplexMatrix4::identity(); }

}  // namespace

DensityMatrix singlet() { return DensityMatrix::validate(bell_projector(1, 2, -1.0)); }
DensityMatrix triplet0() { return DensityMatrix::validate(bell_projector(1, 2, 1.0)); }
DensityMatrix phi_plus() { return DensityMatrix::validate(bell_projector(0, 3, 1.0)); }
DensityMatrix phi_minus() { return DensityMatrix::validate(bell_projector(0, 3, -1.0)); }
DensityMatrix unpolarized() { return DensityMatrix::validate(unpolarized_matrix()); }

DensityMatrix werner(WernerParameter g) {
  const double gamma = g.value();
  return DensityMatrix::validate((1.0 - gamma) * unpolarized_matrix() + gamma * bell_projector(1, 2, -1.0));
}

DensityMatrix product_state(const Vec3& a, const Vec3& p) {
  constexpr double tol = 1e-12;
  if (norm(a) > 1.0 + tol || norm(p) > 1.0 + tol)
    throw Error(Errc::BlochVectorTooLong, "|a| = " + std::to_string(norm(a)) + ", |p| = " + std::to_string(norm(p)));
  auto local = [](const Vec3& v) {
    ComplexMatrix2 m = pauli(0);
    for (std::size_t i = 0; i < 3; ++i) m = m + v[i] * pauli(i + 1);
    return 0.5 * m;
  };
  return DensityMatrix::validate(kron(local(a), local(p)));
}

std::optional<DensityMatrix> named_state(std::string_view name) {
  if (name == "singlet") return singlet();
  if (name == "triplet0") return triplet0();
  if (name == "phi_plus") return phi_plus();
  if (name == "phi_minus") return phi_minus();
  if (name == "unpolarized") return unpolarized();
  return std::nullopt;
}

}  // namespace chshkit
