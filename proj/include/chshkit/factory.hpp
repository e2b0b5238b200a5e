#pragma once

#include <optional>
#include <string_view>

#include "chshkit/state.hpp"

namespace chshkit {

/// Werner mixing weight, 0 <= gamma <= 1 (Errc::GammaOutOfRange otherwise).
class WernerParameter {
 public:
  explicit WernerParameter(double gamma);
  double value() const noexcept { return gamma_; }

 private:
  double gamma_;
};

/// (|+-> - |-+>)/sqrt(2)
DensityMatrix singlet();
/// (|+-> + |-+>)/sqrt(2)
DensityMatrix triplet0();
/// (|++> + |-->)/sqrt(2)
DensityMatrix phi_plus();
/// (|++> - |-->)/sqrt(2)
DensityMatrix phi_minus();
/// I/4
DensityMatrix unpolarized();

/// (1 - gamma) I/4 + gamma |Psi-><Psi-|
DensityMatrix werner(WernerParameter g);

/// (I + a.sigma)/2 (x) (I + p.sigma)/2; Errc::BlochVectorTooLong when a Bloch
/// vector is longer than one.
DensityMatrix product_state(const Vec3& a, const Vec3& p);

/// Lookup by the names used in state files: singlet, triplet0, phi_plus,
/// phi_minus, unpolarized.
std::optional<DensityMatrix> named_state(std::string_view name);

}  // namespace chshkit
