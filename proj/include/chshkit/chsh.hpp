#pragma once

// Coplanar CHSH protocol: correlation functions at analyzer angles, the
// four-setting combination, the coincidence-count estimator and the
// chi-square fit of the Werner mixing weight.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "chshkit/state.hpp"

namespace chshkit {

/// Analyzer angles in degrees, ordered as in E(phi1, phi1', phi2, phi2').
struct AngleSettings {
  double phi1 = 0.0;
  double phi1p = 0.0;
  double phi2 = 0.0;
  double phi2p = 0.0;
};

struct AnglePair {
  double phi1 = 0.0;
  double phi2 = 0.0;
};

/// (phi1, phi2), (phi1, phi2'), (phi1', phi2), (phi1', phi2'); the last term
/// enters the CHSH combination with a minus sign.
std::array<AnglePair, 4> expand(const AngleSettings& s);

struct CountTable {
  double phi1 = 0.0;
  double phi2 = 0.0;
  std::uint64_t n_pp = 0;
  std::uint64_t n_pm = 0;
  std::uint64_t n_mp = 0;
  std::uint64_t n_mm = 0;

  std::uint64_t total() const noexcept { return n_pp + n_pm + n_mp + n_mm; }
};

struct CorrelationEstimate {
  double e = 0.0;
  double sigma = 0.0;
};

struct ChshDatum {
  AngleSettings settings;
  double r_exp = 0.0;
  double dr_exp = 1.0;
};

struct Residual {
  double r_th = 0.0;
  double r_exp = 0.0;
  double dr_exp = 0.0;
  double pull = 0.0;  // (r_th - r_exp) / dr_exp
};

struct FitResult {
  double gamma_hat = 0.0;
  double gamma_sigma = 0.0;  // half-width of the chi2_min + 1 interval
  double chi2_at_min = 0.0;
  double chi2_case1 = 0.0;   // pure singlet, gamma = 1
  double chi2_case2 = 0.0;   // Werner, gamma = 0.9
  std::vector<Residual> residuals;  // at gamma_hat
};

/// Werner weight of the "case 2" comparison.
inline constexpr double kCase2Gamma = 0.9;

/// Unit vector in the x-z plane at angle phi (degrees) from +z: (sin phi, 0, cos phi).
Vec3 angle_to_direction(double phi_deg);

/// E(phi1, phi2) = a.(D b).
double correlation(const RealMatrix3& correlation_matrix, double phi1_deg, double phi2_deg);
double correlation(const DensityMatrix& rho, double phi1_deg, double phi2_deg);

/// E(phi1,phi2) + E(phi1,phi2') + E(phi1',phi2) - E(phi1',phi2'), signed.
double chsh_combination(const RealMatrix3& correlation_matrix, const AngleSettings& s);

/// |chsh_combination|
double chsh_value(const DensityMatrix& rho, const AngleSettings& s);

/// e = (N++ + N-- - N+- - N-+)/N, sigma = sqrt((1 - e^2)/N).
/// Errc::EmptyCounts when N = 0.
CorrelationEstimate estimate_correlation(const CountTable& c);

/// Measured CHSH datum from the four count tables of one setting quadruple,
/// in expand() order. Setting errors add in quadrature. Errc::ParseError if the
/// angles do not form a quadruple.
ChshDatum estimate_chsh(std::span<const CountTable, 4> tables);

/// Groups consecutive runs of four count tables into CHSH data.
std::vector<ChshDatum> estimate_chsh_all(std::span<const CountTable> tables);

/// sum_i ((pred_i - r_i)/dr_i)^2, accumulated in index order.
/// Errc::LengthMismatch, Errc::EmptyData, Errc::NonpositiveError.
double chi_square(std::span<const ChshDatum> data, std::span<const double> predictions);

/// gamma * chsh_value(singlet, settings_i) for each datum.
std::vector<double> werner_predictions(std::span<const ChshDatum> data, double gamma);

double chi_square_at(std::span<const ChshDatum> data, double gamma);

/// Weighted least-squares gamma over [0, 1] for R_th = gamma * S_i.
/// Errc::EmptyData, Errc::NonpositiveError, Errc::DegenerateData (all S_i = 0).
FitResult fit_gamma(std::span<const ChshDatum> data);

}  // namespace chshkit
