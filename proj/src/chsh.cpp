#include "chshkit/chsh.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "chshkit/error.hpp"
#include "chshkit/factory.hpp"

namespace chshkit {

namespace {

constexpr double kAngleMatchTol = 1e-9;
// Singlet CHSH values below this carry no information about gamma.
constexpr double kNullPrediction = 1e-12;

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

const RealMatrix3& singlet_correlation() {
  static const RealMatrix3 d = decompose(singlet()).correlation;
  return d;
}

double singlet_chsh(const AngleSettings& s) { return std::abs(chsh_combination(singlet_correlation(), s)); }

void check_errors(std::span<const ChshDatum> data) {
  if (data.empty()) throw Error(Errc::EmptyData, "no CHSH data");
  for (std::size_t i = 0; i < data.size(); ++i)
    if (!(data[i].dr_exp > 0.0))
      throw Error(Errc::NonpositiveError, "datum " + std::to_string(i) + " has error " + std::to_string(data[i].dr_exp));
}

}  // namespace

std::array<AnglePair, 4> expand(const AngleSettings& s) {
  return {{{s.phi1, s.phi2}, {s.phi1, s.phi2p}, {s.phi1p, s.phi2}, {s.phi1p, s.phi2p}}};
}

Vec3 angle_to_direction(double phi_deg) {
  const double phi = radians(phi_deg);
  return {std::sin(phi), 0.0, std::cos(phi)};
}

double correlation(const RealMatrix3& correlation_matrix, double phi1_deg, double phi2_deg) {
  return dot(angle_to_direction(phi1_deg), correlation_matrix * angle_to_direction(phi2_deg));
}

double correlation(const DensityMatrix& rho, double phi1_deg, double phi2_deg) {
  return correlation(decompose(rho).correlation, phi1_deg, phi2_deg);
}

double chsh_combination(const RealMatrix3& correlation_matrix, const AngleSettings& s) {
  const auto p = expand(s);
  return correlation(correlation_matrix, p[0].phi1, p[0].phi2) + correlation(correlation_matrix, p[1].phi1, p[1].phi2) +
         correlation(correlation_matrix, p[2].phi1, p[2].phi2) - correlation(correlation_matrix, p[3].phi1, p[3].phi2);
}

double chsh_value(const DensityMatrix& rho, const AngleSettings& s) {
  return std::abs(chsh_combination(decompose(rho).correlation, s));
}

CorrelationEstimate estimate_correlation(const CountTable& c) {
  const std::uint64_t n = c.total();
  if (n == 0) throw Error(Errc::EmptyCounts, "no coincidences at (" + std::to_string(c.phi1) + ", " + std::to_string(c.phi2) + ")");
  const double total = static_cast<double>(n);
  const double agree = static_cast<double>(c.n_pp + c.n_mm);
  const double disagree = static_cast<double>(c.n_pm + c.n_mp);
  const double e = (agree - disagree) / total;
  return {e, std::sqrt(std::max(1.0 - e * e, 0.0) / total)};
}

ChshDatum estimate_chsh(std::span<const CountTable, 4> t) {
  auto same = [](double x, double y) { return std::abs(x - y) <= kAngleMatchTol; };
  if (!same(t[0].phi1, t[1].phi1) || !same(t[2].phi1, t[3].phi1) || !same(t[0].phi2, t[2].phi2) ||
      !same(t[1].phi2, t[3].phi2))
    throw Error(Errc::ParseError, "count tables do not form a CHSH setting quadruple");

  std::array<CorrelationEstimate, 4> e;
  for (std::size_t i = 0; i < 4; ++i) e[i] = estimate_correlation(t[i]);

  ChshDatum d;
  d.settings = {t[0].phi1, t[2].phi1, t[0].phi2, t[1].phi2};
  d.r_exp = std::abs(e[0].e + e[1].e + e[2].e - e[3].e);
  double var = 0.0;
  for (const auto& x : e) var += x.sigma * x.sigma;
  d.dr_exp = std::sqrt(var);
  return d;
}

std::vector<ChshDatum> estimate_chsh_all(std::span<const CountTable> tables) {
  if (tables.size() % 4 != 0)
    throw Error(Errc::ParseError, std::to_string(tables.size()) + " count rows is not a multiple of four");
  std::vector<ChshDatum> out;
  out.reserve(tables.size() / 4);
  for (std::size_t i = 0; i < tables.size(); i += 4) out.push_back(estimate_chsh(tables.subspan(i).first<4>()));
  return out;
}

double chi_square(std::span<const ChshDatum> data, std::span<const double> predictions) {
  if (data.size() != predictions.size())
    throw Error(Errc::LengthMismatch,
                std::to_string(data.size()) + " data vs " + std::to_string(predictions.size()) + " predictions");
  check_errors(data);
  double chi2 = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double pull = (predictions[i] - data[i].r_exp) / data[i].dr_exp;
    chi2 += pull * pull;
  }
  return chi2;
}

std::vector<double> werner_predictions(std::span<const ChshDatum> data, double gamma) {
  std::vector<double> out;
  out.reserve(data.size());
  for (const auto& d : data) out.push_back(gamma * singlet_chsh(d.settings));
  return out;
}

double chi_square_at(std::span<const ChshDatum> data, double gamma) {
  return chi_square(data, werner_predictions(data, gamma));
}

FitResult fit_gamma(std::span<const ChshDatum> data) {
  check_errors(data);

  // chi2(gamma) is quadratic: minimum at sum(S R / dR^2) / sum(S^2 / dR^2).
  double num = 0.0;
  double den = 0.0;
  double largest = 0.0;
  for (const auto& d : data) {
    const double s = singlet_chsh(d.settings);
    largest = std::max(largest, s);
    const double w = 1.0 / (d.dr_exp * d.dr_exp);
    num += s * d.r_exp * w;
    den += s * s * w;
  }
  if (!(largest > kNullPrediction)) throw Error(Errc::DegenerateData, "singlet predictions vanish at every setting");

  FitResult fit;
  fit.gamma_hat = std::clamp(num / den, 0.0, 1.0);
  fit.gamma_sigma = 1.0 / std::sqrt(den);
  const auto pred = werner_predictions(data, fit.gamma_hat);
  fit.chi2_at_min = chi_square(data, pred);
  fit.chi2_case1 = chi_square_at(data, 1.0);
  fit.chi2_case2 = chi_square_at(data, kCase2Gamma);
  fit.residuals.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i)
    fit.residuals.push_back({pred[i], data[i].r_exp, data[i].dr_exp, (pred[i] - data[i].r_exp) / data[i].dr_exp});
  return fit;
}

}  // namespace chshkit
