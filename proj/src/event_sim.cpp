#include "chshkit/event_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "chshkit/error.hpp"

namespace chshkit {

JointProbabilities joint_probabilities(const PauliDecomposition& pd, double phi1_deg, double phi2_deg) {
  const Vec3 a = angle_to_direction(phi1_deg);
  const Vec3 b = angle_to_direction(phi2_deg);
  const double ma = dot(a, pd.bloch_a);
  const double mb = dot(b, pd.bloch_b);
  const double e = dot(a, pd.correlation * b);

  std::array<double, 4> p = {
      0.25 * (1.0 + ma + mb + e),
      0.25 * (1.0 + ma - mb - e),
      0.25 * (1.0 - ma + mb - e),
      0.25 * (1.0 - ma - mb + e),
  };
  double sum = 0.0;
  for (double& x : p) {
    x = std::max(x, 0.0);
    sum += x;
  }
  for (double& x : p) x /= sum;
  return {p[0], p[1], p[2], p[3]};
}

JointProbabilities joint_probabilities(const DensityMatrix& rho, double phi1_deg, double phi2_deg) {
  return joint_probabilities(decompose(rho), phi1_deg, phi2_deg);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CountTable sample_counts(const JointProbabilities& p, double phi1, double phi2, std::uint64_t n, std::uint64_t stream) {
  // Outcome k is drawn when u < threshold[k] (and no earlier outcome matched).
  // A cumulative probability of one saturates: every remaining draw lands there.
  const std::array<double, 3> cdf = {p.pp, p.pp + p.pm, p.pp + p.pm + p.mp};
  std::array<std::uint64_t, 3> threshold{};
  std::array<bool, 3> saturated{};
  for (std::size_t k = 0; k < 3; ++k) {
    const double scaled = std::ldexp(cdf[k], 64);
    saturated[k] = cdf[k] >= 1.0 || scaled >= 18446744073709551616.0;
    threshold[k] = saturated[k] ? 0 : static_cast<std::uint64_t>(scaled);
  }

  std::mt19937_64 rng(stream);
  std::array<std::uint64_t, 4> counts{};
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t u = rng();
    std::size_t k = 0;
    while (k < 3 && !saturated[k] && u >= threshold[k]) ++k;
    ++counts[k];
  }
  return {phi1, phi2, counts[0], counts[1], counts[2], counts[3]};
}

std::vector<CountTable> simulate(const SimConfig& cfg, unsigned threads) {
  if (cfg.events_per_setting == 0) throw Error(Errc::EmptyCounts, "events_per_setting must be at least 1");
  const auto pd = decompose(cfg.state);
  std::vector<CountTable> out(cfg.settings.size());

  auto work = [&](std::size_t i) {
    const auto& s = cfg.settings[i];
    out[i] = sample_counts(joint_probabilities(pd, s.phi1, s.phi2), s.phi1, s.phi2, cfg.events_per_setting,
                           stream_seed(cfg.seed, i));
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, out.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < out.size(); ++i) work(i);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < out.size(); i = next++) work(i);
    });
  pool.clear();
  return out;
}

std::vector<AnglePair> expand_all(const std::vector<AngleSettings>& quads) {
  std::vector<AnglePair> out;
  out.reserve(4 * quads.size());
  for (const auto& q : quads)
    for (const auto& p : expand(q)) out.push_back(p);
  return out;
}

}  // namespace chshkit
