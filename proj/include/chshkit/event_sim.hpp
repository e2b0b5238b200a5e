#pragma once

// Seeded Monte Carlo coincidence counts from the Born-rule joint outcome
// distribution of a two-qubit state at coplanar analyzer angles.
//
// Reproducibility contract: setting i draws from std::mt19937_64 (whose output
// sequence is fixed by the C++ standard) seeded with stream_seed(seed, i), and
// maps each 64-bit draw to an outcome by comparing against integer cumulative
// thresholds in the order (++, +-, -+, --). Identical configs give identical
// counts regardless of thread count or platform.

#include <cstdint>
#include <vector>

#include "chshkit/chsh.hpp"

namespace chshkit {

struct JointProbabilities {
  double pp = 0.0;
  double pm = 0.0;
  double mp = 0.0;
  double mm = 0.0;
};

/// p(s, t) = 1/4 (1 + s a.A + t b.P + s t a.(D b)) for outcomes s, t = +-1.
/// Values below zero from rounding are clamped and the four renormalized.
JointProbabilities joint_probabilities(const PauliDecomposition& pd, double phi1_deg, double phi2_deg);
JointProbabilities joint_probabilities(const DensityMatrix& rho, double phi1_deg, double phi2_deg);

/// SplitMix64 finalizer applied to seed + (index + 1) * 0x9E3779B97F4A7C15.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

struct SimConfig {
  DensityMatrix state;
  std::vector<AnglePair> settings;
  std::uint64_t events_per_setting = 1;
  std::uint64_t seed = 0;
};

/// Draws `n` outcomes from `p` using the generator seeded by `stream`.
CountTable sample_counts(const JointProbabilities& p, double phi1, double phi2, std::uint64_t n, std::uint64_t stream);

/// One CountTable per setting, in input order. Settings are generated on up
/// to `threads` worker threads (0 picks hardware concurrency).
std::vector<CountTable> simulate(const SimConfig& cfg, unsigned threads = 0);

/// The four angle pairs of each quadruple, in expand() order.
std::vector<AnglePair> expand_all(const std::vector<AngleSettings>& quads);

}  // namespace chshkit
