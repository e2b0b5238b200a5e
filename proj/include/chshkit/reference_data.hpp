#pragma once

// Reference two-proton spin-correlation measurements (KVI data set) and the
// printed prediction columns, embedded so the comparison runs offline.

#include <span>
#include <string_view>
#include <vector>

#include "chshkit/chsh.hpp"

namespace chshkit {

inline constexpr std::string_view kKviDataVersion = "kvi-chsh-table/1";

struct KviRow {
  AngleSettings settings;
  double case1_printed;  // singlet prediction as published
  double case2_printed;  // Werner gamma = 0.9 prediction as published
  double r_exp;
  double dr_exp;
};

std::span<const KviRow> kvi_rows();

/// Published chi-square values for the singlet and Werner columns.
inline constexpr double kKviChi2Case1Printed = 1.26;
inline constexpr double kKviChi2Case2Printed = 0.85;

std::vector<ChshDatum> kvi_data();

}  // namespace chshkit
