#include "chshkit/reference_data.hpp"

#include <array>

namespace chshkit {

std::span<const KviRow> kvi_rows() {
  static constexpr std::array<KviRow, 8> rows = {{
      {{50.0, 0.0, 25.0, 75.0}, 2.46, 2.21, 0.67, 2.30},
      {{60.0, 0.0, 30.0, 90.0}, 2.60, 2.34, 1.21, 2.42},
      {{70.0, 0.0, 35.0, 105.0}, 2.72, 2.45, 1.54, 2.76},
      {{80.0, 0.0, 40.0, 120.0}, 2.80, 2.52, 2.11, 2.86},
      {{90.0, 0.0, 45.0, 135.0}, 2.83, 2.55, 2.23, 2.48},
      {{100.0, 0.0, 50.0, 150.0}, 2.79, 2.51, 2.39, 2.87},
      {{110.0, 0.0, 55.0, 165.0}, 2.69, 2.34, 2.58, 2.91},
      {{120.0, 0.0, 60.0, 180.0}, 2.50, 2.25, 2.75, 2.95},
  }};
  return rows;
}

std::vector<ChshDatum> kvi_data() {
  std::vector<ChshDatum> out;
  for (const auto& r : kvi_rows()) out.push_back({r.settings, r.r_exp, r.dr_exp});
  return out;
}

}  // namespace chshkit
