#pragma once

// File formats.
//
// State document (JSON), discriminated by "kind":
//   {"kind": "matrix", "re": [[..4..] x4], "im": [[..4..] x4]}
//   {"kind": "pauli", "A": [x,y,z], "P": [x,y,z], "D": [[..3..] x3]}
//   {"kind": "werner", "gamma": g}
//   {"kind": "named", "name": "singlet" | "triplet0" | "phi_plus" | "phi_minus" | "unpolarized"}
//
// Delimited tables: one record per line, fields separated by commas and/or
// whitespace, '#' starts a comment line. An optional first row of column
// names selects the table kind; headerless files are CHSH data.
//   data:     phi1, phi1p, phi2, phi2p, r_exp, dr_exp
//   counts:   phi1, phi2, n_pp, n_pm, n_mp, n_mm
//   settings: phi1, phi2            (one angle pair)
//          or phi1, phi1p, phi2, phi2p  (a CHSH quadruple, expanded to four pairs)

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chshkit/bell.hpp"
#include "chshkit/chsh.hpp"

namespace chshkit {

/// Errc::ParseError for malformed documents; validation errors from the
/// state constructors propagate unchanged.
DensityMatrix parse_state(std::string_view json_text);

std::string read_file(const std::string& path);

inline constexpr std::string_view kDataHeader = "phi1,phi1p,phi2,phi2p,r_exp,dr_exp";
inline constexpr std::string_view kCountsHeader = "phi1,phi2,n_pp,n_pm,n_mp,n_mm";

enum class TableKind { Data, Counts };

TableKind detect_table_kind(std::string_view text);

std::vector<ChshDatum> parse_data(std::string_view text);
std::vector<CountTable> parse_counts(std::string_view text);
std::vector<AnglePair> parse_settings(std::string_view text);

/// Counts file: `comments` become leading '#' lines, then the header, then
/// one row per table. Angles are written with round-trip precision.
std::string format_counts(const std::vector<CountTable>& tables, const std::vector<std::string>& comments = {});

/// Shortest decimal that parses back to the same double.
std::string format_exact(double v);

nlohmann::ordered_json to_json(const Vec3& v);
nlohmann::ordered_json to_json(const BellReport& r);
nlohmann::ordered_json to_json(const FitResult& r);

}  // namespace chshkit
