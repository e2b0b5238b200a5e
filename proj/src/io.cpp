#include "chshkit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "chshkit/error.hpp"
#include "chshkit/factory.hpp"

namespace chshkit {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(Errc::ParseError, msg); }

const json& field(const json& doc, const char* key) {
  if (!doc.contains(key)) parse_fail(std::string("state document lacks \"") + key + "\"");
  return doc.at(key);
}

double number(const json& v, const char* what) {
  if (!v.is_number()) parse_fail(std::string(what) + " must be a number");
  return v.get<double>();
}

template <std::size_t N>
std::array<double, N> vector_field(const json& doc, const char* key) {
  const auto& v = field(doc, key);
  if (!v.is_array() || v.size() != N) parse_fail(std::string("\"") + key + "\" must have " + std::to_string(N) + " entries");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = number(v[i], key);
  return out;
}

template <std::size_t N>
std::array<std::array<double, N>, N> matrix_field(const json& doc, const char* key) {
  const auto& v = field(doc, key);
  if (!v.is_array() || v.size() != N) parse_fail(std::string("\"") + key + "\" must have " + std::to_string(N) + " rows");
  std::array<std::array<double, N>, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!v[i].is_array() || v[i].size() != N)
      parse_fail(std::string("\"") + key + "\" rows must have " + std::to_string(N) + " entries");
    for (std::size_t j = 0; j < N; ++j) out[i][j] = number(v[i][j], key);
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ',' || line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ',' && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

struct Record {
  std::size_t line_no;
  std::vector<std::string_view> fields;
};

// Non-comment, non-blank rows of a delimited table.
std::vector<Record> records(std::string_view text) {
  std::vector<Record> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;
    out.push_back({line_no, split_fields(line)});
  }
  return out;
}

bool parse_double(std::string_view s, double& v) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(v);
}

double to_double(const Record& r, std::size_t i) {
  double v = 0.0;
  if (!parse_double(r.fields[i], v))
    parse_fail("line " + std::to_string(r.line_no) + ": \"" + std::string(r.fields[i]) + "\" is not a number");
  return v;
}

std::uint64_t to_count(const Record& r, std::size_t i) {
  std::uint64_t v = 0;
  const auto s = r.fields[i];
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    parse_fail("line " + std::to_string(r.line_no) + ": \"" + std::string(s) + "\" is not a non-negative integer count");
  return v;
}

bool is_header(const Record& r) {
  double v = 0.0;
  return !r.fields.empty() && !parse_double(r.fields.front(), v);
}

std::string joined(const Record& r) {
  std::string s;
  for (std::size_t i = 0; i < r.fields.size(); ++i) {
    if (i) s += ',';
    s += r.fields[i];
  }
  return s;
}

// Drops a header row after checking it names the expected columns.
std::vector<Record> body(std::string_view text, std::string_view header) {
  auto rows = records(text);
  if (!rows.empty() && is_header(rows.front())) {
    if (joined(rows.front()) != header)
      parse_fail("line " + std::to_string(rows.front().line_no) + ": expected header \"" + std::string(header) + "\"");
    rows.erase(rows.begin());
  }
  return rows;
}

void require_width(const Record& r, std::size_t n) {
  if (r.fields.size() != n)
    parse_fail("line " + std::to_string(r.line_no) + ": expected " + std::to_string(n) + " fields, found " +
               std::to_string(r.fields.size()));
}

}  // namespace

DensityMatrix parse_state(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("state document: ") + e.what());
  }
  if (!doc.is_object()) parse_fail("state document must be an object");
  const auto& kind_v = field(doc, "kind");
  if (!kind_v.is_string()) parse_fail("\"kind\" must be a string");
  const auto kind = kind_v.get<std::string>();

  if (kind == "matrix") {
    const auto re = matrix_field<4>(doc, "re");
    const auto im = matrix_field<4>(doc, "im");
    ComplexMatrix4 m;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) m(i, j) = {re[i][j], im[i][j]};
    return DensityMatrix::validate(m);
  }
  if (kind == "pauli") {
    PauliDecomposition pd;
    pd.bloch_a = vector_field<3>(doc, "A");
    pd.bloch_b = vector_field<3>(doc, "P");
    pd.correlation.a = matrix_field<3>(doc, "D");
    return compose(pd);
  }
  if (kind == "werner") return werner(WernerParameter(number(field(doc, "gamma"), "gamma")));
  if (kind == "named") {
    const auto& name = field(doc, "name");
    if (!name.is_string()) parse_fail("\"name\" must be a string");
    if (auto rho = named_state(name.get<std::string>())) return *rho;
    parse_fail("unknown named state \"" + name.get<std::string>() + "\"");
  }
  parse_fail("unknown state kind \"" + kind + "\"");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TableKind detect_table_kind(std::string_view text) {
  const auto rows = records(text);
  if (!rows.empty() && is_header(rows.front()) && joined(rows.front()) == kCountsHeader) return TableKind::Counts;
  return TableKind::Data;
}

std::vector<ChshDatum> parse_data(std::string_view text) {
  std::vector<ChshDatum> out;
  for (const auto& r : body(text, kDataHeader)) {
    require_width(r, 6);
    out.push_back({{to_double(r, 0), to_double(r, 1), to_double(r, 2), to_double(r, 3)}, to_double(r, 4), to_double(r, 5)});
  }
  return out;
}

std::vector<CountTable> parse_counts(std::string_view text) {
  std::vector<CountTable> out;
  for (const auto& r : body(text, kCountsHeader)) {
    require_width(r, 6);
    out.push_back({to_double(r, 0), to_double(r, 1), to_count(r, 2), to_count(r, 3), to_count(r, 4), to_count(r, 5)});
  }
  return out;
}

std::vector<AnglePair> parse_settings(std::string_view text) {
  std::vector<AnglePair> out;
  auto rows = records(text);
  if (!rows.empty() && is_header(rows.front())) rows.erase(rows.begin());
  for (const auto& r : rows) {
    if (r.fields.size() == 2) {
      out.push_back({to_double(r, 0), to_double(r, 1)});
    } else if (r.fields.size() == 4) {
      for (const auto& p : expand({to_double(r, 0), to_double(r, 1), to_double(r, 2), to_double(r, 3)})) out.push_back(p);
    } else {
      parse_fail("line " + std::to_string(r.line_no) + ": settings rows have 2 or 4 angles");
    }
  }
  return out;
}

std::string format_exact(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string format_counts(const std::vector<CountTable>& tables, const std::vector<std::string>& comments) {
  std::string s;
  for (const auto& c : comments) s += "# " + c + "\n";
  s += kCountsHeader;
  s += '\n';
  for (const auto& t : tables) {
    s += format_exact(t.phi1) + "," + format_exact(t.phi2) + "," + std::to_string(t.n_pp) + "," +
         std::to_string(t.n_pm) + "," + std::to_string(t.n_mp) + "," + std::to_string(t.n_mm) + "\n";
  }
  return s;
}

ordered_json to_json(const Vec3& v) { return ordered_json::array({v[0], v[1], v[2]}); }

ordered_json to_json(const BellReport& r) {
  ordered_json j;
  j["tangle"] = r.tangle;
  j["M"] = r.m;
  j["max_violation"] = r.max_violation;
  j["purity"] = r.purity;
  j["violates"] = r.violates;
  if (r.optimal) {
    j["optimal"] = {{"a", to_json(r.optimal->a())},
                    {"a_prime", to_json(r.optimal->a_prime())},
                    {"b", to_json(r.optimal->b())},
                    {"b_prime", to_json(r.optimal->b_prime())}};
  } else {
    j["optimal"] = nullptr;
  }
  return j;
}

ordered_json to_json(const FitResult& r) {
  ordered_json j;
  j["gamma_hat"] = r.gamma_hat;
  j["gamma_sigma"] = r.gamma_sigma;
  j["chi2_at_min"] = r.chi2_at_min;
  j["chi2_case1"] = r.chi2_case1;
  j["chi2_case2"] = r.chi2_case2;
  ordered_json res = ordered_json::array();
  for (const auto& x : r.residuals)
    res.push_back({{"r_th", x.r_th}, {"r_exp", x.r_exp}, {"dr_exp", x.dr_exp}, {"pull", x.pull}});
  j["residuals"] = std::move(res);
  return j;
}

}  // namespace chshkit
