#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "chshkit/bell.hpp"
#include "chshkit/chsh.hpp"
#include "chshkit/error.hpp"
#include "chshkit/event_sim.hpp"
#include "chshkit/factory.hpp"
#include "chshkit/io.hpp"
#include "chshkit/reference_data.hpp"

#ifndef CHSHKIT_VERSION
#define CHSHKIT_VERSION "0.0.0"
#endif

namespace chshkit::cli {

namespace {

using nlohmann::ordered_json;

enum class Format { Table, Json, Csv };

std::string format_name(Format f) {
  switch (f) {
    case Format::Table: return "table";
    case Format::Json: return "json";
    case Format::Csv: return "csv";
  }
  return "table";
}

/// Command name, resolved inputs and settings embedded in machine-readable output.
struct RunManifest {
  std::string command;
  ordered_json inputs = ordered_json::object();
  std::optional<std::uint64_t> seed;
  Format format = Format::Table;

  ordered_json to_json() const {
    ordered_json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
    j["format"] = format_name(format);
    j["tool"] = "chshkit";
    j["version"] = CHSHKIT_VERSION;
    return j;
  }

  std::string comment_line() const { return "manifest: " + to_json().dump(); }
};

std::string sig4(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  std::ostringstream s;
  s << std::setprecision(4) << v;
  return s.str();
}

std::string fixed2(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v;
  return s.str();
}

std::string vec_text(const Vec3& v) { return "(" + sig4(v[0]) + ", " + sig4(v[1]) + ", " + sig4(v[2]) + ")"; }

// Right-aligned columns, header underlined.
void print_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());
  auto line = [&](const std::vector<std::string>& r) {
    std::string s;
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) s += "  ";
      s += std::string(width[c] - std::min(width[c], r[c].size()), ' ') + r[c];
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    out << s << '\n';
  };
  line(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
  for (const auto& r : rows) line(r);
}

void print_csv(std::ostream& out, const RunManifest& manifest, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  out << "# " << manifest.comment_line() << '\n';
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << r[c];
    out << '\n';
  }
}

void print_json(std::ostream& out, const RunManifest& manifest, ordered_json result) {
  ordered_json doc;
  doc["manifest"] = manifest.to_json();
  doc["result"] = std::move(result);
  out << doc.dump(2) << '\n';
}

std::string num(double v) { return format_exact(v); }

// ---------------------------------------------------------------------------
// analyze

void cmd_analyze(std::ostream& out, RunManifest manifest, const std::string& state_file) {
  manifest.inputs["state"] = state_file;
  const auto rho = parse_state(read_file(state_file));
  const auto report = horodecki_max(rho);

  switch (manifest.format) {
    case Format::Json: print_json(out, manifest, to_json(report)); return;
    case Format::Csv: {
      std::vector<std::string> header = {"tangle", "M", "max_violation", "purity", "violates"};
      std::vector<std::string> row = {num(report.tangle), num(report.m), num(report.max_violation), num(report.purity),
                                      report.violates ? "true" : "false"};
      for (const char* name : {"a", "a_prime", "b", "b_prime"})
        for (const char* axis : {"x", "y", "z"}) header.push_back(std::string(name) + "_" + axis);
      if (report.optimal) {
        for (const Vec3* v : {&report.optimal->a(), &report.optimal->a_prime(), &report.optimal->b(),
                              &report.optimal->b_prime()})
          for (double x : *v) row.push_back(num(x));
      } else {
        row.resize(header.size());
      }
      print_csv(out, manifest, header, {row});
      return;
    }
    case Format::Table: break;
  }
  std::vector<std::vector<std::string>> rows = {
      {"tangle", sig4(report.tangle)},
      {"purity", sig4(report.purity)},
      {"M", sig4(report.m)},
      {"max_violation", sig4(report.max_violation)},
      {"violates", report.violates ? "yes" : "no"},
  };
  if (report.optimal) {
    rows.push_back({"a", vec_text(report.optimal->a())});
    rows.push_back({"a'", vec_text(report.optimal->a_prime())});
    rows.push_back({"b", vec_text(report.optimal->b())});
    rows.push_back({"b'", vec_text(report.optimal->b_prime())});
  } else {
    rows.push_back({"optimal", "undefined (D = 0)"});
  }
  print_table(out, {"quantity", "value"}, rows);
}

// ---------------------------------------------------------------------------
// sweep

struct SweepRow {
  double gamma;
  BellReport report;
};

double werner_violation(double gamma) { return horodecki_max(werner(WernerParameter(gamma))).max_violation; }

// Bisection for max_violation(gamma) = 2 on a bracketing interval.
double bell_crossing(double lo, double hi) {
  for (int i = 0; i < 100 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (werner_violation(mid) > kBellLimit ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

void cmd_sweep(std::ostream& out, RunManifest manifest, double gmin, double gmax, double step) {
  manifest.inputs = {{"min", gmin}, {"max", gmax}, {"step", step}};
  if (!(gmin >= 0.0 && gmax <= 1.0 && gmin <= gmax && step > 0.0))
    throw Error(Errc::ParseError, "sweep needs 0 <= min <= max <= 1 and step > 0");

  const auto n = static_cast<std::size_t>(std::floor((gmax - gmin) / step + 1e-9));
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i <= n; ++i) {
    const double g = std::min(gmin + static_cast<double>(i) * step, gmax);
    rows.push_back({g, horodecki_max(werner(WernerParameter(g)))});
  }

  std::optional<std::size_t> nearest_limit;
  std::optional<std::size_t> kvi_row;
  std::optional<std::pair<double, double>> interval;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double d = std::abs(rows[i].report.max_violation - kBellLimit);
    if (!nearest_limit || d < std::abs(rows[*nearest_limit].report.max_violation - kBellLimit)) nearest_limit = i;
    if (std::abs(rows[i].gamma - kCase2Gamma) <= 0.5 * step &&
        (!kvi_row || std::abs(rows[i].gamma - kCase2Gamma) < std::abs(rows[*kvi_row].gamma - kCase2Gamma)))
      kvi_row = i;
    if (i > 0 && !interval && !rows[i - 1].report.violates && rows[i].report.violates)
      interval = {rows[i - 1].gamma, rows[i].gamma};
  }
  std::optional<double> crossing;
  if (interval) crossing = bell_crossing(interval->first, interval->second);

  auto marker = [&](std::size_t i) {
    std::string m;
    if (nearest_limit == i) m = "bell-limit";
    if (kvi_row == i) m += m.empty() ? "kvi" : "+kvi";
    return m;
  };

  switch (manifest.format) {
    case Format::Json: {
      ordered_json res;
      ordered_json arr = ordered_json::array();
      for (std::size_t i = 0; i < rows.size(); ++i)
        arr.push_back({{"gamma", rows[i].gamma},
                       {"max_violation", rows[i].report.max_violation},
                       {"tangle", rows[i].report.tangle},
                       {"purity", rows[i].report.purity},
                       {"marker", marker(i)}});
      res["rows"] = std::move(arr);
      res["bell_limit"] = kBellLimit;
      res["crossing_interval"] =
          interval ? ordered_json::array({interval->first, interval->second}) : ordered_json(nullptr);
      res["crossing_gamma"] = crossing ? ordered_json(*crossing) : ordered_json(nullptr);
      res["kvi_gamma"] = kCase2Gamma;
      print_json(out, manifest, std::move(res));
      return;
    }
    case Format::Csv: {
      std::vector<std::vector<std::string>> body;
      for (std::size_t i = 0; i < rows.size(); ++i)
        body.push_back({num(rows[i].gamma), num(rows[i].report.max_violation), num(rows[i].report.tangle),
                        num(rows[i].report.purity), marker(i)});
      print_csv(out, manifest, {"gamma", "max_violation", "tangle", "purity", "marker"}, body);
      if (crossing) out << "# crossing_gamma: " << num(*crossing) << '\n';
      return;
    }
    case Format::Table: break;
  }
  std::vector<std::vector<std::string>> body;
  for (std::size_t i = 0; i < rows.size(); ++i)
    body.push_back({sig4(rows[i].gamma), sig4(rows[i].report.max_violation), sig4(rows[i].report.tangle),
                    sig4(rows[i].report.purity), marker(i)});
  print_table(out, {"gamma", "max_violation", "tangle", "purity", "marker"}, body);
  out << "\nBell limit " << sig4(kBellLimit);
  if (interval)
    out << " crossed between gamma = " << sig4(interval->first) << " and " << sig4(interval->second)
        << " (gamma = " << std::setprecision(6) << *crossing << ")";
  else
    out << " not crossed in range";
  out << '\n';
}

// ---------------------------------------------------------------------------
// table1

void cmd_table1(std::ostream& out, RunManifest manifest) {
  manifest.inputs["data"] = std::string(kKviDataVersion);
  constexpr double kFlagTol = 0.005;
  const auto sing = singlet();
  const auto wern = werner(WernerParameter(kCase2Gamma));
  const auto data = kvi_data();

  struct Row {
    KviRow ref;
    double case1, case2;
    bool flag1, flag2;
  };
  std::vector<Row> rows;
  std::vector<double> pred1, pred2_printed, pred2;
  for (const auto& r : kvi_rows()) {
    Row row{r, chsh_value(sing, r.settings), chsh_value(wern, r.settings), false, false};
    row.flag1 = std::abs(row.case1 - r.case1_printed) > kFlagTol;
    row.flag2 = std::abs(row.case2 - r.case2_printed) > kFlagTol;
    rows.push_back(row);
    pred1.push_back(row.case1);
    pred2.push_back(row.case2);
    pred2_printed.push_back(r.case2_printed);
  }
  const double chi1 = chi_square(data, pred1);
  const double chi2_printed = chi_square(data, pred2_printed);
  const double chi2 = chi_square(data, pred2);

  auto settings_text = [](const AngleSettings& s) {
    return "E(" + sig4(s.phi1) + "," + sig4(s.phi1p) + "," + sig4(s.phi2) + "," + sig4(s.phi2p) + ")";
  };

  switch (manifest.format) {
    case Format::Json: {
      ordered_json res;
      ordered_json arr = ordered_json::array();
      for (const auto& r : rows)
        arr.push_back({{"settings", {r.ref.settings.phi1, r.ref.settings.phi1p, r.ref.settings.phi2, r.ref.settings.phi2p}},
                       {"case1", r.case1},
                       {"case1_printed", r.ref.case1_printed},
                       {"case1_flag", r.flag1},
                       {"case2", r.case2},
                       {"case2_printed", r.ref.case2_printed},
                       {"case2_flag", r.flag2},
                       {"r_exp", r.ref.r_exp},
                       {"dr_exp", r.ref.dr_exp}});
      res["rows"] = std::move(arr);
      res["case2_gamma"] = kCase2Gamma;
      res["chi2_case1"] = chi1;
      res["chi2_case2_printed_column"] = chi2_printed;
      res["chi2_case2_recomputed"] = chi2;
      res["chi2_case1_published"] = kKviChi2Case1Printed;
      res["chi2_case2_published"] = kKviChi2Case2Printed;
      print_json(out, manifest, std::move(res));
      return;
    }
    case Format::Csv: {
      std::vector<std::vector<std::string>> body;
      for (const auto& r : rows)
        body.push_back({num(r.ref.settings.phi1), num(r.ref.settings.phi1p), num(r.ref.settings.phi2),
                        num(r.ref.settings.phi2p), num(r.case1), num(r.ref.case1_printed), r.flag1 ? "1" : "0",
                        num(r.case2), num(r.ref.case2_printed), r.flag2 ? "1" : "0", num(r.ref.r_exp),
                        num(r.ref.dr_exp)});
      print_csv(out, manifest,
                {"phi1", "phi1p", "phi2", "phi2p", "case1", "case1_printed", "case1_flag", "case2", "case2_printed",
                 "case2_flag", "r_exp", "dr_exp"},
                body);
      out << "# chi2_case1: " << num(chi1) << '\n'
          << "# chi2_case2_printed_column: " << num(chi2_printed) << '\n'
          << "# chi2_case2_recomputed: " << num(chi2) << '\n';
      return;
    }
    case Format::Table: break;
  }
  std::vector<std::vector<std::string>> body;
  for (const auto& r : rows)
    body.push_back({settings_text(r.ref.settings), fixed2(r.case1), fixed2(r.ref.case1_printed),
                    fixed2(r.case2), fixed2(r.ref.case2_printed), fixed2(r.ref.r_exp) + " +- " + fixed2(r.ref.dr_exp),
                    std::string(r.flag1 ? "case1 " : "") + (r.flag2 ? "case2 (" + sig4(r.case2) + ")" : "")});
  print_table(out, {"setting", "case1", "printed", "case2", "printed", "experiment", "differs"}, body);
  out << "\nchi2 case1 " << fixed2(chi1) << " (published " << fixed2(kKviChi2Case1Printed) << ")\n"
      << "chi2 case2 " << fixed2(chi2_printed) << " with the printed column, " << fixed2(chi2)
      << " recomputed at gamma = " << kCase2Gamma << " (published " << fixed2(kKviChi2Case2Printed) << ")\n";
}

// ---------------------------------------------------------------------------
// fit

void cmd_fit(std::ostream& out, RunManifest manifest, const std::string& data_file, bool embedded) {
  std::vector<ChshDatum> data;
  if (embedded) {
    manifest.inputs["data"] = std::string(kKviDataVersion);
    data = kvi_data();
  } else {
    manifest.inputs["data"] = data_file;
    const auto text = read_file(data_file);
    if (detect_table_kind(text) == TableKind::Counts) {
      manifest.inputs["data_kind"] = "counts";
      data = estimate_chsh_all(parse_counts(text));
    } else {
      manifest.inputs["data_kind"] = "chsh";
      data = parse_data(text);
    }
  }
  const auto fit = fit_gamma(data);

  std::optional<double> chi2_printed;
  if (embedded) {
    std::vector<double> printed;
    for (const auto& r : kvi_rows()) printed.push_back(r.case2_printed);
    chi2_printed = chi_square(data, printed);
  }
  std::vector<std::pair<double, double>> curve;
  for (int i = 0; i <= 20; ++i) {
    const double g = i / 20.0;
    curve.emplace_back(g, chi_square_at(data, g));
  }

  switch (manifest.format) {
    case Format::Json: {
      auto res = to_json(fit);
      if (chi2_printed) res["chi2_case2_printed_column"] = *chi2_printed;
      ordered_json c = ordered_json::array();
      for (const auto& [g, x] : curve) c.push_back({{"gamma", g}, {"chi2", x}});
      res["chi2_curve"] = std::move(c);
      print_json(out, manifest, std::move(res));
      return;
    }
    case Format::Csv: {
      std::vector<std::vector<std::string>> body;
      for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& s = data[i].settings;
        const auto& r = fit.residuals[i];
        body.push_back({num(s.phi1), num(s.phi1p), num(s.phi2), num(s.phi2p), num(r.r_exp), num(r.dr_exp),
                        num(r.r_th), num(r.pull)});
      }
      print_csv(out, manifest, {"phi1", "phi1p", "phi2", "phi2p", "r_exp", "dr_exp", "r_th", "pull"}, body);
      out << "# gamma_hat: " << num(fit.gamma_hat) << '\n'
          << "# gamma_sigma: " << num(fit.gamma_sigma) << '\n'
          << "# chi2_at_min: " << num(fit.chi2_at_min) << '\n'
          << "# chi2_case1: " << num(fit.chi2_case1) << '\n'
          << "# chi2_case2: " << num(fit.chi2_case2) << '\n';
      if (chi2_printed) out << "# chi2_case2_printed_column: " << num(*chi2_printed) << '\n';
      return;
    }
    case Format::Table: break;
  }
  out << "gamma_hat    " << sig4(fit.gamma_hat) << " +- " << sig4(fit.gamma_sigma) << '\n'
      << "chi2_at_min  " << sig4(fit.chi2_at_min) << '\n'
      << "chi2_case1   " << sig4(fit.chi2_case1) << "  (gamma = 1)\n"
      << "chi2_case2   " << sig4(fit.chi2_case2) << "  (gamma = " << kCase2Gamma << ")\n";
  if (chi2_printed) out << "chi2_case2   " << sig4(*chi2_printed) << "  (published case-2 column)\n";
  out << '\n';
  std::vector<std::vector<std::string>> body;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& s = data[i].settings;
    const auto& r = fit.residuals[i];
    body.push_back({"E(" + sig4(s.phi1) + "," + sig4(s.phi1p) + "," + sig4(s.phi2) + "," + sig4(s.phi2p) + ")",
                    sig4(r.r_exp), sig4(r.dr_exp), sig4(r.r_th), sig4(r.pull)});
  }
  print_table(out, {"setting", "r_exp", "dr_exp", "r_th", "pull"}, body);
  out << '\n';
  std::vector<std::vector<std::string>> cbody;
  for (const auto& [g, x] : curve) cbody.push_back({sig4(g), sig4(x)});
  print_table(out, {"gamma", "chi2"}, cbody);
}

// ---------------------------------------------------------------------------
// simulate

void cmd_simulate(std::ostream& out, RunManifest manifest, const std::string& state_file,
                  const std::string& settings_file, std::uint64_t events, std::uint64_t seed) {
  manifest.inputs = {{"state", state_file}, {"settings", settings_file}, {"events", events}};
  manifest.seed = seed;
  if (events == 0) throw Error(Errc::ParseError, "--events must be at least 1");
  SimConfig cfg{parse_state(read_file(state_file)), parse_settings(read_file(settings_file)), events, seed};
  const auto counts = simulate(cfg);

  if (manifest.format == Format::Json) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : counts)
      arr.push_back({{"phi1", c.phi1}, {"phi2", c.phi2}, {"n_pp", c.n_pp}, {"n_pm", c.n_pm}, {"n_mp", c.n_mp},
                     {"n_mm", c.n_mm}});
    print_json(out, manifest, {{"counts", std::move(arr)}});
    return;
  }
  out << format_counts(counts, {manifest.comment_line()});
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::ParseError: return kParseError;
    case Errc::NotHermitian:
    case Errc::TraceNotOne:
    case Errc::NotPositive:
    case Errc::NotPsd:
    case Errc::GammaOutOfRange:
    case Errc::BlochVectorTooLong:
    case Errc::NonUnitDirection:
    case Errc::NotSymmetric:
    case Errc::NoConvergence: return kInvalidState;
    case Errc::EmptyCounts:
    case Errc::EmptyData:
    case Errc::DegenerateData:
    case Errc::LengthMismatch:
    case Errc::NonpositiveError: return kEmptyData;
  }
  return kFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"CHSH violation, entanglement and Werner-mixing analysis for two-qubit states", "chshkit"};
  app.set_version_flag("--version", std::string(CHSHKIT_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  Format format = Format::Table;
  std::string out_file;
  app.add_option("--format", format, "Output format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"table", Format::Table}, {"json", Format::Json}, {"csv", Format::Csv}}));
  app.add_option("--out", out_file, "Write results to FILE instead of stdout");

  std::string state_file;
  auto* analyze = app.add_subcommand("analyze", "Tangle, purity and maximal CHSH violation of a state");
  analyze->add_option("--state", state_file, "State document (JSON)")->required();

  double gmin = 0.0, gmax = 1.0, step = 0.01;
  auto* sweep = app.add_subcommand("sweep", "Werner-family sweep of maximal violation and tangle");
  sweep->add_option("--min", gmin, "Smallest gamma")->capture_default_str();
  sweep->add_option("--max", gmax, "Largest gamma")->capture_default_str();
  sweep->add_option("--step", step, "Grid step")->capture_default_str();

  auto* table1 = app.add_subcommand("table1", "Singlet and Werner predictions against the embedded KVI data");

  std::string data_file;
  bool embedded = false;
  auto* fit = app.add_subcommand("fit", "Fit the Werner mixing weight to CHSH data or coincidence counts");
  auto* data_opt = fit->add_option("--data", data_file, "CHSH data or counts file");
  auto* emb_opt = fit->add_flag("--embedded", embedded, "Use the embedded KVI data");
  data_opt->excludes(emb_opt);
  fit->require_option(1);

  std::string settings_file;
  std::uint64_t events = 0, seed = 0;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo coincidence counts");
  sim->add_option("--state", state_file, "State document (JSON)")->required();
  sim->add_option("--settings", settings_file, "Angle settings file")->required();
  sim->add_option("--events", events, "Events per angle pair")->required();
  sim->add_option("--seed", seed, "RNG seed")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kParseError;
  }

  std::ostringstream buffer;
  try {
    RunManifest manifest;
    manifest.format = format;
    if (*analyze) {
      manifest.command = "analyze";
      cmd_analyze(buffer, manifest, state_file);
    } else if (*sweep) {
      manifest.command = "sweep";
      cmd_sweep(buffer, manifest, gmin, gmax, step);
    } else if (*table1) {
      manifest.command = "table1";
      cmd_table1(buffer, manifest);
    } else if (*fit) {
      manifest.command = "fit";
      cmd_fit(buffer, manifest, data_file, embedded);
    } else if (*sim) {
      manifest.command = "simulate";
      cmd_simulate(buffer, manifest, state_file, settings_file, events, seed);
    }
  } catch (const Error& e) {
    err << "chshkit: " << e.what() << '\n';
    return exit_code_for(e.code());
  }

  if (out_file.empty()) {
    out << buffer.str();
  } else {
    std::ofstream f(out_file, std::ios::binary);
    f << buffer.str();
    if (!f) {
      err << "chshkit: cannot write " << out_file << '\n';
      return kFailure;
    }
  }
  return kOk;
}

}  // namespace chshkit::cli
