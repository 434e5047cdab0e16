// Copyright 2026 The ghzfreq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. run() takes argv without the program name and
// writes to the given streams, so tests can drive it in-process.
//
// Exit codes: 0 ok, 2 usage error, 3 numerical failure, 4 verify failed.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ghzfreq/ghzfreq.hpp"
#include "ghzfreq/io.hpp"

namespace ghzfreq::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3, kVerifyFailed = 4 };

struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class Format { text, csv, json };

struct RunSpec {
  std::string command;
  std::optional<NoiseKind> model;
  double gamma = 1.0;
  std::optional<std::pair<int, int>> n_range;
  std::optional<int> n_ancillas;
  double c1 = kInvSqrt2;
  double c2_phase = 0.0;
  std::vector<double> t;
  double omega = 0.0;
  std::vector<StrategyKind> strategies;
  Format format = Format::text;
  std::string output;
  bool oracle = false;
  int jobs = 1;
  int n_max = 5;
  int draws = 20;
  std::uint64_t seed = VerifyOptions{}.seed;
};

namespace detail {

inline std::string key_of(std::string name) {
  std::replace(name.begin(), name.end(), '_', '-');
  return name;
}

inline const std::map<std::string, std::vector<std::string>>& allowed_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"qfi", {"model", "gamma", "n", "na", "c1", "c2-phase", "t", "omega", "strategy", "format",
               "output", "oracle"}},
      {"table1", {"model", "gamma", "n", "t", "format", "output"}},
      {"sweep", {"model", "gamma", "n", "na", "strategy", "format", "output", "jobs"}},
      {"verify", {"nmax", "draws", "seed", "format", "output"}},
      {"channel", {"model", "gamma", "t", "omega", "format", "output"}},
  };
  return keys;
}

inline double to_double(const std::string& key, const std::string& text) {
  try {
    return io::parse_double(text);
  } catch (const std::invalid_argument&) {
    throw usage_error("--" + key + ": not a number: '" + text + "'");
  }
}

inline long long to_integer(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw usage_error("--" + key + ": not an integer: '" + text + "'");
  return v;
}

inline int to_int(const std::string& key, const std::string& text) {
  const long long v = to_integer(key, text);
  if (v < -1'000'000'000LL || v > 1'000'000'000LL) throw usage_error("--" + key + ": out of range");
  return static_cast<int>(v);
}

inline std::pair<int, int> to_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    const int n = to_int("n", text);
    return {n, n};
  }
  return {to_int("n", text.substr(0, colon)), to_int("n", text.substr(colon + 1))};
}

inline bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw usage_error("--" + key + ": expected true or false");
}

/// Flattens a JSON value into the flag's string syntax.
inline std::string json_to_flag_text(const std::string& key, const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return io::format_double(v.get<double>());
  if (v.is_array()) {
    std::string out;
    for (const auto& item : v) {
      if (item.is_array() || item.is_object())
        throw usage_error("--spec: nested value for '" + key + "'");
      if (!out.empty()) out += ',';
      out += json_to_flag_text(key, item);
    }
    return out;
  }
  throw usage_error("--spec: unsupported value for '" + key + "'");
}

inline std::map<std::string, std::string> load_spec_file(const std::string& path,
                                                         const std::string& command) {
  std::ifstream in(path);
  if (!in) throw usage_error("--spec: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception&) {
    throw usage_error("--spec: '" + path + "' is not valid JSON");
  }
  if (!j.is_object()) throw usage_error("--spec: expected a flat JSON object");
  const auto& allowed = allowed_keys().at(command);
  std::map<std::string, std::string> values;
  for (const auto& [raw_key, value] : j.items()) {
    const std::string key = key_of(raw_key);
    if (key == "command") {
      if (!value.is_string() || value.get<std::string>() != command)
        throw usage_error("--spec: file is for command '" + json_to_flag_text(key, value) +
                          "', not '" + command + "'");
      continue;
    }
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw usage_error("--spec: '" + raw_key + "' does not apply to " + command);
    values[key] = json_to_flag_text(key, value);
  }
  return values;
}

inline RunSpec build_spec(const std::string& command,
                          const std::map<std::string, std::string>& values) {
  RunSpec spec;
  spec.command = command;
  auto get = [&](const char* key) -> const std::string* {
    const auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };
  if (auto v = get("model")) {
    spec.model = parse_noise_kind(*v);
    if (!spec.model || *spec.model == NoiseKind::custom)
      throw usage_error("--model: expected adc, dpc or pdc, got '" + *v + "'");
  }
  if (auto v = get("gamma")) spec.gamma = to_double("gamma", *v);
  if (auto v = get("n")) spec.n_range = to_range(*v);
  if (auto v = get("na")) spec.n_ancillas = to_int("na", *v);
  if (auto v = get("c1")) spec.c1 = to_double("c1", *v);
  if (auto v = get("c2-phase")) spec.c2_phase = to_double("c2-phase", *v);
  if (auto v = get("t"))
    for (const auto& item : io::split(*v)) spec.t.push_back(to_double("t", item));
  if (auto v = get("omega")) spec.omega = to_double("omega", *v);
  if (auto v = get("strategy")) {
    for (const auto& item : io::split(*v)) {
      const auto s = parse_strategy(item);
      if (!s)
        throw usage_error("--strategy: expected uncorrelated, ghz-free or ghz-ancilla, got '" +
                          item + "'");
      spec.strategies.push_back(*s);
    }
  }
  if (auto v = get("format")) {
    if (*v == "text") spec.format = Format::text;
    else if (*v == "csv") spec.format = Format::csv;
    else if (*v == "json") spec.format = Format::json;
    else throw usage_error("--format: expected text, csv or json, got '" + *v + "'");
  }
  if (auto v = get("output")) spec.output = *v;
  if (auto v = get("oracle")) spec.oracle = to_bool("oracle", *v);
  if (auto v = get("jobs")) spec.jobs = to_int("jobs", *v);
  if (auto v = get("nmax")) spec.n_max = to_int("nmax", *v);
  if (auto v = get("draws")) spec.draws = to_int("draws", *v);
  if (auto v = get("seed")) {
    const long long s = to_integer("seed", *v);
    if (s < 0) throw usage_error("--seed: must be non-negative");
    spec.seed = static_cast<std::uint64_t>(s);
  }
  return spec;
}

inline void require_usage(bool ok, const std::string& reason) {
  if (!ok) throw usage_error(reason);
}

inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw numerical_failure(std::string("non-finite value in ") + what);
}

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline void validate_common(const RunSpec& spec) {
  if (spec.command == "verify") return;
  require_usage(spec.model.has_value(), spec.command + " requires --model");
  require_usage(std::isfinite(spec.gamma) && spec.gamma >= 0, "--gamma must be finite and >= 0");
  for (double t : spec.t) require_usage(std::isfinite(t) && t > 0, "--t values must be > 0");
  if (spec.n_range) {
    require_usage(spec.n_range->first >= 1 && spec.n_range->second >= spec.n_range->first,
                  "--n range a:b needs 1 <= a <= b");
    require_usage(spec.n_range->second <= kMaxDirectSumProbes,
                  "--n exceeds " + std::to_string(kMaxDirectSumProbes) + " probes");
  }
}

inline std::vector<StrategyKind> sorted_strategies(std::vector<StrategyKind> s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

// Ancilla count for a strategy, from --na with default 1 for ghz-ancilla.
inline int ancillas_for(const RunSpec& spec, StrategyKind s) {
  if (s != StrategyKind::ghz_ancilla) return 0;
  return spec.n_ancillas.value_or(1);
}

inline void validate_ancillas(const RunSpec& spec, const std::vector<StrategyKind>& strategies) {
  if (!spec.n_ancillas) return;
  const bool has_ancilla = std::find(strategies.begin(), strategies.end(),
                                     StrategyKind::ghz_ancilla) != strategies.end();
  require_usage(has_ancilla, "--na applies only to --strategy ghz-ancilla");
  require_usage(*spec.n_ancillas >= 1, "--na must be >= 1 for ghz-ancilla");
}

// ---------------------------------------------------------------- commands

inline void run_qfi(const RunSpec& spec, std::ostream& out) {
  require_usage(spec.t.size() == 1, "qfi requires a single --t");
  require_usage(spec.n_range.has_value(), "qfi requires --n");
  require_usage(spec.c1 >= 0 && spec.c1 <= 1, "--c1 must lie in [0, 1]");
  require_usage(std::isfinite(spec.omega), "--omega must be finite");
  const auto strategies = sorted_strategies(
      spec.strategies.empty() ? std::vector{StrategyKind::ghz_free} : spec.strategies);
  validate_ancillas(spec, strategies);
  const double t = spec.t.front();
  const NoiseModel model = NoiseModel::of(*spec.model, spec.gamma);
  const ChannelParams p = params_at(model, t);

  struct Row {
    StrategyKind strategy;
    int n, na;
    double f, oracle_f, oracle_dev;
  };
  auto qcrb = [&](double f) { return f > 0 ? t / f : std::numeric_limits<double>::infinity(); };
  std::vector<Row> rows;
  for (int n = spec.n_range->first; n <= spec.n_range->second; ++n) {
    for (StrategyKind s : strategies) {
      const int na = ancillas_for(spec, s);
      const ProbeSpec probe = ProbeSpec::from_real(spec.c1, n, na, spec.c2_phase);
      Row r{s, n, na, qfi_closed(s, probe, p, t).f_freq, 0.0, 0.0};
      require_finite(r.f, "qfi");
      require_finite(qcrb(r.f), "QCRB (zero Fisher information)");
      if (spec.oracle) {
        require_usage(probe.total_qubits() <= kMaxDenseQubits,
                      "--oracle supports at most " + std::to_string(kMaxDenseQubits) +
                          " qubits (n + na)");
        r.oracle_f = qfi_sld_oracle(s, probe, p, t, spec.omega).f_freq;
        r.oracle_dev = ghzfreq::detail::rel_dev(r.f, r.oracle_f);
        require_finite(r.oracle_f, "oracle");
      }
      rows.push_back(r);
    }
  }
  const char* label[] = {"F_U", "F_N", "F_A"};
  switch (spec.format) {
    case Format::text:
      for (const Row& r : rows) {
        out << to_string(r.strategy) << "  model=" << to_string(*spec.model)
            << " gamma=" << fmt(spec.gamma) << " n=" << r.n << " na=" << r.na
            << " c1=" << fmt(spec.c1) << " t=" << fmt(t) << '\n';
        out << "  " << label[static_cast<int>(r.strategy)] << " = " << fmt(r.f)
            << "  F/t = " << fmt(r.f / t) << "  QCRB t/F = " << fmt(qcrb(r.f)) << '\n';
        if (spec.oracle)
          out << "  oracle F = " << fmt(r.oracle_f) << "  rel. deviation = " << fmt(r.oracle_dev)
              << '\n';
      }
      break;
    case Format::csv:
      out << "strategy,model,gamma,n,na,c1,c2_phase,t,omega,f,f_over_t,qcrb";
      if (spec.oracle) out << ",oracle_f,oracle_rel_dev";
      out << '\n';
      for (const Row& r : rows) {
        out << to_string(r.strategy) << ',' << to_string(*spec.model) << ','
            << io::format_double(spec.gamma) << ',' << r.n << ',' << r.na << ','
            << io::format_double(spec.c1) << ',' << io::format_double(spec.c2_phase) << ','
            << io::format_double(t) << ',' << io::format_double(spec.omega) << ','
            << io::format_double(r.f) << ',' << io::format_double(r.f / t) << ','
            << io::format_double(qcrb(r.f));
        if (spec.oracle)
          out << ',' << io::format_double(r.oracle_f) << ',' << io::format_double(r.oracle_dev);
        out << '\n';
      }
      break;
    case Format::json: {
      nlohmann::json j = nlohmann::json::array();
      for (const Row& r : rows) {
        nlohmann::json item{{"strategy", std::string(to_string(r.strategy))},
                            {"model", std::string(to_string(*spec.model))},
                            {"gamma", spec.gamma},
                            {"n", r.n},
                            {"na", r.na},
                            {"c1", spec.c1},
                            {"c2_phase", spec.c2_phase},
                            {"t", t},
                            {"omega", spec.omega},
                            {"f", r.f},
                            {"f_over_t", r.f / t},
                            {"qcrb", qcrb(r.f)}};
        if (spec.oracle) {
          item["oracle_f"] = r.oracle_f;
          item["oracle_rel_dev"] = r.oracle_dev;
        }
        j.push_back(item);
      }
      out << j.dump(2) << '\n';
      break;
    }
  }
}

inline void run_table1(const RunSpec& spec, std::ostream& out) {
  require_usage(!spec.t.empty(), "table1 requires --t (one value or a comma list)");
  require_usage(spec.n_range.has_value(), "table1 requires --n");
  std::vector<Table1Row> rows;
  for (int n = spec.n_range->first; n <= spec.n_range->second; ++n)
    for (double t : spec.t) {
      rows.push_back(table1(*spec.model, n, spec.gamma, t));
      const auto& r = rows.back();
      for (double x : {r.f_n_over_t, r.f_a_over_t, r.f_u_over_t}) require_finite(x, "table1");
    }
  switch (spec.format) {
    case Format::text: {
      char line[200];
      std::snprintf(line, sizeof line, "model %s  gamma %s\n%4s %10s %20s %20s %20s\n",
                    std::string(to_string(*spec.model)).c_str(), fmt(spec.gamma).c_str(), "N",
                    "gamma*t", "F_N/t", "F_A/t", "F_U/t");
      out << line;
      bool any_flag = false;
      for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%4d %10.6g %20.12g %20.12g %20.12g%s\n", r.n_probes,
                      r.gamma * r.t, r.f_n_over_t, r.f_a_over_t, r.f_u_over_t,
                      r.f_n_flagged ? "  *" : "");
        out << line;
        any_flag = any_flag || r.f_n_flagged;
      }
      if (any_flag)
        out << "* tabulated F_N/t differs from the general closed form; "
               "closed form shown (tabulated/closed = "
            << fmt(rows.front().literal[0] / rows.front().f_n_over_t) << ")\n";
      break;
    }
    case Format::csv: out << io::table1_to_csv(rows); break;
    case Format::json: out << io::table1_to_json(rows).dump(2) << '\n'; break;
  }
}

inline void run_sweep(const RunSpec& spec, std::ostream& out) {
  require_usage(spec.gamma > 0, "sweep requires --gamma > 0");
  require_usage(spec.jobs >= 1 && spec.jobs <= 256, "--jobs must lie in [1, 256]");
  const auto range = spec.n_range.value_or(std::pair{1, 30});
  const auto strategies = sorted_strategies(
      spec.strategies.empty() ? std::vector{StrategyKind::ghz_free, StrategyKind::ghz_ancilla}
                              : spec.strategies);
  validate_ancillas(spec, strategies);
  SweepOptions options;
  options.jobs = spec.jobs;
  options.n_ancillas = spec.n_ancillas.value_or(1);
  const auto rows = sweep(NoiseModel::of(*spec.model, spec.gamma), range.first, range.second,
                          strategies, options);
  for (const auto& r : rows)
    for (double x : {r.t_opt, r.f_over_t_max, r.ratio_r, r.saturation_gap})
      require_finite(x, "sweep");
  switch (spec.format) {
    case Format::text: {
      char line[200];
      std::snprintf(line, sizeof line, "%4s %-13s %-5s %8s %22s %22s %14s %12s\n", "n",
                    "strategy", "model", "gamma", "t_opt", "f_over_t_max", "ratio_r", "sat_gap");
      out << line;
      for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%4d %-13s %-5s %8.4g %22.15g %22.15g %14.10f %12.3e\n",
                      r.n_probes, std::string(to_string(r.strategy)).c_str(),
                      std::string(to_string(r.model)).c_str(), r.gamma, r.t_opt, r.f_over_t_max,
                      r.ratio_r, r.saturation_gap);
        out << line;
      }
      break;
    }
    case Format::csv: out << io::sweep_to_csv(rows); break;
    case Format::json: out << io::sweep_to_json(rows).dump(2) << '\n'; break;
  }
}

inline int run_verify(const RunSpec& spec, std::ostream& out) {
  require_usage(spec.n_max >= 1 && spec.n_max <= 8, "--nmax must lie in [1, 8]");
  require_usage(spec.draws >= 1 && spec.draws <= 10000, "--draws must lie in [1, 10000]");
  const VerifyReport report = run_verification({spec.n_max, spec.draws, spec.seed});
  switch (spec.format) {
    case Format::text: print_report(report, out); break;
    case Format::csv:
      out << "check,passed,worst,tolerance,cases\n";
      for (const auto& c : report.checks)
        out << c.name << ',' << (c.passed ? 1 : 0) << ',' << io::format_double(c.worst) << ','
            << io::format_double(c.tolerance) << ',' << c.cases << '\n';
      break;
    case Format::json: {
      nlohmann::json checks = nlohmann::json::array();
      for (const auto& c : report.checks)
        checks.push_back({{"check", c.name},
                          {"passed", c.passed},
                          {"worst", c.worst},
                          {"tolerance", c.tolerance},
                          {"cases", c.cases}});
      nlohmann::json j{
          {"passed", report.passed()},
          {"checks", checks},
          {"uncorrelated_arbitration",
           {{"oracle_consistent", "single-qubit denominator"},
            {"worst_dev", report.uncorrelated_constructed_dev},
            {"nth_power_variant_min_dev", report.uncorrelated_printed_dev}}},
          {"dpc_arbitration",
           {{"oracle_consistent", "general GHZ closed form"},
            {"worst_dev", report.dpc_formula_dev},
            {"table_factor", 2.0},
            {"table_factor_dev", report.dpc_table_factor_dev}}}};
      out << j.dump(2) << '\n';
      break;
    }
  }
  return report.passed() ? kOk : kVerifyFailed;
}

inline void run_channel(const RunSpec& spec, std::ostream& out) {
  require_usage(spec.t.size() == 1, "channel requires a single --t");
  const double t = spec.t.front();
  const ChannelParams p = params_at(NoiseModel::of(*spec.model, spec.gamma), t);
  const ACoefficients a = a_coefficients(p);
  const Eigen::Vector4d eig = choi_eigenvalues(p);
  const bool cptp = is_cptp(p);
  switch (spec.format) {
    case Format::text:
      out << "model " << to_string(*spec.model) << "  gamma " << fmt(spec.gamma) << "  t "
          << fmt(t) << '\n'
          << "theta_noise " << fmt(p.theta_noise) << '\n'
          << "eta_perp    " << fmt(p.eta_perp) << '\n'
          << "eta_par     " << fmt(p.eta_par) << '\n'
          << "kappa       " << fmt(p.kappa) << '\n'
          << "A++ " << fmt(a.a_pp) << "  A+- " << fmt(a.a_pm) << "  A-+ " << fmt(a.a_mp)
          << "  A-- " << fmt(a.a_mm) << '\n'
          << "choi eigenvalues " << fmt(eig(0)) << ' ' << fmt(eig(1)) << ' ' << fmt(eig(2))
          << ' ' << fmt(eig(3)) << '\n'
          << "cptp " << (cptp ? "yes" : "no") << '\n';
      break;
    case Format::csv:
      out << "model,gamma,t,theta_noise,eta_perp,eta_par,kappa,a_pp,a_pm,a_mp,a_mm,"
             "choi_0,choi_1,choi_2,choi_3,cptp\n"
          << to_string(*spec.model) << ',' << io::format_double(spec.gamma) << ','
          << io::format_double(t);
      for (double x : {p.theta_noise, p.eta_perp, p.eta_par, p.kappa, a.a_pp, a.a_pm, a.a_mp,
                       a.a_mm, eig(0), eig(1), eig(2), eig(3)})
        out << ',' << io::format_double(x);
      out << ',' << (cptp ? 1 : 0) << '\n';
      break;
    case Format::json: {
      nlohmann::json j{{"model", std::string(to_string(*spec.model))},
                       {"gamma", spec.gamma},
                       {"t", t},
                       {"theta_noise", p.theta_noise},
                       {"eta_perp", p.eta_perp},
                       {"eta_par", p.eta_par},
                       {"kappa", p.kappa},
                       {"a_pp", a.a_pp},
                       {"a_pm", a.a_pm},
                       {"a_mp", a.a_mp},
                       {"a_mm", a.a_mm},
                       {"choi_eigenvalues", {eig(0), eig(1), eig(2), eig(3)}},
                       {"cptp", cptp}};
      out << j.dump(2) << '\n';
      break;
    }
  }
}

inline int dispatch(const RunSpec& spec, std::ostream& out) {
  validate_common(spec);
  if (spec.command == "qfi") run_qfi(spec, out);
  else if (spec.command == "table1") run_table1(spec, out);
  else if (spec.command == "sweep") run_sweep(spec, out);
  else if (spec.command == "channel") run_channel(spec, out);
  else return run_verify(spec, out);
  return kOk;
}

}  // namespace detail

/// Parses and validates a command line into a RunSpec; throws usage_error.
/// `help` receives help text when -h is given, in which case nullopt is returned.
inline std::optional<RunSpec> parse_args(const std::vector<std::string>& args, std::ostream& help) {
  CLI::App app{"Noisy frequency estimation with generalized GHZ probes", "ghzfreq"};
  app.require_subcommand(1);
  std::map<std::string, std::string> flags;
  std::map<std::string, std::vector<CLI::Option*>> registered;
  std::map<std::string, std::string> spec_path;
  std::map<std::string, bool> oracle_flag;

  const std::map<std::string, std::string> descriptions{
      {"model", "noise model: adc, dpc or pdc"},
      {"gamma", "decay rate (default 1)"},
      {"n", "probe count or inclusive range a:b"},
      {"na", "ancilla count for ghz-ancilla (default 1)"},
      {"c1", "real amplitude of |0...0> (default 1/sqrt 2)"},
      {"c2-phase", "phase of the |1...1> amplitude (default 0)"},
      {"t", "interrogation time; table1 accepts a comma list"},
      {"omega", "signal frequency (default 0)"},
      {"strategy", "uncorrelated, ghz-free, ghz-ancilla, or a comma list"},
      {"format", "text, csv or json (default text)"},
      {"output", "write the result to this file"},
      {"jobs", "worker threads for sweep rows (default 1)"},
      {"nmax", "largest probe count in verify (default 5)"},
      {"draws", "random draws per case in verify (default 20)"},
      {"seed", "random seed for verify"},
  };
  const std::map<std::string, std::string> about{
      {"qfi", "closed-form Fisher information, optionally checked against the dense oracle"},
      {"table1", "F/t for the three strategies at maximal entanglement"},
      {"sweep", "optimal interrogation time and sensitivity ratio versus N"},
      {"verify", "cross-route property suite"},
      {"channel", "channel parameters, Choi spectrum and CPTP verdict"},
  };
  for (const auto& [command, keys] : detail::allowed_keys()) {
    CLI::App* sub = app.add_subcommand(command, about.at(command));
    for (const auto& key : keys) {
      if (key == "oracle") {
        registered[command].push_back(
            sub->add_flag("--oracle", oracle_flag[command], "also evaluate the dense SLD oracle"));
        continue;
      }
      CLI::Option* opt = sub->add_option("--" + key, flags[command + "/" + key], descriptions.at(key));
      registered[command].push_back(opt);
    }
    sub->add_option("--spec", spec_path[command], "flat JSON file of flag values; flags override it");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto* chosen = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
    help << (chosen ? chosen->help() : app.help());
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    std::string what = e.what();
    if (what.empty()) what = "invalid command line";
    throw usage_error(what);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::map<std::string, std::string> values;
  if (!spec_path[command].empty()) values = detail::load_spec_file(spec_path[command], command);
  for (CLI::Option* opt : registered[command]) {
    if (opt->count() == 0) continue;
    const std::string key = opt->get_name().substr(2);
    values[key] = key == "oracle" ? "true" : flags[command + "/" + key];
  }
  return detail::build_spec(command, values);
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const auto spec = parse_args(args, out);
    if (!spec) return kOk;
    if (spec->output.empty()) return detail::dispatch(*spec, out);
    std::ostringstream buffer;
    const int code = detail::dispatch(*spec, buffer);
    std::ofstream file(spec->output, std::ios::binary);
    if (!file) throw usage_error("--output: cannot open '" + spec->output + "'");
    file << buffer.str();
    if (!file) throw std::runtime_error("--output: write failed");
    return code;
  } catch (const numerical_failure& e) {
    err << "ghzfreq: numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    err << "ghzfreq: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "ghzfreq: numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}

}  // namespace ghzfreq::cli
