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

// CSV and JSON encodings of sweep and table rows. CSV: header row, '.'
// decimal separator, 17 significant digits. JSON: array of flat records.

#pragma once

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ghzfreq/optimize.hpp"

namespace ghzfreq::io {

inline constexpr std::string_view kSweepCsvHeader =
    "n,strategy,model,gamma,t_opt,f_over_t_max,ratio_r,saturation_gap";
inline constexpr std::string_view kTable1CsvHeader =
    "model,n,gamma,t,f_n_over_t,f_a_over_t,f_u_over_t,"
    "f_n_over_t_table,f_a_over_t_table,f_u_over_t_table,f_n_flagged";

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_double(const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE)
    throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

inline std::vector<std::string> split(std::string_view line, char sep = ',') {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.n_probes) + ',' + std::string(to_string(r.strategy)) + ',' +
           std::string(to_string(r.model)) + ',' + format_double(r.gamma) + ',' +
           format_double(r.t_opt) + ',' + format_double(r.f_over_t_max) + ',' +
           format_double(r.ratio_r) + ',' + format_double(r.saturation_gap) + '\n';
  }
  return out;
}

inline std::vector<SweepRow> sweep_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader)
    throw std::invalid_argument("sweep csv: unexpected header");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 8) throw std::invalid_argument("sweep csv: expected 8 fields: " + line);
    SweepRow r;
    r.n_probes = std::stoi(f[0]);
    const auto strategy = parse_strategy(f[1]);
    const auto model = parse_noise_kind(f[2]);
    if (!strategy || !model) throw std::invalid_argument("sweep csv: bad strategy or model: " + line);
    r.strategy = *strategy;
    r.model = *model;
    r.gamma = parse_double(f[3]);
    r.t_opt = parse_double(f[4]);
    r.f_over_t_max = parse_double(f[5]);
    r.ratio_r = parse_double(f[6]);
    r.saturation_gap = parse_double(f[7]);
    rows.push_back(r);
  }
  return rows;
}

inline nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"n_probes", r.n_probes},
                   {"strategy", std::string(to_string(r.strategy))},
                   {"model", std::string(to_string(r.model))},
                   {"gamma", r.gamma},
                   {"t_opt", r.t_opt},
                   {"f_over_t_max", r.f_over_t_max},
                   {"ratio_r", r.ratio_r},
                   {"saturation_gap", r.saturation_gap}});
  }
  return out;
}

inline std::vector<SweepRow> sweep_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("sweep json: expected an array");
  std::vector<SweepRow> rows;
  for (const auto& item : j) {
    SweepRow r;
    r.n_probes = item.at("n_probes").get<int>();
    const auto strategy = parse_strategy(item.at("strategy").get<std::string>());
    const auto model = parse_noise_kind(item.at("model").get<std::string>());
    if (!strategy || !model) throw std::invalid_argument("sweep json: bad strategy or model");
    r.strategy = *strategy;
    r.model = *model;
    r.gamma = item.at("gamma").get<double>();
    r.t_opt = item.at("t_opt").get<double>();
    r.f_over_t_max = item.at("f_over_t_max").get<double>();
    r.ratio_r = item.at("ratio_r").get<double>();
    r.saturation_gap = item.at("saturation_gap").get<double>();
    rows.push_back(r);
  }
  return rows;
}

inline std::string table1_to_csv(const std::vector<Table1Row>& rows) {
  std::string out(kTable1CsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += std::string(to_string(r.model)) + ',' + std::to_string(r.n_probes) + ',' +
           format_double(r.gamma) + ',' + format_double(r.t) + ',' +
           format_double(r.f_n_over_t) + ',' + format_double(r.f_a_over_t) + ',' +
           format_double(r.f_u_over_t) + ',' + format_double(r.literal[0]) + ',' +
           format_double(r.literal[1]) + ',' + format_double(r.literal[2]) + ',' +
           (r.f_n_flagged ? "1" : "0") + '\n';
  }
  return out;
}

inline nlohmann::json table1_to_json(const std::vector<Table1Row>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"model", std::string(to_string(r.model))},
                   {"n_probes", r.n_probes},
                   {"gamma", r.gamma},
                   {"t", r.t},
                   {"f_n_over_t", r.f_n_over_t},
                   {"f_a_over_t", r.f_a_over_t},
                   {"f_u_over_t", r.f_u_over_t},
                   {"f_n_over_t_table", r.literal[0]},
                   {"f_a_over_t_table", r.literal[1]},
                   {"f_u_over_t_table", r.literal[2]},
                   {"f_n_flagged", r.f_n_flagged}});
  }
  return out;
}

}  // namespace ghzfreq::io
