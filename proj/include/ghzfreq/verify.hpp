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

/**
 * @file
 * Cross-route verification: every closed form is checked against the dense
 * SLD oracle and the Bloch route on random draws, the compact states against
 * dense states, the optimal observable against the bound, and the channel
 * predicates against Choi eigenvalues and the Lindblad integrator.
 *
 * Two arbitrations are reported explicitly:
 *  - uncorrelated QFI: single-qubit denominator (constructed by N -> 1, then
 *    times N) versus the variant that keeps N-th powers in the denominator;
 *  - DPC ancilla-free entry: general GHZ closed form versus the tabulated
 *    expression, which carries an extra factor 2.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "ghzfreq/channel.hpp"
#include "ghzfreq/fisher.hpp"
#include "ghzfreq/measurement.hpp"
#include "ghzfreq/optimize.hpp"
#include "ghzfreq/state.hpp"

namespace ghzfreq {

struct VerifyOptions {
  int n_max = 5;
  int draws = 20;
  std::uint64_t seed = 0x5eed'2026;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double tolerance = 0.0;
  int cases = 0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  /// Worst oracle deviation of the single-qubit-denominator uncorrelated form.
  double uncorrelated_constructed_dev = 0.0;
  /// Smallest oracle deviation of the N-th-power-denominator variant (N >= 2).
  double uncorrelated_printed_dev = 0.0;
  /// Worst oracle deviation of the general closed form for DPC, ancilla-free.
  double dpc_formula_dev = 0.0;
  /// Worst deviation of tabulated / closed-form ratio from 2.
  double dpc_table_factor_dev = 0.0;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
};

namespace detail {

inline double rel_dev(double value, double reference) {
  const double scale = std::max(std::abs(reference), std::abs(value));
  return scale == 0 ? 0.0 : std::abs(value - reference) / scale;
}

class CheckAccumulator {
 public:
  CheckAccumulator(std::string name, double tolerance) {
    result_.name = std::move(name);
    result_.tolerance = tolerance;
  }
  void add(double deviation) {
    ++result_.cases;
    if (!(deviation <= result_.worst)) result_.worst = deviation;  // NaN sticks
  }
  CheckResult finish() const {
    CheckResult r = result_;
    r.passed = r.cases > 0 && r.worst <= r.tolerance;
    return r;
  }

 private:
  CheckResult result_;
};

}  // namespace detail

inline VerifyReport run_verification(const VerifyOptions& options = {}) {
  detail::require(options.n_max >= 1 && options.n_max <= 8, "verify: n_max must lie in [1, 8]");
  detail::require(options.draws >= 1, "verify: draws must be >= 1");
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto open_unit = [&] {
    double x = 0.0;
    while (x == 0.0) x = unit(rng);
    return x;
  };
  const std::array<NoiseKind, 3> kinds{NoiseKind::adc, NoiseKind::dpc, NoiseKind::pdc};

  VerifyReport report;
  detail::CheckAccumulator route("closed form vs dense SLD oracle", 1e-7);
  detail::CheckAccumulator bloch("closed form vs Bloch-vector route", 1e-10);
  detail::CheckAccumulator consistency("compact state vs dense state", 1e-12);
  detail::CheckAccumulator closure("trace closure of compact states", 1e-12);
  detail::CheckAccumulator covariance("oracle independence of omega t", 1e-9);
  detail::CheckAccumulator ancilla_count("oracle independence of ancilla count", 1e-9);

  for (NoiseKind kind : kinds) {
    const NoiseModel model = NoiseModel::of(kind, 1.0);
    for (int n = 1; n <= options.n_max; ++n) {
      for (int draw = 0; draw < options.draws; ++draw) {
        const double c1 = open_unit();
        const double c2_phase = 2.0 * std::numbers::pi * unit(rng);
        const double t = 2.0 * open_unit();
        const double omega = 2.0 * std::numbers::pi * unit(rng) / t;
        const ChannelParams p = params_at(model, t);

        struct Case { StrategyKind strategy; int ancillas; };
        const Case cases[] = {{StrategyKind::uncorrelated, 0},
                              {StrategyKind::ghz_free, 0},
                              {StrategyKind::ghz_ancilla, 1},
                              {StrategyKind::ghz_ancilla, 2}};
        double oracle_a1 = 0.0;
        for (const Case& c : cases) {
          const ProbeSpec spec = ProbeSpec::from_real(c1, n, c.ancillas, c2_phase);
          const double closed = qfi_closed(c.strategy, spec, p, t).f_freq;
          const double oracle = qfi_sld_oracle(c.strategy, spec, p, t, omega).f_freq;
          route.add(detail::rel_dev(closed, oracle));
          if (c.strategy == StrategyKind::ghz_ancilla && c.ancillas == 1) oracle_a1 = oracle;
          if (c.strategy == StrategyKind::ghz_ancilla && c.ancillas == 2)
            ancilla_count.add(detail::rel_dev(oracle, oracle_a1));
          if (c.strategy == StrategyKind::uncorrelated) {
            report.uncorrelated_constructed_dev =
                std::max(report.uncorrelated_constructed_dev, detail::rel_dev(closed, oracle));
            if (n >= 2) {
              const double printed =
                  t * t * uncorrelated_phase_qfi_printed_form(spec.weight1(), spec.weight2(), n, p);
              const double dev = detail::rel_dev(printed, oracle);
              report.uncorrelated_printed_dev = report.uncorrelated_printed_dev == 0.0
                                                    ? dev
                                                    : std::min(report.uncorrelated_printed_dev, dev);
            }
            continue;
          }
          if (kind == NoiseKind::dpc && c.strategy == StrategyKind::ghz_free)
            report.dpc_formula_dev = std::max(report.dpc_formula_dev, detail::rel_dev(closed, oracle));
          bloch.add(detail::rel_dev(qfi_bloch(spec, p, omega, t).f_freq, closed));
          const DirectSumState ds = evolve_directsum(spec, p, omega, t);
          consistency.add(assert_consistency(ds, evolve_dense(spec, p, omega, t)));
          closure.add(std::abs(ds.block_trace() + ds.residual_mass() - 1.0));
          if (c.strategy == StrategyKind::ghz_free) {
            const double shifted = qfi_sld_oracle(c.strategy, spec, p, t, omega + 1.234 / t).f_freq;
            covariance.add(detail::rel_dev(shifted, oracle));
          }
        }
      }
    }
  }

  detail::CheckAccumulator saturation("optimal observable reaches t/F", kSaturationTolerance);
  for (NoiseKind kind : kinds) {
    const NoiseModel model = NoiseModel::of(kind, 1.0);
    for (int n = 1; n <= std::min(options.n_max, 4); ++n) {
      for (int ancillas = 0; ancillas <= 1; ++ancillas) {
        for (int draw = 0; draw < options.draws / 2 + 1; ++draw) {
          const double t = 1.5 * open_unit();
          const auto rep = saturation_check(ProbeSpec::maximally_entangled(n, ancillas), model, t,
                                            2.0 * std::numbers::pi * unit(rng) / t);
          saturation.add(std::abs(rep.gap));
        }
      }
    }
  }

  detail::CheckAccumulator table("tabulated entries vs closed forms", 1e-12);
  detail::CheckAccumulator dpc_factor("tabulated DPC ancilla-free entry is twice the closed form",
                                      1e-9);
  for (int draw = 0; draw < 50; ++draw) {
    const int n = 1 + static_cast<int>(unit(rng) * 10) % 10;
    const double t = 2.0 * open_unit();
    for (NoiseKind kind : kinds) {
      const Table1Row row = table1(kind, n, 1.0, t);
      table.add(detail::rel_dev(row.f_a_over_t, row.literal[1]));
      table.add(detail::rel_dev(row.f_u_over_t, row.literal[2]));
      if (kind == NoiseKind::dpc) {
        dpc_factor.add(std::abs(row.literal[0] / row.f_n_over_t - 2.0));
      } else {
        table.add(detail::rel_dev(row.f_n_over_t, row.literal[0]));
      }
    }
  }

  detail::CheckAccumulator cp("is_cptp agrees with Choi eigenvalues", 0.0);
  std::uniform_real_distribution<double> box(-1.5, 1.5);
  for (int k = 0; k < 2000; ++k) {
    const ChannelParams p{box(rng), box(rng), box(rng), box(rng)};
    const bool by_choi = choi_min_eigenvalue(p) >= -kCpTolerance;
    cp.add(by_choi == is_cptp(p) ? 0.0 : 1.0);
  }

  detail::CheckAccumulator lindblad("Lindblad integrator vs affine map", 1e-6);
  for (NoiseKind kind : kinds) {
    const NoiseModel model = NoiseModel::of(kind, 1.0);
    for (int draw = 0; draw < 3; ++draw) {
      const double t = 2.0 * open_unit();
      const double omega = 2.0 * unit(rng) - 1.0;
      const double polar = std::acos(2.0 * unit(rng) - 1.0);
      const double azimuth = 2.0 * std::numbers::pi * unit(rng);
      const Eigen::Vector3d r(std::sin(polar) * std::cos(azimuth),
                              std::sin(polar) * std::sin(azimuth), std::cos(polar));
      const Eigen::Matrix2cd rho =
          integrate_master_equation(model, omega, t, density_from_bloch(r), 10000);
      lindblad.add((bloch_vector(rho) - affine_apply(params_at(model, t), omega, t, r)).norm());
    }
  }

  report.checks = {route.finish(),     bloch.finish(),         consistency.finish(),
                   closure.finish(),   covariance.finish(),    ancilla_count.finish(),
                   saturation.finish(), table.finish(),        dpc_factor.finish(),
                   cp.finish(),        lindblad.finish()};
  report.dpc_table_factor_dev = report.checks[8].worst;

  CheckResult arbitration_u;
  arbitration_u.name = "oracle prefers single-qubit uncorrelated denominator";
  arbitration_u.tolerance = 1e-7;
  arbitration_u.worst = report.uncorrelated_constructed_dev;
  arbitration_u.cases = 1;
  arbitration_u.passed = report.uncorrelated_constructed_dev <= 1e-7 &&
                         (options.n_max < 2 || report.uncorrelated_printed_dev > 1e-3);
  CheckResult arbitration_d;
  arbitration_d.name = "oracle matches general closed form for DPC ancilla-free";
  arbitration_d.tolerance = 1e-7;
  arbitration_d.worst = report.dpc_formula_dev;
  arbitration_d.cases = 1;
  arbitration_d.passed = report.dpc_formula_dev <= 1e-7 && report.dpc_table_factor_dev <= 1e-9;
  report.checks.push_back(arbitration_u);
  report.checks.push_back(arbitration_d);
  return report;
}

inline void print_report(const VerifyReport& report, std::ostream& out) {
  char line[256];
  for (const auto& c : report.checks) {
    std::snprintf(line, sizeof line, "%s  %-62s worst=%.3e tol=%.1e cases=%d\n",
                  c.passed ? "PASS" : "FAIL", c.name.c_str(), c.worst, c.tolerance, c.cases);
    out << line;
  }
  std::snprintf(line, sizeof line,
                "arbitration: uncorrelated QFI -> single-qubit denominator is oracle-consistent "
                "(worst dev %.3e); N-th power denominator deviates by at least %.3e\n",
                report.uncorrelated_constructed_dev, report.uncorrelated_printed_dev);
  out << line;
  std::snprintf(line, sizeof line,
                "arbitration: DPC ancilla-free -> general GHZ closed form is oracle-consistent "
                "(worst dev %.3e); tabulated entry = 2 x closed form (worst dev %.3e)\n",
                report.dpc_formula_dev, report.dpc_table_factor_dev);
  out << line;
  out << (report.passed() ? "verification passed\n" : "verification FAILED\n");
}

}  // namespace ghzfreq
