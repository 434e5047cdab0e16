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
 * Interrogation-time optimization of F/t, the GHZ-vs-uncorrelated
 * sensitivity ratio R = max_t(F_U/t) / max_t(F_G/t), probe-number sweeps and
 * tabulated F/t values for maximally entangled probes.
 */

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <concepts>
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "ghzfreq/channel.hpp"
#include "ghzfreq/errors.hpp"
#include "ghzfreq/fisher.hpp"
#include "ghzfreq/measurement.hpp"
#include "ghzfreq/state.hpp"

namespace ghzfreq {

/// Golden-section search for the maximizer of a unimodal function on
/// [lo, hi]. Stops once the bracket is narrower than rel_tol times its
/// midpoint.
template <std::floating_point Real, class Objective>
Real golden_section_maximize(Objective&& f, Real lo, Real hi, Real rel_tol,
                             int max_iterations = 500) {
  const Real inv_phi = (std::sqrt(Real(5)) - 1) / 2;
  Real a = lo;
  Real b = hi;
  Real c = b - inv_phi * (b - a);
  Real d = a + inv_phi * (b - a);
  Real fc = f(c);
  Real fd = f(d);
  for (int it = 0; it < max_iterations; ++it) {
    if (b - a <= rel_tol * std::abs(a + b) / 2) break;
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2;
}

struct FOverTMax {
  double t_opt = 0.0;
  double f_over_t_max = 0.0;  ///< units 1/time
};

struct TimeScanOptions {
  int points = 200;
  double lo_decades = -4.0;  ///< scan starts at 10^lo / gamma
  double hi_decades = 2.0;   ///< and ends at 10^hi / gamma
  double rel_tol = 1e-10;
  /// Replaces 1/gamma as the time unit; required for custom models.
  double time_scale = 0.0;
};

/// Maximizes F(t)/t. A logarithmic scan brackets the peak, which must be
/// interior and unique on the grid; golden-section search then refines it.
/// The objective is evaluated in long double so that the flat top of F/t
/// still resolves t_opt well below 1e-8 relative.
inline FOverTMax maximize_f_over_t(StrategyKind strategy, const ProbeSpec& spec,
                                   const NoiseModel& model, const TimeScanOptions& options = {}) {
  validate(spec);
  double scale = options.time_scale;
  if (scale <= 0) {
    detail::require(model.gamma > 0 && std::isfinite(model.gamma),
                    "maximize_f_over_t: decay rate must be > 0 (no interior maximum otherwise)");
    scale = 1.0 / model.gamma;
  }
  detail::require(options.points >= 3, "maximize_f_over_t: scan needs at least 3 points");

  using Real = long double;
  const Real w1 = spec.weight1();
  const Real w2 = spec.weight2();
  const int n = spec.n_probes;
  auto objective = [&](Real t) { return f_over_t<Real>(strategy, w1, w2, n, model, t); };

  const int m = options.points;
  std::vector<Real> times(m);
  std::vector<Real> values(m);
  for (int k = 0; k < m; ++k) {
    const Real decade = options.lo_decades +
                        (options.hi_decades - options.lo_decades) * Real(k) / Real(m - 1);
    times[k] = Real(scale) * std::pow(Real(10), decade);
    values[k] = objective(times[k]);
  }
  const int peak = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
  if (peak == 0 || peak == m - 1 || !(values[peak] > 0)) {
    throw numerical_failure("maximize_f_over_t: no interior maximum of F/t in the scan bracket");
  }
  for (int k = 0; k < m - 1; ++k) {
    const bool ok = k < peak ? values[k] <= values[k + 1] : values[k + 1] <= values[k];
    if (!ok) {
      throw numerical_failure("maximize_f_over_t: F/t is not unimodal on the scan grid (between t=" +
                              std::to_string(static_cast<double>(times[k])) + " and t=" +
                              std::to_string(static_cast<double>(times[k + 1])) + ")");
    }
  }
  const Real t_opt = golden_section_maximize<Real>(objective, times[peak - 1], times[peak + 1],
                                                   Real(options.rel_tol));
  return {static_cast<double>(t_opt), static_cast<double>(objective(t_opt))};
}

/// ProbeSpec a strategy uses at the maximally entangled point.
inline ProbeSpec canonical_probe(StrategyKind strategy, int n_probes, int n_ancillas = 1) {
  return ProbeSpec::maximally_entangled(
      n_probes, strategy == StrategyKind::ghz_ancilla ? std::max(1, n_ancillas) : 0);
}

inline double sensitivity_ratio(const NoiseModel& model, int n_probes, StrategyKind strategy) {
  detail::require(strategy != StrategyKind::uncorrelated,
                  "sensitivity_ratio: strategy must be a GHZ strategy");
  const auto uncorrelated =
      maximize_f_over_t(StrategyKind::uncorrelated, canonical_probe(StrategyKind::uncorrelated, n_probes), model);
  const auto entangled = maximize_f_over_t(strategy, canonical_probe(strategy, n_probes), model);
  return uncorrelated.f_over_t_max / entangled.f_over_t_max;
}

struct SweepRow {
  int n_probes = 1;
  StrategyKind strategy = StrategyKind::ghz_free;
  NoiseKind model = NoiseKind::pdc;
  double gamma = 0.0;
  double t_opt = 0.0;
  double f_over_t_max = 0.0;
  double ratio_r = 1.0;
  double saturation_gap = 0.0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepOptions {
  int jobs = 1;
  int n_ancillas = 1;
};

namespace detail {

inline SweepRow sweep_row(const NoiseModel& model, int n, StrategyKind strategy,
                          const FOverTMax& uncorrelated, int n_ancillas) {
  SweepRow row;
  row.n_probes = n;
  row.strategy = strategy;
  row.model = model.kind;
  row.gamma = model.gamma;
  if (strategy == StrategyKind::uncorrelated) {
    row.t_opt = uncorrelated.t_opt;
    row.f_over_t_max = uncorrelated.f_over_t_max;
    row.ratio_r = 1.0;
    // independent probes: the single-qubit observable's relative gap
    row.saturation_gap =
        saturation_check(ProbeSpec::maximally_entangled(1), model, row.t_opt, 0.0).gap;
    return row;
  }
  const ProbeSpec spec = canonical_probe(strategy, n, n_ancillas);
  const FOverTMax best = maximize_f_over_t(strategy, spec, model);
  row.t_opt = best.t_opt;
  row.f_over_t_max = best.f_over_t_max;
  row.ratio_r = uncorrelated.f_over_t_max / best.f_over_t_max;
  row.saturation_gap = saturation_check(spec, model, best.t_opt, 0.0).gap;
  return row;
}

}  // namespace detail

/// One row per (N, strategy), ordered by N then by strategy enum order,
/// independent of the number of worker threads.
inline std::vector<SweepRow> sweep(const NoiseModel& model, int n_min, int n_max,
                                   std::span<const StrategyKind> strategies,
                                   const SweepOptions& options = {}) {
  detail::require(n_min >= 1 && n_max >= n_min, "sweep: probe range must satisfy 1 <= n_min <= n_max");
  detail::require(n_max <= kMaxDirectSumProbes, "sweep: n_max exceeds the supported probe count");
  detail::require(options.jobs >= 1, "sweep: jobs must be >= 1");
  std::vector<StrategyKind> order(strategies.begin(), strategies.end());
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  detail::require(!order.empty(), "sweep: no strategies requested");

  const int count_n = n_max - n_min + 1;
  const std::size_t per_n = order.size();
  std::vector<SweepRow> rows(static_cast<std::size_t>(count_n) * per_n);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count_n));
  std::atomic<int> next{0};

  auto work = [&] {
    for (int idx = next++; idx < count_n; idx = next++) {
      try {
        const int n = n_min + idx;
        const FOverTMax uncorrelated = maximize_f_over_t(
            StrategyKind::uncorrelated, canonical_probe(StrategyKind::uncorrelated, n), model);
        for (std::size_t s = 0; s < per_n; ++s)
          rows[idx * per_n + s] = detail::sweep_row(model, n, order[s], uncorrelated, options.n_ancillas);
      } catch (...) {
        errors[idx] = std::current_exception();
      }
    }
  };

  const int workers = std::min(options.jobs, count_n);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

/// F/t values read directly off the tabulated expressions for c1 = c2 = 1/sqrt(2)
/// (F_N/t, F_A/t, F_U/t), x = gamma t.
inline std::array<double, 3> table1_literal(NoiseKind kind, int n, double gamma, double t) {
  detail::require(n >= 1, "table1_literal: need at least one probe");
  const double x = gamma * t;
  const double e = std::exp(-x);
  const double nn = static_cast<double>(n);
  switch (kind) {
    case NoiseKind::adc: {
      const double en = std::exp(-nn * x);
      return {2 * t * nn * nn * en / (1 + en + std::pow(1 - e, n)),
              2 * t * nn * nn * en / (1 + en), t * nn * e};
    }
    case NoiseKind::dpc: {
      const double flip = (1 - e) / 2;
      const double e2n = std::exp(-2 * nn * x);
      return {2 * t * nn * nn * e2n / (std::pow(1 - flip, n) + std::pow(flip, n)),
              t * nn * nn * e2n / std::pow(1 - flip, n), t * nn * std::exp(-2 * x)};
    }
    case NoiseKind::pdc: {
      const double e2n = std::exp(-2 * nn * x);
      return {t * nn * nn * e2n, t * nn * nn * e2n, t * nn * std::exp(-2 * x)};
    }
    case NoiseKind::custom: break;
  }
  throw std::invalid_argument("table1_literal: only adc, dpc and pdc are tabulated");
}

struct Table1Row {
  NoiseKind model = NoiseKind::pdc;
  int n_probes = 1;
  double gamma = 0.0;
  double t = 0.0;
  double f_n_over_t = 0.0;  ///< from the general closed forms
  double f_a_over_t = 0.0;
  double f_u_over_t = 0.0;
  std::array<double, 3> literal{};  ///< tabulated expressions, same order
  /// Set when the tabulated ancilla-free entry disagrees with the general
  /// closed form (relative 1e-9).
  bool f_n_flagged = false;
};

inline Table1Row table1(NoiseKind kind, int n, double gamma, double t) {
  detail::require(t > 0, "table1: needs t > 0");
  const NoiseModel model = NoiseModel::of(kind, gamma);
  Table1Row row;
  row.model = kind;
  row.n_probes = n;
  row.gamma = gamma;
  row.t = t;
  row.f_n_over_t = qfi_ghz_closed(ProbeSpec::maximally_entangled(n), model, t).f_freq / t;
  row.f_a_over_t = qfi_ancilla_closed(ProbeSpec::maximally_entangled(n, 1), model, t).f_freq / t;
  row.f_u_over_t = qfi_uncorrelated_closed(ProbeSpec::maximally_entangled(n), model, t).f_freq / t;
  row.literal = table1_literal(kind, n, gamma, t);
  const double scale = std::max(std::abs(row.f_n_over_t), std::abs(row.literal[0]));
  row.f_n_flagged = std::abs(row.f_n_over_t - row.literal[0]) > 1e-9 * scale;
  return row;
}

}  // namespace ghzfreq
