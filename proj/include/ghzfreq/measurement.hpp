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
 * The corner-coherence observable
 *
 *     O(delta) = e^{-i delta} |0...0><1...1| + e^{+i delta} |1...1><0...0|
 *
 * and its error-propagation sensitivity. On a compact state this gives
 * <O> = 2 coherence cos(phase_total - delta); delta = 0 is the plain
 * sigma_x-type corner observable and delta = -pi/2 its sine quadrature.
 *
 * By default O vanishes on the residual sector, so O^2 is the projector onto
 * span{|0...0>, |1...1>}. ResidualAction::identity puts the identity there
 * instead; that variant shifts <O> by the residual mass and does not reach
 * the QFI bound once the residual is populated.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ghzfreq/channel.hpp"
#include "ghzfreq/fisher.hpp"
#include "ghzfreq/state.hpp"

namespace ghzfreq {

enum class ResidualAction { zero, identity };

struct GhzObservable {
  int n_total = 1;          ///< qubits spanned: N, or N + N_A with ancillas
  double meas_phase = 0.0;  ///< delta
  ResidualAction residual = ResidualAction::zero;
};

inline GhzObservable observable_for(const ProbeSpec& spec, double meas_phase = 0.0,
                                    ResidualAction residual = ResidualAction::zero) {
  return {spec.total_qubits(), meas_phase, residual};
}

struct Moments {
  double mean = 0.0;
  double second_moment = 0.0;
  /// Variance assembled without the second_moment - mean^2 cancellation.
  double var = 0.0;

  double variance() const { return var; }
};

inline Moments expectation_moments(const DirectSumState& ds, const GhzObservable& obs) {
  detail::require(obs.n_total == ds.n_probes + ds.n_ancillas,
                  "expectation_moments: observable and state span different qubit counts");
  Moments m;
  const double x = ds.phase_total - obs.meas_phase;
  const double c2 = 4.0 * ds.coherence * ds.coherence;
  m.mean = 2.0 * ds.coherence * std::cos(x);
  m.second_moment = ds.block_trace();
  // tr - 4c^2 cos^2 = (tr - 4c^2) + 4c^2 sin^2, with tr - 4c^2 >= 0 by positivity.
  m.var = std::max(0.0, m.second_moment - c2) + c2 * std::sin(x) * std::sin(x);
  if (obs.residual == ResidualAction::identity) {
    const double mass = ds.residual_mass();
    m.var += mass * (1.0 - mass) - 2.0 * mass * m.mean;
    m.mean += mass;
    m.second_moment += mass;
  }
  return m;
}

/// Explicit 2^n x 2^n matrix of the observable.
inline Eigen::MatrixXcd observable_matrix(const GhzObservable& obs) {
  detail::require(obs.n_total >= 1 && obs.n_total <= kMaxDenseQubits,
                  "observable_matrix: qubit count outside the dense range");
  const Eigen::Index dim = Eigen::Index{1} << obs.n_total;
  Eigen::MatrixXcd o = Eigen::MatrixXcd::Zero(dim, dim);
  if (obs.residual == ResidualAction::identity) {
    for (Eigen::Index i = 1; i + 1 < dim; ++i) o(i, i) = 1.0;
  }
  o(0, dim - 1) += std::polar(1.0, -obs.meas_phase);
  o(dim - 1, 0) += std::polar(1.0, obs.meas_phase);
  return o;
}

/// Error-propagation pieces at one working point. `sensitivity` is
/// variance / (t |d<O>/dphi|^2) and is empty when the slope vanishes.
struct WorkingPoint {
  Moments moments;
  double slope = 0.0;
  std::optional<double> sensitivity;
};

/// Relative slope below which a working point is treated as unusable.
inline constexpr double kFlatSlope = 1e-12;

inline WorkingPoint evaluate_working_point(const DirectSumState& ds, const GhzObservable& obs,
                                           double t) {
  detail::require(t > 0, "error propagation needs t > 0");
  WorkingPoint wp;
  wp.moments = expectation_moments(ds, obs);
  const double max_slope = 2.0 * ds.n_probes * std::abs(ds.coherence);
  wp.slope = -2.0 * ds.n_probes * ds.coherence * std::sin(ds.phase_total - obs.meas_phase);
  if (max_slope > 0 && std::abs(wp.slope) > kFlatSlope * max_slope) {
    wp.sensitivity = wp.moments.variance() / (t * wp.slope * wp.slope);
  }
  return wp;
}

inline std::optional<double> error_propagation_sensitivity(const DirectSumState& ds,
                                                           const GhzObservable& obs, double t) {
  return evaluate_working_point(ds, obs, t).sensitivity;
}

inline std::optional<double> error_propagation_sensitivity(const ProbeSpec& spec,
                                                           const NoiseModel& model, double t,
                                                           double omega,
                                                           const GhzObservable& obs) {
  return error_propagation_sensitivity(evolve_directsum(spec, params_at(model, t), omega, t), obs,
                                       t);
}

struct SaturationReport {
  bool is_saturating = false;
  double best_delta = 0.0;
  double best_sensitivity = 0.0;
  double qcrb = 0.0;  ///< t / F_omega
  double gap = 0.0;   ///< (best_sensitivity - qcrb) / qcrb
  /// Distance of (phase_total - best_delta - pi/2) to the nearest multiple
  /// of pi; zero when the optimum sits on the predicted working point.
  double working_point_offset = 0.0;
};

inline constexpr double kSaturationTolerance = 1e-8;

namespace detail {

inline double wrap_two_pi(double x) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double y = std::fmod(x, two_pi);
  if (y < 0) y += two_pi;
  if (y >= two_pi) y = 0.0;
  return y;
}

inline double distance_to_multiple_of_pi(double x) {
  const double y = std::remainder(x, std::numbers::pi);
  return std::abs(y);
}


inline SaturationReport saturation_scan(const DirectSumState& ds, double t, double f_phase,
                                        std::size_t grid_points, ResidualAction residual) {
  detail::require(t > 0, "saturation_check: needs t > 0");
  SaturationReport report;
  report.qcrb = f_phase > 0 ? 1.0 / (t * f_phase) : std::numeric_limits<double>::infinity();

  std::vector<double> candidates;
  candidates.reserve(grid_points + 2);
  for (std::size_t k = 0; k < grid_points; ++k)
    candidates.push_back(2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(grid_points));
  candidates.push_back(wrap_two_pi(ds.phase_total - 0.5 * std::numbers::pi));
  candidates.push_back(wrap_two_pi(ds.phase_total + 0.5 * std::numbers::pi));

  GhzObservable obs{ds.n_probes + ds.n_ancillas, 0.0, residual};
  std::optional<double> best;
  for (double delta : candidates) {
    obs.meas_phase = delta;
    const auto s = error_propagation_sensitivity(ds, obs, t);
    if (!s) continue;
    if (!best || *s < *best * (1.0 - 1e-13)) {
      best = *s;
      report.best_delta = delta;
    } else if (*s <= *best * (1.0 + 1e-13) && delta < report.best_delta) {
      best = std::min(*best, *s);
      report.best_delta = delta;
    }
  }
  if (!best || !std::isfinite(report.qcrb)) {
    report.best_sensitivity = std::numeric_limits<double>::infinity();
    report.gap = std::numeric_limits<double>::infinity();
    return report;
  }
  report.best_sensitivity = *best;
  report.gap = (*best - report.qcrb) / report.qcrb;
  report.is_saturating = std::abs(report.gap) <= kSaturationTolerance;
  report.working_point_offset =
      distance_to_multiple_of_pi(ds.phase_total - report.best_delta - 0.5 * std::numbers::pi);
  return report;
}

}  // namespace detail

/// Scans delta on a uniform grid in [0, 2 pi) plus the two analytic optima
/// delta = phase_total -/+ pi/2 and compares the best sensitivity with t / F,
/// F taken from the block's Bloch data. Ties (relative 1e-13) resolve to the
/// smaller delta.
inline SaturationReport saturation_check(const DirectSumState& ds, double t,
                                         std::size_t grid_points = 2048,
                                         ResidualAction residual = ResidualAction::zero) {
  const double f_phase = ds.block_trace() > 0 ? qfi_bloch_2x2(block_bloch_of(ds)) : 0.0;
  return detail::saturation_scan(ds, t, f_phase, grid_points, residual);
}

/// Same scan with the bound taken from the closed-form QFI of the strategy
/// implied by the spec's ancilla count.
inline SaturationReport saturation_check(const ProbeSpec& spec, const NoiseModel& model, double t,
                                         double omega, std::size_t grid_points = 2048,
                                         ResidualAction residual = ResidualAction::zero) {
  const ChannelParams p = params_at(model, t);
  const double f_phase = qfi_closed(ghz_strategy_of(spec), spec, p, t).f_phase;
  return detail::saturation_scan(evolve_directsum(spec, p, omega, t), t, f_phase, grid_points,
                                 residual);
}

}  // namespace ghzfreq
