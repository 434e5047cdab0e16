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
 * Generalized GHZ probes and their noisy evolution.
 *
 * Two representations are provided. DirectSumState is the exact compact form:
 * a 2x2 coherence block on span{|0...0>, |1...1>} plus a diagonal residual
 * grouped by Hamming class. DenseState is the full 2^(N+N_A) density matrix,
 * used only to cross-check the compact form.
 *
 * Qubit order in dense indices: probes occupy the most significant bits,
 * ancillas the least significant ones.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ghzfreq/channel.hpp"
#include "ghzfreq/errors.hpp"

namespace ghzfreq {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Hard cap on N + N_A for dense matrices.
inline constexpr int kMaxDenseQubits = 12;
/// Largest probe count for the compact representation (binomial multiplicities
/// must fit in 64 bits).
inline constexpr int kMaxDirectSumProbes = 62;

enum class StrategyKind { uncorrelated, ghz_free, ghz_ancilla };

inline std::string_view to_string(StrategyKind s) {
  switch (s) {
    case StrategyKind::uncorrelated: return "uncorrelated";
    case StrategyKind::ghz_free: return "ghz-free";
    case StrategyKind::ghz_ancilla: return "ghz-ancilla";
  }
  return "unknown";
}

inline std::optional<StrategyKind> parse_strategy(std::string_view text) {
  if (text == "uncorrelated") return StrategyKind::uncorrelated;
  if (text == "ghz-free" || text == "ghz_free") return StrategyKind::ghz_free;
  if (text == "ghz-ancilla" || text == "ghz_ancilla") return StrategyKind::ghz_ancilla;
  return std::nullopt;
}

/// c1 |0...0> + c2 |1...1> over N probes and N_A ancillas.
struct ProbeSpec {
  std::complex<double> c1{kInvSqrt2, 0.0};
  std::complex<double> c2{kInvSqrt2, 0.0};
  int n_probes = 1;
  int n_ancillas = 0;

  static ProbeSpec maximally_entangled(int n_probes, int n_ancillas = 0) {
    return {{kInvSqrt2, 0.0}, {kInvSqrt2, 0.0}, n_probes, n_ancillas};
  }

  /// Real c1 in [0, 1]; c2 = sqrt(1 - c1^2) exp(i c2_phase).
  static ProbeSpec from_real(double c1, int n_probes, int n_ancillas = 0,
                             double c2_phase = 0.0) {
    detail::require(c1 >= 0.0 && c1 <= 1.0, "ProbeSpec: real amplitude c1 must lie in [0, 1]");
    return {{c1, 0.0}, std::polar(std::sqrt(std::max(0.0, 1.0 - c1 * c1)), c2_phase),
            n_probes, n_ancillas};
  }

  double weight1() const { return std::norm(c1); }
  double weight2() const { return std::norm(c2); }
  int total_qubits() const { return n_probes + n_ancillas; }
};

inline void validate(const ProbeSpec& spec) {
  detail::require(spec.n_probes >= 1, "ProbeSpec: need at least one probe");
  detail::require(spec.n_ancillas >= 0, "ProbeSpec: ancilla count must be >= 0");
  detail::require(std::abs(spec.weight1() + spec.weight2() - 1.0) <= 1e-12,
                  "ProbeSpec: |c1|^2 + |c2|^2 must equal 1");
}

/// One Hamming class of the residual: every configuration with
/// `probe_zeros` probes in |0> (and, with ancillas, all ancillas equal to
/// `ancilla_bit`) has the same population.
struct ResidualClass {
  double population = 0.0;
  std::uint64_t multiplicity = 0;
  int probe_zeros = 0;
  int ancilla_bit = -1;  ///< -1 when there are no ancillas
};

struct DirectSumState {
  Eigen::Matrix2cd block = Eigen::Matrix2cd::Zero();
  std::vector<ResidualClass> residual;
  /// block(0, 1) = coherence * exp(-i phase_total), with
  /// phase_total = N (theta_noise + omega t) - arg(c1 c2*).
  double phase_total = 0.0;
  /// Signed |c1 c2| eta_perp^N.
  double coherence = 0.0;
  int n_probes = 0;
  int n_ancillas = 0;

  double block_trace() const { return block.trace().real(); }

  double residual_mass() const {
    double mass = 0.0;
    for (const auto& r : residual) mass += r.population * static_cast<double>(r.multiplicity);
    return mass;
  }
};

struct DenseState {
  int n_probes = 0;
  int n_ancillas = 0;
  Eigen::MatrixXcd matrix;

  Eigen::Index dim() const { return matrix.rows(); }
};

namespace detail {

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int j = 1; j <= k; ++j) {
    // exact: result * (n - k + j) is divisible by j at every step
    result = result / j * (n - k + j) + result % j * (n - k + j) / j;
  }
  return result;
}

/// Natural log of base^n with base clamped at zero (CPTP inputs can carry
/// rounding residue slightly below zero).
template <std::floating_point Real>
Real log_power(Real base, int n) {
  if (n == 0) return Real(0);
  if (!(base > 0)) return -std::numeric_limits<Real>::infinity();
  return n * std::log(base);
}

/// weight * (a/2)^j * (b/2)^k, evaluated in log space when every factor is
/// positive and exactly zero otherwise.
inline double binomial_weight(double weight, double a, int j, double b, int k) {
  if (!(weight > 0)) return 0.0;
  const double log_value = std::log(weight) + log_power(a / 2, j) + log_power(b / 2, k);
  return std::exp(log_value);
}

inline double signed_power(double x, int n) {
  if (n == 0) return 1.0;
  if (x == 0.0) return 0.0;
  const double magnitude = std::exp(n * std::log(std::abs(x)));
  return (x < 0 && n % 2 == 1) ? -magnitude : magnitude;
}

inline void require_cptp(const ChannelParams& p, const char* who) {
  detail::require(is_cptp(p), std::string(who) + ": channel is not completely positive");
}

inline void require_dense_cap(int qubits, const char* who) {
  detail::require(qubits <= kMaxDenseQubits,
                  std::string(who) + ": dense representation limited to " +
                      std::to_string(kMaxDenseQubits) + " qubits");
}

inline DirectSumState make_block(const ProbeSpec& spec, const ChannelParams& p, double omega,
                                 double t) {
  DirectSumState ds;
  ds.n_probes = spec.n_probes;
  ds.n_ancillas = spec.n_ancillas;
  const double cross_arg = std::arg(spec.c1 * std::conj(spec.c2));
  ds.phase_total = spec.n_probes * (p.theta_noise + omega * t) - cross_arg;
  ds.coherence = std::abs(spec.c1) * std::abs(spec.c2) * signed_power(p.eta_perp, spec.n_probes);
  const std::complex<double> off = std::polar(1.0, -ds.phase_total) * ds.coherence;
  ds.block(0, 1) = off;
  ds.block(1, 0) = std::conj(off);
  return ds;
}

}  // namespace detail

/// Rank-one projector onto c1|0...0> + c2|1...1> over all N + N_A qubits.
inline DenseState ghz_state(const ProbeSpec& spec) {
  validate(spec);
  detail::require_dense_cap(spec.total_qubits(), "ghz_state");
  const Eigen::Index dim = Eigen::Index{1} << spec.total_qubits();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi(0) += spec.c1;
  psi(dim - 1) += spec.c2;
  return {spec.n_probes, spec.n_ancillas, psi * psi.adjoint()};
}

/// Product state (c1|0> + c2|1>)^(x)N used as the uncorrelated reference.
inline DenseState uncorrelated_state(const ProbeSpec& spec) {
  validate(spec);
  detail::require_dense_cap(spec.n_probes, "uncorrelated_state");
  Eigen::VectorXcd psi(1);
  psi(0) = 1.0;
  Eigen::Vector2cd single(spec.c1, spec.c2);
  for (int q = 0; q < spec.n_probes; ++q) {
    Eigen::VectorXcd next(psi.size() * 2);
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      next(2 * i) = psi(i) * single(0);
      next(2 * i + 1) = psi(i) * single(1);
    }
    psi = std::move(next);
  }
  return {spec.n_probes, 0, psi * psi.adjoint()};
}

/// Applies a single-qubit map, given in natural representation, to qubit
/// `qubit` (0 = most significant) of a dense density matrix.
inline void apply_single_qubit_map(Eigen::MatrixXcd& rho, int total_qubits, int qubit,
                                   const Eigen::Matrix4cd& natural) {
  const Eigen::Index bit = Eigen::Index{1} << (total_qubits - 1 - qubit);
  const Eigen::Index dim = rho.rows();
  for (Eigen::Index c = 0; c < dim; ++c) {
    if (c & bit) continue;
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (r & bit) continue;
      Eigen::Vector4cd v(rho(r, c), rho(r, c | bit), rho(r | bit, c), rho(r | bit, c | bit));
      const Eigen::Vector4cd w = natural * v;
      rho(r, c) = w(0);
      rho(r, c | bit) = w(1);
      rho(r | bit, c) = w(2);
      rho(r | bit, c | bit) = w(3);
    }
  }
}

/// Dense noisy encoding: the channel on every probe, identity on ancillas.
inline DenseState evolve_dense(const ProbeSpec& spec, const ChannelParams& p, double omega,
                               double t) {
  detail::require_cptp(p, "evolve_dense");
  DenseState state = ghz_state(spec);
  const Eigen::Matrix4cd natural = natural_representation(superoperator(p, omega, t));
  for (int q = 0; q < spec.n_probes; ++q)
    apply_single_qubit_map(state.matrix, spec.total_qubits(), q, natural);
  return state;
}

inline DenseState evolve_dense_uncorrelated(const ProbeSpec& spec, const ChannelParams& p,
                                            double omega, double t) {
  detail::require_cptp(p, "evolve_dense_uncorrelated");
  DenseState state = uncorrelated_state(spec);
  const Eigen::Matrix4cd natural = natural_representation(superoperator(p, omega, t));
  for (int q = 0; q < spec.n_probes; ++q)
    apply_single_qubit_map(state.matrix, spec.n_probes, q, natural);
  return state;
}

inline DirectSumState evolve_directsum_free(const ProbeSpec& spec, const ChannelParams& p,
                                            double omega, double t) {
  validate(spec);
  detail::require(spec.n_ancillas == 0,
                  "evolve_directsum_free: probe spec has ancillas, use evolve_directsum_ancilla");
  detail::require(spec.n_probes <= kMaxDirectSumProbes, "evolve_directsum_free: too many probes");
  detail::require_cptp(p, "evolve_directsum_free");
  const auto a = a_coefficients(p);
  const int n = spec.n_probes;
  const double w1 = spec.weight1();
  const double w2 = spec.weight2();

  DirectSumState ds = detail::make_block(spec, p, omega, t);
  ds.block(0, 0) = detail::binomial_weight(w1, a.a_pp, n, a.a_mm, 0) +
                   detail::binomial_weight(w2, a.a_mp, n, a.a_pm, 0);
  ds.block(1, 1) = detail::binomial_weight(w1, a.a_mm, n, a.a_pp, 0) +
                   detail::binomial_weight(w2, a.a_pm, n, a.a_mp, 0);
  for (int k = 1; k <= n - 1; ++k) {
    const double pop = detail::binomial_weight(w1, a.a_pp, k, a.a_mm, n - k) +
                       detail::binomial_weight(w2, a.a_mp, k, a.a_pm, n - k);
    ds.residual.push_back({pop, detail::binomial(n, k), k, -1});
  }
  return ds;
}

/// Ancilla-assisted compact state. The c1 branch leaves the ancillas in |0>,
/// so its classes run over k = 0 ... N-1 probe zeros (k = N is the block
/// corner |0...0>); the c2 branch leaves them in |1> and runs over
/// k = 1 ... N (k = 0 is |1...1>).
inline DirectSumState evolve_directsum_ancilla(const ProbeSpec& spec, const ChannelParams& p,
                                               double omega, double t) {
  validate(spec);
  detail::require(spec.n_ancillas >= 1,
                  "evolve_directsum_ancilla: need at least one ancilla, use evolve_directsum_free");
  detail::require(spec.n_probes <= kMaxDirectSumProbes,
                  "evolve_directsum_ancilla: too many probes");
  detail::require_cptp(p, "evolve_directsum_ancilla");
  const auto a = a_coefficients(p);
  const int n = spec.n_probes;
  const double w1 = spec.weight1();
  const double w2 = spec.weight2();

  DirectSumState ds = detail::make_block(spec, p, omega, t);
  ds.block(0, 0) = detail::binomial_weight(w1, a.a_pp, n, a.a_mm, 0);
  ds.block(1, 1) = detail::binomial_weight(w2, a.a_pm, n, a.a_mp, 0);
  for (int k = 0; k <= n - 1; ++k) {
    ds.residual.push_back({detail::binomial_weight(w1, a.a_pp, k, a.a_mm, n - k),
                           detail::binomial(n, k), k, 0});
  }
  for (int k = 1; k <= n; ++k) {
    ds.residual.push_back({detail::binomial_weight(w2, a.a_mp, k, a.a_pm, n - k),
                           detail::binomial(n, k), k, 1});
  }
  return ds;
}

inline DirectSumState evolve_directsum(const ProbeSpec& spec, const ChannelParams& p,
                                       double omega, double t) {
  return spec.n_ancillas == 0 ? evolve_directsum_free(spec, p, omega, t)
                              : evolve_directsum_ancilla(spec, p, omega, t);
}

/// Maximum absolute deviation between a compact state and a dense state built
/// from the same inputs: block corner entries, every diagonal population, and
/// every off-diagonal entry outside the corner (which must vanish).
inline double assert_consistency(const DirectSumState& ds, const DenseState& dense) {
  detail::require(ds.n_probes == dense.n_probes && ds.n_ancillas == dense.n_ancillas,
                  "assert_consistency: probe/ancilla counts differ");
  const int total = ds.n_probes + ds.n_ancillas;
  detail::require(total <= kMaxDenseQubits &&
                      dense.dim() == (Eigen::Index{1} << total) &&
                      dense.matrix.cols() == dense.dim(),
                  "assert_consistency: dimension mismatch");
  const Eigen::Index dim = dense.dim();
  const Eigen::Index last = dim - 1;
  const Eigen::Index ancilla_mask = (Eigen::Index{1} << ds.n_ancillas) - 1;
  const auto& m = dense.matrix;

  auto expected_population = [&](Eigen::Index index) {
    const Eigen::Index probe_bits = index >> ds.n_ancillas;
    const Eigen::Index ancilla_bits = index & ancilla_mask;
    int bit = -1;
    if (ds.n_ancillas > 0) {
      if (ancilla_bits == 0) bit = 0;
      else if (ancilla_bits == ancilla_mask) bit = 1;
      else return 0.0;
    }
    const int zeros = ds.n_probes - static_cast<int>(std::popcount(
                                             static_cast<std::uint64_t>(probe_bits)));
    for (const auto& r : ds.residual)
      if (r.probe_zeros == zeros && r.ancilla_bit == bit) return r.population;
    return 0.0;
  };

  double dev = 0.0;
  dev = std::max(dev, std::abs(m(0, 0) - ds.block(0, 0)));
  dev = std::max(dev, std::abs(m(0, last) - ds.block(0, 1)));
  dev = std::max(dev, std::abs(m(last, 0) - ds.block(1, 0)));
  dev = std::max(dev, std::abs(m(last, last) - ds.block(1, 1)));
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      const bool corner = (r == 0 || r == last) && (c == 0 || c == last);
      if (corner) continue;
      const double expected = (r == c) ? expected_population(r) : 0.0;
      dev = std::max(dev, std::abs(m(r, c) - expected));
    }
  }
  return dev;
}

}  // namespace ghzfreq
