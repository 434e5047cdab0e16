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
 * Single-qubit phase-covariant channels in their affine Bloch-sphere form.
 *
 * A channel at a fixed time is the tuple (theta_noise, eta_perp, eta_par,
 * kappa). Together with the encoding phase omega*t it acts on a Bloch vector
 * as
 *
 *     r_x' = eta_perp (cos(th) r_x - sin(th) r_y)
 *     r_y' = eta_perp (sin(th) r_x + cos(th) r_y)
 *     r_z' = eta_par r_z + kappa,               th = theta_noise + omega t.
 *
 * Basis convention: |0> is the +z eigenstate (r = (0,0,1)) and the encoding
 * is exp(-i omega t sigma_z / 2). Amplitude damping relaxes |0> towards |1>.
 */

#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

#include "ghzfreq/errors.hpp"

namespace ghzfreq {

/// Absolute tolerance on Choi eigenvalues used by every CP decision.
inline constexpr double kCpTolerance = 1e-12;

template <std::floating_point Real>
struct BasicChannelParams {
  Real theta_noise{0};  ///< noise-induced rotation, excludes omega*t
  Real eta_perp{1};
  Real eta_par{1};
  Real kappa{0};

  template <std::floating_point Other>
  constexpr BasicChannelParams<Other> cast() const {
    return {static_cast<Other>(theta_noise), static_cast<Other>(eta_perp),
            static_cast<Other>(eta_par), static_cast<Other>(kappa)};
  }

  friend constexpr bool operator==(const BasicChannelParams&,
                                   const BasicChannelParams&) = default;
};

using ChannelParams = BasicChannelParams<double>;

/// A_{s1 s2} = 1 s1 eta_par s2 kappa.
template <std::floating_point Real>
struct BasicACoefficients {
  Real a_pp;
  Real a_pm;
  Real a_mp;
  Real a_mm;
};

using ACoefficients = BasicACoefficients<double>;

template <std::floating_point Real>
constexpr BasicACoefficients<Real> a_coefficients(const BasicChannelParams<Real>& p) {
  return {Real(1) + p.eta_par + p.kappa, Real(1) + p.eta_par - p.kappa,
          Real(1) - p.eta_par + p.kappa, Real(1) - p.eta_par - p.kappa};
}

enum class NoiseKind { adc, dpc, pdc, custom };

inline std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::adc: return "adc";
    case NoiseKind::dpc: return "dpc";
    case NoiseKind::pdc: return "pdc";
    case NoiseKind::custom: return "custom";
  }
  return "unknown";
}

inline std::optional<NoiseKind> parse_noise_kind(std::string_view text) {
  if (text == "adc" || text == "ADC") return NoiseKind::adc;
  if (text == "dpc" || text == "DPC") return NoiseKind::dpc;
  if (text == "pdc" || text == "PDC") return NoiseKind::pdc;
  return std::nullopt;
}

/// A time-parameterized channel family. The three named kinds carry a
/// Lindblad generator with constant rate gamma; custom models are a plain
/// time -> ChannelParams rule.
struct NoiseModel {
  NoiseKind kind = NoiseKind::pdc;
  double gamma = 0.0;
  std::function<ChannelParams(double)> custom_rule;

  static NoiseModel adc(double gamma) { return {NoiseKind::adc, gamma, {}}; }
  static NoiseModel dpc(double gamma) { return {NoiseKind::dpc, gamma, {}}; }
  static NoiseModel pdc(double gamma) { return {NoiseKind::pdc, gamma, {}}; }
  static NoiseModel of(NoiseKind kind, double gamma) { return {kind, gamma, {}}; }
  static NoiseModel custom(std::function<ChannelParams(double)> rule) {
    return {NoiseKind::custom, 0.0, std::move(rule)};
  }

  bool has_lindblad_form() const { return kind != NoiseKind::custom; }
};

/// Closed-form complete-positivity test. The Choi matrix of a
/// phase-covariant map splits into the coherence pair {|00>, |11>} and two
/// isolated populations A_{-+}/2, A_{--}/2, so CP holds iff those two are
/// nonnegative and the 2x2 pair [[A_{++}/2, eta_perp], [eta_perp, A_{+-}/2]]
/// is PSD, i.e. A_{++} A_{+-} >= 4 eta_perp^2 with A_{++}, A_{+-} >= 0.
template <std::floating_point Real>
bool is_cptp(const BasicChannelParams<Real>& p, Real tol = Real(kCpTolerance)) {
  if (!std::isfinite(p.theta_noise) || !std::isfinite(p.eta_perp) ||
      !std::isfinite(p.eta_par) || !std::isfinite(p.kappa)) {
    return false;
  }
  const auto a = a_coefficients(p);
  if (!(a.a_mp / 2 >= -tol) || !(a.a_mm / 2 >= -tol)) return false;
  const Real mean = (a.a_pp + a.a_pm) / 4;
  const Real half_split = (a.a_pp - a.a_pm) / 4;
  return mean - std::hypot(half_split, p.eta_perp) >= -tol;
}

template <std::floating_point Real = double>
BasicChannelParams<Real> params_at(const NoiseModel& model, Real t) {
  detail::require(t >= 0 && std::isfinite(t), "params_at: time must be finite and >= 0");
  detail::require(model.gamma >= 0 && std::isfinite(model.gamma),
                  "params_at: decay rate must be finite and >= 0");
  const Real gt = static_cast<Real>(model.gamma) * t;
  switch (model.kind) {
    case NoiseKind::adc:
      return {Real(0), std::exp(-gt / 2), std::exp(-gt), std::expm1(-gt)};
    case NoiseKind::dpc:
      return {Real(0), std::exp(-gt), std::exp(-gt), Real(0)};
    case NoiseKind::pdc:
      return {Real(0), std::exp(-gt), Real(1), Real(0)};
    case NoiseKind::custom: {
      detail::require(static_cast<bool>(model.custom_rule),
                      "params_at: custom model without a rule");
      const ChannelParams p = model.custom_rule(static_cast<double>(t));
      detail::require(is_cptp(p), "params_at: custom rule returned a non-CPTP channel");
      return p.cast<Real>();
    }
  }
  throw std::invalid_argument("params_at: unknown noise kind");
}

/// Real 4x4 map on (r0, r_x, r_y, r_z), block form [[1, 0], [c, A]].
inline Eigen::Matrix4d superoperator(const ChannelParams& p, double omega, double t) {
  const double th = p.theta_noise + omega * t;
  const double c = std::cos(th);
  const double s = std::sin(th);
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = 1.0;
  m(1, 1) = p.eta_perp * c;
  m(1, 2) = -p.eta_perp * s;
  m(2, 1) = p.eta_perp * s;
  m(2, 2) = p.eta_perp * c;
  m(3, 0) = p.kappa;
  m(3, 3) = p.eta_par;
  return m;
}

/// Pure encoding rotation by `angle` about z.
inline Eigen::Matrix4d rotation_superoperator(double angle) {
  return superoperator(ChannelParams{}, 1.0, angle);
}

/// Converts a Pauli-basis superoperator into its action on the row-major
/// vectorization (M00, M01, M10, M11) of a 2x2 operator.
inline Eigen::Matrix4cd natural_representation(const Eigen::Matrix4d& pauli) {
  using cd = std::complex<double>;
  constexpr cd i{0.0, 1.0};
  // m_k = Tr(sigma_k M)
  Eigen::Matrix4cd to_pauli;
  to_pauli << 1, 0, 0, 1,
              0, 1, 1, 0,
              0, i, -i, 0,
              1, 0, 0, -1;
  // M = (m0 + m.sigma) / 2
  Eigen::Matrix4cd from_pauli;
  from_pauli << 0.5, 0, 0, 0.5,
                0, 0.5, -0.5 * i, 0,
                0, 0.5, 0.5 * i, 0,
                0.5, 0, 0, -0.5;
  return from_pauli * pauli.cast<cd>() * to_pauli;
}

/// Choi matrix sum_ij |i><j| (x) E(|i><j|), index 2i + a, trace 2.
inline Eigen::Matrix4cd choi_matrix(const ChannelParams& p) {
  const Eigen::Matrix4cd t = natural_representation(superoperator(p, 0.0, 0.0));
  Eigen::Matrix4cd choi;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) choi(2 * i + a, 2 * j + b) = t(2 * a + b, 2 * i + j);
  return choi;
}

inline Eigen::Vector4d choi_eigenvalues(const ChannelParams& p) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(choi_matrix(p),
                                                         Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

inline double choi_min_eigenvalue(const ChannelParams& p) {
  return choi_eigenvalues(p).minCoeff();
}

enum class Checking { enforce, unchecked };

inline Eigen::Vector3d affine_apply(const ChannelParams& p, double omega, double t,
                                    const Eigen::Vector3d& r,
                                    Checking checking = Checking::enforce) {
  detail::require(r.norm() <= 1.0 + 1e-12, "affine_apply: Bloch vector longer than 1");
  if (checking == Checking::enforce) {
    detail::require(is_cptp(p), "affine_apply: channel is not completely positive");
  }
  const Eigen::Matrix4d s = superoperator(p, omega, t);
  Eigen::Vector4d v;
  v << 1.0, r;
  return (s * v).tail<3>();
}

inline Eigen::Vector3d bloch_vector(const Eigen::Matrix2cd& rho) {
  return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(),
          (rho(0, 0) - rho(1, 1)).real()};
}

inline Eigen::Matrix2cd density_from_bloch(const Eigen::Vector3d& r) {
  using cd = std::complex<double>;
  Eigen::Matrix2cd rho;
  rho << cd(0.5 * (1 + r.z()), 0), cd(0.5 * r.x(), -0.5 * r.y()),
         cd(0.5 * r.x(), 0.5 * r.y()), cd(0.5 * (1 - r.z()), 0);
  return rho;
}

namespace detail {

inline Eigen::Matrix2cd lindblad_rhs(NoiseKind kind, double gamma, double omega,
                                     const Eigen::Matrix2cd& rho) {
  using cd = std::complex<double>;
  constexpr cd i{0.0, 1.0};
  Eigen::Matrix2cd sx, sy, sz, lower;
  sx << 0, 1, 1, 0;
  sy << 0, -i, i, 0;
  sz << 1, 0, 0, -1;
  lower << 0, 0, 1, 0;  // |1><0|
  const Eigen::Matrix2cd h = 0.5 * omega * sz;
  Eigen::Matrix2cd out = -i * (h * rho - rho * h);
  switch (kind) {
    case NoiseKind::adc: {
      const Eigen::Matrix2cd raise = lower.adjoint();
      const Eigen::Matrix2cd n = raise * lower;
      out += gamma * (lower * rho * raise - 0.5 * (n * rho + rho * n));
      break;
    }
    case NoiseKind::dpc:
      out += 0.25 * gamma *
             (sx * rho * sx + sy * rho * sy + sz * rho * sz - 3.0 * rho);
      break;
    case NoiseKind::pdc:
      out += 0.5 * gamma * (sz * rho * sz - rho);
      break;
    case NoiseKind::custom:
      throw std::invalid_argument("integrate_master_equation: custom model has no Lindblad form");
  }
  return out;
}

}  // namespace detail

/// Classical RK4 with `steps` equal steps on the model's Lindblad equation
/// plus the encoding Hamiltonian omega sigma_z / 2.
inline Eigen::Matrix2cd integrate_master_equation(const NoiseModel& model, double omega,
                                                  double t, const Eigen::Matrix2cd& rho0,
                                                  int steps) {
  detail::require(model.has_lindblad_form(),
                  "integrate_master_equation: custom model has no Lindblad form");
  detail::require(steps >= 1, "integrate_master_equation: steps must be >= 1");
  detail::require(t >= 0 && std::isfinite(t), "integrate_master_equation: time must be >= 0");
  detail::require(model.gamma >= 0, "integrate_master_equation: decay rate must be >= 0");
  detail::require((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() <= 1e-10,
                  "integrate_master_equation: rho0 is not Hermitian");
  detail::require(std::abs(rho0.trace() - 1.0) <= 1e-10,
                  "integrate_master_equation: rho0 must have unit trace");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(rho0, Eigen::EigenvaluesOnly);
  detail::require(eig.eigenvalues().minCoeff() >= -1e-10,
                  "integrate_master_equation: rho0 is not positive semidefinite");

  const double h = t / steps;
  auto f = [&](const Eigen::Matrix2cd& r) {
    return detail::lindblad_rhs(model.kind, model.gamma, omega, r);
  };
  Eigen::Matrix2cd rho = rho0;
  for (int k = 0; k < steps; ++k) {
    const Eigen::Matrix2cd k1 = f(rho);
    const Eigen::Matrix2cd k2 = f(rho + 0.5 * h * k1);
    const Eigen::Matrix2cd k3 = f(rho + 0.5 * h * k2);
    const Eigen::Matrix2cd k4 = f(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

}  // namespace ghzfreq
