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

#include <cmath>
#include <numbers>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "ghzfreq/channel.hpp"
#include "oracles.hpp"

using namespace ghzfreq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Eigen::Vector3d kraus_apply(NoiseKind kind, double gamma_t, double angle,
                            const Eigen::Vector3d& r) {
  Eigen::Matrix2cd rho = density_from_bloch(r);
  const Eigen::Matrix2cd u = oracle::rotation(angle);
  rho = u * rho * u.adjoint();
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  for (const auto& k : oracle::kraus(kind, gamma_t)) out += k * rho * k.adjoint();
  return bloch_vector(out);
}

Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector3d v(g(rng), g(rng), g(rng));
  return v.normalized();
}

}  // namespace

TEST_CASE("params_at dictionary", "[channel]") {
  const auto adc0 = params_at(NoiseModel::adc(1.0), 0.0);
  CHECK(adc0 == ChannelParams{0, 1, 1, 0});

  const auto adc = params_at(NoiseModel::adc(1.0), std::log(2.0));
  CHECK(adc.theta_noise == 0.0);
  CHECK_THAT(adc.eta_perp, WithinRel(1 / std::sqrt(2.0), 1e-15));
  CHECK_THAT(adc.eta_par, WithinRel(0.5, 1e-15));
  CHECK_THAT(adc.kappa, WithinRel(-0.5, 1e-15));

  const auto pdc = params_at(NoiseModel::pdc(2.0), 0.5);
  CHECK_THAT(pdc.eta_perp, WithinRel(std::exp(-1.0), 1e-15));
  CHECK(pdc.eta_par == 1.0);
  CHECK(pdc.kappa == 0.0);

  const auto dpc = params_at(NoiseModel::dpc(1.0), 0.3);
  CHECK_THAT(dpc.eta_perp, WithinRel(std::exp(-0.3), 1e-15));
  CHECK_THAT(dpc.eta_par, WithinRel(std::exp(-0.3), 1e-15));
  CHECK(dpc.kappa == 0.0);

  CHECK_THROWS_AS(params_at(NoiseModel::adc(1.0), -0.1), std::invalid_argument);
  CHECK_THROWS_AS(params_at(NoiseModel::adc(-1.0), 0.1), std::invalid_argument);
}

TEST_CASE("params_at works in extended precision", "[channel]") {
  const auto p = params_at<long double>(NoiseModel::adc(1.0), 0.25L);
  CHECK(std::abs(p.kappa - std::expm1(-0.25L)) < 1e-18L);
}

TEST_CASE("custom rules are validated", "[channel]") {
  const auto ok = NoiseModel::custom([](double t) { return ChannelParams{0.1 * t, 0.5, 0.5, 0.0}; });
  CHECK(params_at(ok, 2.0).theta_noise == 0.2);
  const auto bad = NoiseModel::custom([](double) { return ChannelParams{0, 1, 0, 0}; });
  CHECK_THROWS_AS(params_at(bad, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(params_at(NoiseModel::custom({}), 1.0), std::invalid_argument);
}

TEST_CASE("a_coefficients", "[channel]") {
  const auto pdc = a_coefficients(ChannelParams{0, 0.3, 1, 0});
  CHECK(pdc.a_pp == 2.0);
  CHECK(pdc.a_pm == 2.0);
  CHECK(pdc.a_mp == 0.0);
  CHECK(pdc.a_mm == 0.0);

  const auto adc = a_coefficients(params_at(NoiseModel::adc(1.0), std::log(2.0)));
  CHECK_THAT(adc.a_pp, WithinAbs(1.0, 1e-15));
  CHECK_THAT(adc.a_pm, WithinAbs(2.0, 1e-15));
  CHECK_THAT(adc.a_mp, WithinAbs(0.0, 1e-15));
  CHECK_THAT(adc.a_mm, WithinAbs(1.0, 1e-15));

  const auto flat = a_coefficients(ChannelParams{0, 0.2, 0, 0});
  CHECK(flat.a_pp == 1.0);
  CHECK(flat.a_pm == 1.0);
  CHECK(flat.a_mp == 1.0);
  CHECK(flat.a_mm == 1.0);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> box(-1.5, 1.5);
  for (int k = 0; k < 200; ++k) {
    const ChannelParams p{box(rng), box(rng), box(rng), box(rng)};
    const auto a = a_coefficients(p);
    CHECK_THAT(a.a_pp + a.a_mm, WithinAbs(2.0, 1e-15));
    CHECK_THAT(a.a_pm + a.a_mp, WithinAbs(2.0, 1e-15));
    CHECK_THAT(a.a_pp - a.a_mp, WithinAbs(2 * p.eta_par, 1e-15));
    CHECK_THAT(a.a_pp - a.a_pm, WithinAbs(2 * p.kappa, 1e-15));
  }
}

TEST_CASE("affine_apply", "[channel]") {
  const Eigen::Vector3d r(0.3, -0.4, 0.5);
  CHECK((affine_apply(ChannelParams{}, 0.0, 1.0, r) - r).norm() == 0.0);

  const double gt = 0.7;
  const auto up = affine_apply(params_at(NoiseModel::adc(1.0), gt), 0.0, gt, {0, 0, 1});
  CHECK_THAT(up.z(), WithinAbs(2 * std::exp(-gt) - 1, 1e-15));
  CHECK(up.head<2>().norm() == 0.0);
  const auto late = affine_apply(params_at(NoiseModel::adc(1.0), 60.0), 0.0, 60.0, {0, 0, 1});
  CHECK_THAT(late.z(), WithinAbs(-1.0, 1e-15));

  const double t = 0.2;
  const double omega = std::numbers::pi / 2 / t;
  const auto x = affine_apply(params_at(NoiseModel::pdc(1.0), t), omega, t, {1, 0, 0});
  CHECK_THAT(x.x(), WithinAbs(0.0, 1e-15));
  CHECK_THAT(x.y(), WithinAbs(std::exp(-0.2), 1e-15));
  CHECK_THAT(x.z(), WithinAbs(0.0, 1e-15));

  CHECK_THROWS_AS(affine_apply(ChannelParams{0, 1, 0, 0}, 0, 1, r), std::invalid_argument);
  CHECK_NOTHROW(affine_apply(ChannelParams{0, 1, 0, 0}, 0, 1, r, Checking::unchecked));
  CHECK_THROWS_AS(affine_apply(ChannelParams{}, 0, 1, {1, 1, 0}), std::invalid_argument);
}

TEST_CASE("affine_apply agrees with a Kraus construction", "[channel]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (NoiseKind kind : {NoiseKind::adc, NoiseKind::dpc, NoiseKind::pdc}) {
    for (int k = 0; k < 50; ++k) {
      const double t = 2 * u(rng);
      const double omega = 3 * u(rng);
      const Eigen::Vector3d r = u(rng) * random_unit(rng);
      const auto lib = affine_apply(params_at(NoiseModel::of(kind, 1.0), t), omega, t, r);
      CHECK((lib - kraus_apply(kind, t, omega * t, r)).norm() < 1e-14);
    }
  }
}

TEST_CASE("superoperator", "[channel]") {
  CHECK(superoperator(ChannelParams{}, 0.0, 1.0) == Eigen::Matrix4d::Identity());
  const auto p = params_at(NoiseModel::adc(1.0), 0.4);
  const Eigen::Matrix4d s = superoperator(p, 0.0, 0.4);
  CHECK(s.row(3) == Eigen::RowVector4d(p.kappa, 0, 0, p.eta_par));
  CHECK(s.row(0) == Eigen::RowVector4d(1, 0, 0, 0));
}

TEST_CASE("encoding rotation commutes with the dissipative map", "[channel]") {
  for (NoiseKind kind : {NoiseKind::adc, NoiseKind::dpc, NoiseKind::pdc}) {
    for (double t : {0.0, 0.1, 0.5, 1.3, 4.0}) {
      const Eigen::Matrix4d noise = superoperator(params_at(NoiseModel::of(kind, 0.8), t), 0, t);
      const Eigen::Matrix4d rot = rotation_superoperator(2.1 * t);
      CHECK((rot * noise - noise * rot).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("natural representation acts on vectorized operators", "[channel]") {
  const auto p = params_at(NoiseModel::adc(1.0), 0.3);
  const Eigen::Matrix4cd nat = natural_representation(superoperator(p, 1.0, 0.3));
  const Eigen::Matrix2cd rho = density_from_bloch({0.2, 0.5, -0.3});
  Eigen::Vector4cd v(rho(0, 0), rho(0, 1), rho(1, 0), rho(1, 1));
  const Eigen::Vector4cd out = nat * v;
  Eigen::Matrix2cd expect = Eigen::Matrix2cd::Zero();
  const Eigen::Matrix2cd u = oracle::rotation(0.3);
  for (const auto& k : oracle::kraus(NoiseKind::adc, 0.3)) expect += k * u * rho * u.adjoint() * k.adjoint();
  CHECK(std::abs(out(0) - expect(0, 0)) < 1e-15);
  CHECK(std::abs(out(1) - expect(0, 1)) < 1e-15);
  CHECK(std::abs(out(2) - expect(1, 0)) < 1e-15);
  CHECK(std::abs(out(3) - expect(1, 1)) < 1e-15);
}

TEST_CASE("Choi matrix", "[channel]") {
  const Eigen::Vector4d id = choi_eigenvalues(ChannelParams{});
  CHECK_THAT(id(3), WithinAbs(2.0, 1e-15));
  CHECK_THAT(id.head<3>().cwiseAbs().maxCoeff(), WithinAbs(0.0, 1e-15));

  CHECK(choi_min_eigenvalue(params_at(NoiseModel::adc(1.0), std::log(2.0))) >= -1e-15);
  CHECK(choi_min_eigenvalue(ChannelParams{0, 1, 0, 0}) < 0);

  const Eigen::Matrix4cd c = choi_matrix(params_at(NoiseModel::dpc(1.0), 0.6));
  CHECK((c - c.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THAT(c.trace().real(), WithinAbs(2.0, 1e-15));
}

TEST_CASE("Choi spectrum matches the Kraus construction", "[channel]") {
  for (NoiseKind kind : {NoiseKind::adc, NoiseKind::dpc, NoiseKind::pdc}) {
    for (double gt : {0.05, 0.4, 1.7}) {
      Eigen::Matrix4cd choi = Eigen::Matrix4cd::Zero();
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          Eigen::Matrix2cd eij = Eigen::Matrix2cd::Zero();
          eij(i, j) = 1.0;
          Eigen::Matrix2cd img = Eigen::Matrix2cd::Zero();
          for (const auto& k : oracle::kraus(kind, gt)) img += k * eij * k.adjoint();
          choi.block<2, 2>(2 * i, 2 * j) = img;
        }
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(choi);
      const auto lib = choi_eigenvalues(params_at(NoiseModel::of(kind, 1.0), gt));
      CHECK((es.eigenvalues() - lib).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("is_cptp", "[channel]") {
  CHECK_FALSE(is_cptp(ChannelParams{0, 1, 0, 0}));
  CHECK(is_cptp(ChannelParams{0, 1, 1, 0}));
  CHECK_FALSE(is_cptp(ChannelParams{0, std::nan(""), 1, 0}));
  for (NoiseKind kind : {NoiseKind::adc, NoiseKind::dpc, NoiseKind::pdc})
    for (int k = 0; k <= 400; ++k) {
      const auto p = params_at(NoiseModel::of(kind, 1.0), 0.05 * k);
      CHECK(is_cptp(p));
      CHECK(choi_min_eigenvalue(p) >= -kCpTolerance);
    }
}

TEST_CASE("is_cptp agrees with the Choi spectrum on random parameters", "[channel][property]") {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> box(-1.5, 1.5);
  int disagreements = 0;
  for (int k = 0; k < 20000; ++k) {
    const ChannelParams p{box(rng), box(rng), box(rng), box(rng)};
    if (is_cptp(p) != (choi_min_eigenvalue(p) >= -kCpTolerance)) ++disagreements;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("Bloch vector round trip", "[channel]") {
  const Eigen::Vector3d r(0.1, -0.7, 0.2);
  CHECK((bloch_vector(density_from_bloch(r)) - r).norm() < 1e-16);
}

TEST_CASE("master equation integrator", "[channel]") {
  using cd = std::complex<double>;
  const Eigen::Matrix2cd plus = density_from_bloch({1, 0, 0});
  Eigen::Matrix2cd excited = Eigen::Matrix2cd::Zero();
  excited(0, 0) = 1.0;
  Eigen::Matrix2cd ground = Eigen::Matrix2cd::Zero();
  ground(1, 1) = 1.0;

  SECTION("noiseless evolution is the encoding rotation") {
    const auto rho = integrate_master_equation(NoiseModel::pdc(0.0), 1.3, 0.9, plus, 2000);
    const Eigen::Matrix2cd u = oracle::rotation(1.3 * 0.9);
    CHECK((rho - u * plus * u.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("amplitude damping of the decaying level") {
    const double t = 0.8;
    const auto rho = integrate_master_equation(NoiseModel::adc(1.0), 0.0, t, excited, 10000);
    CHECK_THAT(rho(0, 0).real(), WithinAbs(std::exp(-t), 1e-12));
    CHECK_THAT(rho(1, 1).real(), WithinAbs(1 - std::exp(-t), 1e-12));
    const auto still = integrate_master_equation(NoiseModel::adc(1.0), 0.0, t, ground, 100);
    CHECK((still - ground).cwiseAbs().maxCoeff() < 1e-15);
  }
  SECTION("depolarizing coherence") {
    const double t = 1.1;
    const auto rho = integrate_master_equation(NoiseModel::dpc(1.0), 0.0, t, plus, 10000);
    CHECK_THAT(std::abs(rho(0, 1)), WithinAbs(std::exp(-t) / 2, 1e-12));
  }
  SECTION("agreement with closed-form solutions and the affine map") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (NoiseKind kind : {NoiseKind::adc, NoiseKind::dpc, NoiseKind::pdc}) {
      for (int k = 0; k < 4; ++k) {
        const double t = 2 * u(rng);
        const double omega = 2 * u(rng) - 1;
        const Eigen::Vector3d r = random_unit(rng);
        const Eigen::Matrix2cd rho0 = density_from_bloch(r);
        const NoiseModel model = NoiseModel::of(kind, 1.0);
        const auto rho = integrate_master_equation(model, omega, t, rho0, 10000);
        CHECK((rho - oracle::lindblad_solution(kind, 1.0, omega, t, rho0)).cwiseAbs().maxCoeff() <
              1e-10);
        CHECK((bloch_vector(rho) - affine_apply(params_at(model, t), omega, t, r)).norm() < 1e-6);
      }
    }
  }
  SECTION("input validation") {
    CHECK_THROWS_AS(integrate_master_equation(NoiseModel::adc(1), 0, 1, plus, 0),
                    std::invalid_argument);
    Eigen::Matrix2cd bad = plus;
    bad(0, 1) = cd(0.5, 0.2);
    CHECK_THROWS_AS(integrate_master_equation(NoiseModel::adc(1), 0, 1, bad, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate_master_equation(NoiseModel::adc(1), 0, 1, 2.0 * plus, 10),
                    std::invalid_argument);
    const auto custom = NoiseModel::custom([](double) { return ChannelParams{}; });
    CHECK_THROWS_AS(integrate_master_equation(custom, 0, 1, plus, 10), std::invalid_argument);
  }
}

TEST_CASE("noise kind names", "[channel]") {
  for (NoiseKind kind : {NoiseKind::adc, NoiseKind::dpc, NoiseKind::pdc})
    CHECK(parse_noise_kind(to_string(kind)) == kind);
  CHECK_FALSE(parse_noise_kind("amplitude").has_value());
}
