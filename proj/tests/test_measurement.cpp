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

#include "ghzfreq/measurement.hpp"

using namespace ghzfreq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr NoiseKind kKinds[] = {NoiseKind::adc, NoiseKind::dpc, NoiseKind::pdc};
constexpr double kPi = std::numbers::pi;

Moments dense_moments(const DenseState& rho, const GhzObservable& obs) {
  const Eigen::MatrixXcd o = observable_matrix(obs);
  return {(rho.matrix * o).trace().real(), (rho.matrix * o * o).trace().real()};
}

}  // namespace

TEST_CASE("expectation moments", "[measurement]") {
  SECTION("noiseless corner eigenstate") {
    const auto spec = ProbeSpec::maximally_entangled(3);
    const auto ds = evolve_directsum(spec, ChannelParams{}, 0, 1);
    const auto m = expectation_moments(ds, observable_for(spec, 0.0));
    CHECK_THAT(m.mean, WithinAbs(1.0, 1e-15));
    CHECK_THAT(m.second_moment, WithinAbs(1.0, 1e-15));
  }
  SECTION("phase damping in quadrature") {
    const int n = 3;
    const double t = 0.4, omega = 0.9;
    const auto spec = ProbeSpec::maximally_entangled(n);
    const auto ds = evolve_directsum(spec, params_at(NoiseModel::pdc(1.0), t), omega, t);
    const auto m = expectation_moments(ds, observable_for(spec, ds.phase_total - kPi / 2));
    CHECK_THAT(m.mean, WithinAbs(0.0, 1e-15));
    CHECK_THAT(m.second_moment, WithinAbs(1.0, 1e-15));
  }
  SECTION("compact moments equal dense traces") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (NoiseKind kind : kKinds)
      for (int n = 1; n <= 4; ++n)
        for (int na = 0; na + n <= 5 && na <= 1; ++na)
          for (auto action : {ResidualAction::zero, ResidualAction::identity}) {
            const double t = 2 * u(rng);
            const auto spec = ProbeSpec::from_real(u(rng), n, na, u(rng));
            const auto p = params_at(NoiseModel::of(kind, 1.0), t);
            const double omega = 3 * u(rng);
            const auto obs = observable_for(spec, 6 * u(rng), action);
            const auto m = expectation_moments(evolve_directsum(spec, p, omega, t), obs);
            const auto d = dense_moments(evolve_dense(spec, p, omega, t), obs);
            CHECK_THAT(m.mean, WithinAbs(d.mean, 1e-12));
            CHECK_THAT(m.second_moment, WithinAbs(d.second_moment, 1e-12));
          }
  }
  CHECK_THROWS_AS(expectation_moments(evolve_directsum(ProbeSpec::maximally_entangled(2),
                                                       ChannelParams{}, 0, 1),
                                      GhzObservable{3, 0, ResidualAction::zero}),
                  std::invalid_argument);
}

TEST_CASE("observable matrix", "[measurement]") {
  const auto o = observable_matrix(GhzObservable{2, 0.3, ResidualAction::zero});
  CHECK((o - o.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(o(0, 3) - std::polar(1.0, -0.3)) < 1e-16);
  const Eigen::MatrixXcd sq = o * o;
  CHECK(std::abs(sq(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(sq(1, 1)) < 1e-15);
  const auto oi = observable_matrix(GhzObservable{2, 0.3, ResidualAction::identity});
  CHECK(oi(1, 1) == 1.0);
  CHECK(oi(2, 2) == 1.0);
}

TEST_CASE("error-propagation sensitivity", "[measurement]") {
  SECTION("noiseless optimum") {
    for (int n = 1; n <= 6; ++n) {
      const double t = 0.7;
      const auto spec = ProbeSpec::maximally_entangled(n);
      const auto ds = evolve_directsum(spec, ChannelParams{}, 1.3, t);
      const auto s = error_propagation_sensitivity(ds, observable_for(spec, ds.phase_total - kPi / 2), t);
      REQUIRE(s.has_value());
      CHECK_THAT(*s, WithinRel(1.0 / (t * n * n), 1e-14));
    }
  }
  SECTION("amplitude damping, ancilla-free, reaches t/F") {
    for (int n = 1; n <= 6; ++n) {
      const double t = 0.35, omega = 0.4;
      const auto spec = ProbeSpec::maximally_entangled(n);
      const auto model = NoiseModel::adc(1.0);
      const auto ds = evolve_directsum(spec, params_at(model, t), omega, t);
      const auto s = error_propagation_sensitivity(spec, model, t, omega,
                                                   observable_for(spec, ds.phase_total + kPi / 2));
      REQUIRE(s.has_value());
      CHECK_THAT(*s, WithinRel(t / qfi_ghz_closed(spec, model, t).f_freq, 1e-10));
    }
  }
  SECTION("depolarizing with an ancilla reaches t/F") {
    const double t = 0.5, omega = 1.7;
    const auto spec = ProbeSpec::maximally_entangled(2, 1);
    const auto model = NoiseModel::dpc(1.0);
    const auto ds = evolve_directsum(spec, params_at(model, t), omega, t);
    const auto s = error_propagation_sensitivity(spec, model, t, omega,
                                                 observable_for(spec, ds.phase_total - kPi / 2));
    REQUIRE(s.has_value());
    CHECK_THAT(*s, WithinRel(t / qfi_ancilla_closed(spec, model, t).f_freq, 1e-10));
  }
  SECTION("flat working point is reported as unusable") {
    const auto spec = ProbeSpec::maximally_entangled(3);
    const auto ds = evolve_directsum(spec, params_at(NoiseModel::adc(1.0), 0.2), 0.5, 0.2);
    const auto wp = evaluate_working_point(ds, observable_for(spec, ds.phase_total), 0.2);
    CHECK_FALSE(wp.sensitivity.has_value());
    CHECK(std::abs(wp.slope) < 1e-12);
    CHECK_THROWS_AS(evaluate_working_point(ds, observable_for(spec, 0), 0.0), std::invalid_argument);
  }
}

TEST_CASE("saturation check", "[measurement]") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (NoiseKind kind : kKinds)
    for (int n = 1; n <= 4; ++n)
      for (int na = 0; na <= 1; ++na)
        for (int draw = 0; draw < 4; ++draw) {
          const double t = 0.01 + 1.49 * u(rng);
          const double omega = 2 * kPi * u(rng) / t;
          const auto rep = saturation_check(ProbeSpec::maximally_entangled(n, na),
                                            NoiseModel::of(kind, 1.0), t, omega);
          CHECK(rep.is_saturating);
          CHECK(std::abs(rep.gap) <= 1e-8);
          CHECK(rep.working_point_offset <= 1e-6);
          CHECK(rep.best_delta >= 0.0);
          CHECK(rep.best_delta < 2 * kPi);
        }

  SECTION("noiseless gap vanishes") {
    const auto rep = saturation_check(ProbeSpec::maximally_entangled(3), NoiseModel::pdc(0.0), 0.6, 0.0);
    CHECK(std::abs(rep.gap) <= 1e-15);
  }
  SECTION("compact-state overload uses the Bloch bound") {
    const auto spec = ProbeSpec::from_real(0.4, 3, 1);
    const auto ds = evolve_directsum(spec, params_at(NoiseModel::adc(1.0), 0.3), 0.2, 0.3);
    const auto rep = saturation_check(ds, 0.3);
    CHECK(rep.is_saturating);
    CHECK_THAT(rep.qcrb, WithinRel(0.3 / qfi_ancilla_closed(spec, NoiseModel::adc(1.0), 0.3).f_freq, 1e-12));
  }
  SECTION("off-optimum working points are worse, extremum is flat") {
    const auto spec = ProbeSpec::maximally_entangled(2);
    const auto model = NoiseModel::adc(1.0);
    const double t = 0.4;
    const auto ds = evolve_directsum(spec, params_at(model, t), 0, t);
    const double bound = t / qfi_ghz_closed(spec, model, t).f_freq;
    const double best = ds.phase_total - kPi / 2;
    const auto off = error_propagation_sensitivity(ds, observable_for(spec, best + kPi / 4), t);
    REQUIRE(off.has_value());
    CHECK(*off > bound * (1 + 1e-3));
    CHECK(std::isfinite(*off));
    CHECK_FALSE(error_propagation_sensitivity(ds, observable_for(spec, best + kPi / 2), t).has_value());
  }
  SECTION("identity on the residual does not saturate once it is populated") {
    const auto rep = saturation_check(ProbeSpec::maximally_entangled(3), NoiseModel::adc(1.0), 0.5,
                                      0.0, 2048, ResidualAction::identity);
    CHECK_FALSE(rep.is_saturating);
    CHECK(rep.gap > 1e-3);
    const auto pdc = saturation_check(ProbeSpec::maximally_entangled(3), NoiseModel::pdc(1.0), 0.5,
                                      0.0, 2048, ResidualAction::identity);
    CHECK(pdc.is_saturating);
  }
}

TEST_CASE("variance is nonnegative and the signal has period 2 pi / N", "[measurement][property]") {
  for (NoiseKind kind : kKinds)
    for (int n = 1; n <= 5; ++n) {
      const double t = 0.6;
      const auto spec = ProbeSpec::from_real(0.45, n);
      const auto p = params_at(NoiseModel::of(kind, 1.0), t);
      const auto obs = observable_for(spec, 0.3);
      for (int k = 0; k < 32; ++k) {
        const double angle = 2 * kPi * k / 32;
        const auto m = expectation_moments(evolve_directsum(spec, p, angle / t, t), obs);
        CHECK(m.variance() >= -1e-15);
        const auto shifted =
            expectation_moments(evolve_directsum(spec, p, (angle + 2 * kPi / n) / t, t), obs);
        CHECK_THAT(shifted.mean, WithinAbs(m.mean, 1e-12));
      }
    }
}
