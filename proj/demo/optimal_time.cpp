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

// Best interrogation time and sensitivity ratio for GHZ probes under
// amplitude damping, with and without one ancilla.

#include <cstdio>

#include "ghzfreq/ghzfreq.hpp"

int main() {
  using namespace ghzfreq;
  const NoiseModel model = NoiseModel::adc(1.0);

  std::printf("%3s %14s %14s %10s %10s\n", "N", "t_opt free", "t_opt anc", "R free", "R anc");
  for (int n : {1, 2, 4, 8, 16}) {
    const auto unc = maximize_f_over_t(StrategyKind::uncorrelated,
                                       canonical_probe(StrategyKind::uncorrelated, n), model);
    const auto free = maximize_f_over_t(StrategyKind::ghz_free,
                                        canonical_probe(StrategyKind::ghz_free, n), model);
    const auto anc = maximize_f_over_t(StrategyKind::ghz_ancilla,
                                       canonical_probe(StrategyKind::ghz_ancilla, n), model);
    std::printf("%3d %14.8f %14.8f %10.6f %10.6f\n", n, free.t_opt, anc.t_opt,
                unc.f_over_t_max / free.f_over_t_max, unc.f_over_t_max / anc.f_over_t_max);
  }

  // The corner-coherence observable reaches the bound at the best time.
  const ProbeSpec probe = ProbeSpec::maximally_entangled(3);
  const double t = maximize_f_over_t(StrategyKind::ghz_free, probe, model).t_opt;
  const SaturationReport rep = saturation_check(probe, model, t, 0.25);
  std::printf("N=3 at t_opt: QCRB %.10g, measured %.10g, delta %.6f\n", rep.qcrb,
              rep.best_sensitivity, rep.best_delta);
  return rep.is_saturating ? 0 : 1;
}
