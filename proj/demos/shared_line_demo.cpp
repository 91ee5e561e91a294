// Copyright 2026 The sepulse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Calibrates a Gaussian and a selective-excitation X90 on Q1 of a three-qubit
// shared line and prints how much each disturbs its neighbours over 32 gates.

#include <algorithm>
#include <cstdio>

#include "sepulse/sepulse.hpp"

int main() {
  using namespace sepulse;
  using namespace sepulse::units;

  const QubitSpec q0{"Q0", ghz(8.895), mhz(-411), 3, us(25), us(21)};
  const QubitSpec q1{"Q1", ghz(8.818), mhz(-433), 3, us(18), us(17)};
  const QubitSpec q2{"Q2", ghz(8.792), mhz(-413), 3, us(18), us(18)};
  const SharedLineSystem line{{q0, q1, q2}, 1, {}};

  for (Family family : {Family::Gaussian, Family::SepSym}) {
    const auto profile = family_profile(family, line.target(), line.nontargets(), mhz(25));
    const auto gate = calibrate_amplitude(line, profile, ns(40), ns(0.5), kPi / 2);
    std::printf("%-9s A = %.6g, rotation = %.9f rad\n", to_string(family).c_str(), gate.profile.amplitude,
                gate.rotation_angle);
    for (const auto& series : repeated_gate_scan(line, gate, 32)) {
      const double worst = *std::min_element(series.p_g.begin(), series.p_g.end());
      std::printf("  %s: min P_g over 32 gates = %.4f\n", series.label.c_str(), worst);
    }
  }
  return 0;
}
