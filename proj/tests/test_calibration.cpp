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

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sepulse/calibration.hpp"

using namespace sepulse;
using namespace sepulse::units;

namespace {

QubitSpec qubit(const std::string& label, double f_ghz) { return {label, ghz(f_ghz), 0.0, 2, {}, {}}; }

SharedLineSystem table_line(std::size_t target) {
  return {{qubit("Q0", 8.895), qubit("Q1", 8.818), qubit("Q2", 8.792)}, target, {}};
}

SharedLineSystem lone_qubit() { return {{qubit("Q", 6.0)}, 0, {}}; }

FrequencyProfile gaussian(const QubitSpec& q) { return build_profile(q, {}, mhz(25), 0.0, Symmetry::Symmetric); }

}  // namespace

TEST(RotationAngle, KnownGates) {
  const auto x = rotation_angle_of(Matrix(oracle::pauli_x() * cplx(0, -1)));
  EXPECT_NEAR(x.angle, kPi, 1e-12);
  EXPECT_NEAR(x.axis(0), 1.0, 1e-12);

  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = std::polar(1.0, -0.15);
  z(1, 1) = std::polar(1.0, 0.15);
  const auto zr = rotation_angle_of(z * std::polar(1.0, 0.4));
  EXPECT_NEAR(zr.angle, 0.3, 1e-12);
  EXPECT_NEAR(zr.axis(2), 1.0, 1e-12);
  EXPECT_NEAR(zr.global_phase, 0.4, 1e-12);

  EXPECT_NEAR(rotation_angle_of(Matrix::Identity(2, 2)).angle, 0.0, 1e-12);
  EXPECT_THROW(rotation_angle_of(Matrix::Identity(3, 3)), Error);
}

TEST(RotationAngle, RecoversAxisAngleOfMatrixExponential) {
  const Eigen::Vector3d n = Eigen::Vector3d(0.3, -0.5, 0.8).normalized();
  for (double theta : {0.1, 1.0, kPi / 2, 2.9}) {
    const oracle::Mat gen = n(0) * oracle::pauli_x() + n(1) * oracle::pauli_y() + n(2) * oracle::pauli_z();
    const Matrix u = (cplx(0, -0.5 * theta) * gen).exp();
    const auto r = rotation_angle_of(u);
    EXPECT_NEAR(r.angle, theta, 1e-10);
    EXPECT_LT((r.axis - n).norm(), 1e-9);
  }
}

TEST(CalibrateAmplitude, ResonantGaussianFollowsAreaRule) {
  const auto line = lone_qubit();
  const auto p = gaussian(line.target());
  for (double goal : {kPi / 2, kPi}) {
    const auto gate = calibrate_amplitude(line, p, ns(40), ns(0.5), goal);
    const auto area_rule = synthesize_with_area(p, ns(40), ns(0.5), goal);
    EXPECT_NEAR(gate.profile.amplitude / area_rule.profile.amplitude, 1.0, 1e-3);
    EXPECT_NEAR(gate.rotation_angle, goal, 1e-9);
    EXPECT_NEAR(gate.residual_phase_per_gate, 0.0, 1e-9);
  }
}

TEST(CalibrateAmplitude, IsAFixedPoint) {
  const auto line = table_line(1);
  const auto p = build_profile(line.target(), line.nontargets(), mhz(25), mhz(-1.767), Symmetry::Symmetric);
  const auto first = calibrate_amplitude(line, p, ns(40), ns(0.5), kPi / 2);
  const auto second = calibrate_amplitude(line, first.profile, ns(40), ns(0.5), kPi / 2);
  EXPECT_NEAR(second.profile.amplitude / first.profile.amplitude, 1.0, 1e-9);
  EXPECT_NEAR(first.rotation_angle, kPi / 2, 1e-9);
}

TEST(CalibrateAmplitude, NoBracket) {
  const auto line = lone_qubit();
  const auto p = gaussian(line.target());
  for (double goal : {0.0, -0.2, 3.5}) {
    try {
      calibrate_amplitude(line, p, ns(40), ns(0.5), goal);
      FAIL() << goal;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::NoBracket);
    }
  }
  AmplitudeOptions narrow;
  narrow.max_scale = 0.5;
  try {
    calibrate_amplitude(line, p, ns(40), ns(0.5), kPi / 2, narrow);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoBracket);
  }
}

TEST(RepeatedGate, ExactPatternForIdealRotation) {
  const auto line = lone_qubit();
  const auto gate = calibrate_amplitude(line, gaussian(line.target()), ns(40), ns(0.5), kPi / 2);
  EXPECT_LT(repeated_gate_objective(line, gate, 32), 1e-8);
  const auto scan = repeated_gate_scan(line, gate, 8);
  ASSERT_EQ(scan.size(), 1u);
  ASSERT_EQ(scan[0].p_g.size(), 9u);
  for (int n = 0; n <= 8; ++n) EXPECT_NEAR(scan[0].p_g[n], std::pow(std::cos(n * kPi / 4), 2), 1e-9) << n;
}

TEST(RepeatedGate, DeltaCalibrationDoesNotWorsenObjective) {
  const auto line = table_line(1);
  const auto p = build_profile(line.target(), line.nontargets(), mhz(25), 0.0, Symmetry::Symmetric);
  auto start = calibrate_amplitude(line, p, ns(40), ns(0.5), kPi / 2);
  start.objective = repeated_gate_objective(line, start, 32);
  DeltaOptions options;
  options.points = 21;
  options.refine_iterations = 20;
  const auto tuned = calibrate_delta(line, start, options);
  EXPECT_LE(tuned.objective, start.objective);
  EXPECT_LE(std::abs(tuned.profile.delta), mhz(10) + 1e-6);
  EXPECT_NEAR(tuned.rotation_angle, kPi / 2, 1e-9);
  EXPECT_NEAR(repeated_gate_objective(line, tuned, 32), tuned.objective, 1e-12);
}

TEST(RepeatedGate, ScanShapesAndSeeds) {
  SharedLineSystem line = table_line(1);
  const auto p = build_profile(line.target(), line.nontargets(), mhz(25), 0.0, Symmetry::Symmetric);
  const auto gate = calibrate_amplitude(line, p, ns(40), ns(0.5), kPi / 2);
  const auto scan = repeated_gate_scan(line, gate, 4);
  ASSERT_EQ(scan.size(), 3u);
  for (const auto& s : scan) EXPECT_EQ(s.p_g.front(), 1.0);
  EXPECT_THROW(repeated_gate_scan(line, gate, 0), Error);

  const auto a = repeated_gate_scan(line, gate, 6, Noise::Unitary, 200, 17);
  const auto b = repeated_gate_scan(line, gate, 6, Noise::Unitary, 200, 17);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a[i].p_g, b[i].p_g);

  for (auto& q : line.qubits) {
    q.t1 = us(20);
    q.t2_echo = us(20);
  }
  const auto open = repeated_gate_scan(line, gate, 4, Noise::Open);
  EXPECT_NEAR(open[1].p_g[4], scan[1].p_g[4], 0.02);
  EXPECT_LT(open[1].p_g[4], scan[1].p_g[4]);
}
