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

/**
 * @file calibration.hpp
 * @brief Amplitude and carrier-shift calibration of X(theta) gates.
 *
 * The amplitude loop scales an area-normalized waveform until the target
 * propagator rotates by the requested angle. The shift loop scans the
 * Gaussian centre offset delta, re-calibrating the amplitude at every point,
 * and keeps the delta whose repeated-gate population pattern is closest to
 * the ideal cos^2(n theta / 2).
 */

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "sepulse/dynamics.hpp"
#include "sepulse/pulse_synthesis.hpp"
#include "sepulse/units.hpp"

namespace sepulse {

struct AxisAngle {
  double angle = 0.0;  // [0, pi]
  Eigen::Vector3d axis{1.0, 0.0, 0.0};
  double global_phase = 0.0;
};

/// Decomposes a 2x2 unitary as e^{i phi} exp(-i (theta/2) n.sigma) with
/// theta in [0, pi]. The axis sign is canonicalized so that its largest
/// component is positive; the identity reports the +x axis.
inline AxisAngle rotation_angle_of(const Matrix& u) {
  if (u.rows() != 2 || u.cols() != 2) fail(ErrorKind::NonUnitary, "expected a 2x2 propagator");
  if (detail::unitarity_error(u) > 1e-8) fail(ErrorKind::NonUnitary, "propagator is not unitary");

  AxisAngle out;
  double phi = 0.5 * std::arg(u.determinant());
  Matrix v = u * std::polar(1.0, -phi);
  // v = c I - i s (n . sigma); c = Re tr(v) / 2 and s n_k = Re(i tr(sigma_k v)) / 2.
  double c = 0.5 * v.trace().real();
  if (c < 0.0) {
    v = -v;
    c = -c;
    phi += units::kPi;
  }
  const cplx i{0.0, 1.0};
  Eigen::Vector3d sn;
  sn(0) = 0.5 * (i * (v(1, 0) + v(0, 1))).real();
  sn(1) = 0.5 * (v(1, 0) - v(0, 1)).real();
  sn(2) = 0.5 * (i * (v(0, 0) - v(1, 1))).real();
  const double s = sn.norm();
  out.angle = 2.0 * std::atan2(s, c);
  out.global_phase = std::remainder(phi, units::kTwoPi);
  if (s > 1e-14) {
    out.axis = sn / s;
    Eigen::Index big;
    out.axis.cwiseAbs().maxCoeff(&big);
    if (out.axis(big) < 0.0) out.axis = -out.axis;
  }
  return out;
}

/// Closest unitary (polar factor) to the {g, e} block of a propagator.
/// Rotation angle in [0, 2 pi] with the global phase taken on the
/// (-pi/2, pi/2] branch, so the angle stays continuous through pi while the
/// gate's phase drifts little from zero.
inline double unfolded_angle_of(const Matrix& u) {
  if (u.rows() != 2 || u.cols() != 2) fail(ErrorKind::NonUnitary, "expected a 2x2 propagator");
  const double phi = 0.5 * std::arg(u.determinant());
  const double c = 0.5 * (u.trace() * std::polar(1.0, -phi)).real();
  return 2.0 * std::acos(std::clamp(c, -1.0, 1.0));
}

inline Matrix qubit_subspace(const Matrix& u) {
  const Matrix block = u.topLeftCorner(2, 2);
  Eigen::JacobiSVD<Matrix> svd(block, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

struct CalibratedGate {
  FrequencyProfile profile;
  Waveform waveform;
  std::string target_label;
  double duration = 0.0;  // s
  double dt = 0.0;        // s
  double goal_angle = units::kPi / 2.0;
  double rotation_angle = 0.0;
  /// z-component of the rotation vector, i.e. phase drift per application.
  double residual_phase_per_gate = 0.0;
  /// Repeated-gate pattern deviation; NaN until calibrate_delta runs.
  double objective = std::numeric_limits<double>::quiet_NaN();
};

struct AmplitudeOptions {
  /// Search range for the multiplier on the area-normalized waveform.
  double max_scale = 3.0;
  int scan_points = 24;
  double tolerance = 1e-11;  // rad
  int max_iterations = 100;
};

namespace detail {

inline AxisAngle target_rotation(const SharedLineSystem& system, const Waveform& w) {
  const auto& q = system.target();
  return rotation_angle_of(qubit_subspace(propagator(q, system.coupling(system.target_index), w, w.carrier_freq)));
}

}  // namespace detail

/// Root-finds the profile amplitude so the target rotates by `goal`.
inline CalibratedGate calibrate_amplitude(const SharedLineSystem& system, const FrequencyProfile& profile,
                                          double duration, double dt, double goal,
                                          const AmplitudeOptions& options = {}) {
  system.validate();
  if (!(goal > 0.0) || goal > units::kPi) fail(ErrorKind::NoBracket, "goal angle must lie in (0, pi]");

  const auto ref = synthesize_with_area(profile, duration, dt, goal);
  const auto& q = system.target();
  auto angle_at = [&](double c) {
    const Waveform w = ref.waveform.scaled(c);
    return unfolded_angle_of(qubit_subspace(propagator(q, system.coupling(system.target_index), w, w.carrier_freq)));
  };

  // Coarse monotone scan for the first crossing.
  int evaluations = 0;
  double lo = 0.0, f_lo = -goal, hi = 0.0, f_hi = 0.0, a_lo = 0.0;
  bool bracketed = false;
  double previous = 0.0;
  for (int k = 1; k <= options.scan_points; ++k) {
    const double c = options.max_scale * k / options.scan_points;
    const double a = angle_at(c);
    ++evaluations;
    if (a <= previous) break;
    if (a >= goal) {
      hi = c;
      f_hi = a - goal;
      bracketed = true;
      break;
    }
    lo = c;
    f_lo = a - goal;
    a_lo = a;
    previous = a;
  }
  if (!bracketed) fail(ErrorKind::NoBracket, "rotation angle does not cross the goal within the amplitude range");

  // Bracketed secant (Illinois) refinement.
  double c = hi, f = f_hi;
  int side = 0;
  while (std::abs(f) > options.tolerance && hi - lo > 1e-15 * hi) {
    if (++evaluations > options.max_iterations) fail(ErrorKind::NonConvergence, "amplitude calibration did not converge");
    c = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(c > lo && c < hi)) c = 0.5 * (lo + hi);
    const double a = angle_at(c);
    f = a - goal;
    if (f > 0.0) {
      hi = c;
      f_hi = f;
      if (side == 1) f_lo *= 0.5;
      side = 1;
    } else {
      if (a < a_lo - 1e-12) fail(ErrorKind::NonConvergence, "rotation angle is not monotone in A");
      lo = c;
      a_lo = a;
      f_lo = f;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    }
  }

  CalibratedGate gate;
  gate.profile = ref.profile;
  gate.profile.amplitude *= c;
  gate.waveform = ref.waveform.scaled(c);
  gate.waveform.scale = gate.profile.amplitude;
  gate.target_label = system.target().label;
  gate.duration = duration;
  gate.dt = dt;
  gate.goal_angle = goal;
  const auto rot = detail::target_rotation(system, gate.waveform);
  gate.rotation_angle = rot.angle;
  gate.residual_phase_per_gate = rot.angle * rot.axis(2);
  return gate;
}

/// P_g of the target after n = 1..n_max applications, compared to cos^2(n theta/2).
inline double repeated_gate_objective(const SharedLineSystem& system, const CalibratedGate& gate, int n_max) {
  const auto& q = system.target();
  const Matrix u = propagator(q, system.coupling(system.target_index), gate.waveform, gate.waveform.carrier_freq);
  Vector psi = ground_state(q.levels);
  double sum = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    psi = u * psi;
    const double ideal = std::pow(std::cos(0.5 * n * gate.goal_angle), 2);
    const double dev = std::norm(psi(0)) - ideal;
    sum += dev * dev;
  }
  return std::sqrt(sum);
}

struct DeltaOptions {
  double half_window = units::mhz(10.0);
  int points = 81;
  int n_max = 32;
  int refine_iterations = 40;
  AmplitudeOptions amplitude;
};

/// Scans the Gaussian shift delta (A re-calibrated at every point), then
/// golden-section refines around the best grid cell.
inline CalibratedGate calibrate_delta(const SharedLineSystem& system, const CalibratedGate& gate,
                                      const DeltaOptions& options = {}) {
  auto evaluate = [&](double delta) -> std::pair<double, CalibratedGate> {
    FrequencyProfile p = gate.profile;
    p.delta = delta;
    try {
      auto g = calibrate_amplitude(system, p, gate.duration, gate.dt, gate.goal_angle, options.amplitude);
      g.objective = repeated_gate_objective(system, g, options.n_max);
      return {g.objective, std::move(g)};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoBracket && e.kind() != ErrorKind::NonConvergence) throw;
      return {std::numeric_limits<double>::infinity(), CalibratedGate{}};
    }
  };

  const int n = std::max(options.points, 1);
  const double step = n > 1 ? 2.0 * options.half_window / (n - 1) : 0.0;
  double best_value = std::numeric_limits<double>::infinity();
  int best_index = -1;
  CalibratedGate best_gate;
  for (int i = 0; i < n; ++i) {
    const double delta = n > 1 ? -options.half_window + step * i : 0.0;
    auto [value, g] = evaluate(delta);
    const bool better = value < best_value ||
                        (value == best_value && best_index >= 0 &&
                         std::abs(delta) < std::abs(-options.half_window + step * best_index));
    if (better) {
      best_value = value;
      best_index = i;
      best_gate = std::move(g);
    }
  }
  if (best_index < 0) fail(ErrorKind::NoBracket, "no delta in the window admits an amplitude calibration");

  if (n > 1 && options.refine_iterations > 0) {
    const double centre = -options.half_window + step * best_index;
    double a = centre - step, b = centre + step;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    auto e1 = evaluate(x1), e2 = evaluate(x2);
    for (int it = 0; it < options.refine_iterations; ++it) {
      if (e1.first <= e2.first) {
        b = x2;
        x2 = x1;
        e2 = std::move(e1);
        x1 = b - inv_phi * (b - a);
        e1 = evaluate(x1);
      } else {
        a = x1;
        x1 = x2;
        e1 = std::move(e2);
        x2 = a + inv_phi * (b - a);
        e2 = evaluate(x2);
      }
    }
    auto& cand = e1.first <= e2.first ? e1 : e2;
    if (cand.first < best_value) {
      best_value = cand.first;
      best_gate = std::move(cand.second);
    }
  }
  return best_gate;
}

enum class Noise { Unitary, Open };

struct RabiSeries {
  std::string label;
  std::vector<double> p_g;  // index n = 0..n_max
};

/// Applies the target gate n = 0..n_max times and records every qubit's P_g.
inline std::vector<RabiSeries> repeated_gate_scan(const SharedLineSystem& system, const CalibratedGate& gate, int n_max,
                                                  Noise noise = Noise::Unitary, int shots = 0,
                                                  std::uint64_t seed = 0) {
  system.validate();
  if (n_max < 1) fail(ErrorKind::InvalidGrid, "n_max must be at least 1");
  std::mt19937_64 rng(seed);
  std::vector<RabiSeries> out;
  for (std::size_t i = 0; i < system.qubits.size(); ++i) {
    const auto& q = system.qubits[i];
    RabiSeries series{q.label, {}};
    series.p_g.reserve(n_max + 1);
    const int d = q.levels;
    if (noise == Noise::Unitary) {
      const Matrix u = propagator(q, system.coupling(i), gate.waveform, gate.waveform.carrier_freq);
      Vector psi = ground_state(d);
      for (int n = 0; n <= n_max; ++n) {
        if (n > 0) psi = u * psi;
        series.p_g.push_back(sample_probability(std::norm(psi(0)), shots, rng));
      }
    } else {
      const Matrix channel = pulse_channel(q, system.coupling(i), gate.waveform, gate.waveform.carrier_freq);
      Vector rho = Vector::Zero(d * d);
      rho(0) = 1.0;
      for (int n = 0; n <= n_max; ++n) {
        if (n > 0) rho = channel * rho;
        series.p_g.push_back(sample_probability(std::clamp(rho(0).real(), 0.0, 1.0), shots, rng));
      }
    }
    out.push_back(std::move(series));
  }
  return out;
}

}  // namespace sepulse
