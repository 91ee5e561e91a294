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
 * @file sweeps.hpp
 * @brief Parameter sweeps over pulse families: excitation maps over
 * (duration, detuning), leakage versus spectral width, and DRAG scans.
 */

#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sepulse/dynamics.hpp"
#include "sepulse/error.hpp"
#include "sepulse/pulse_synthesis.hpp"
#include "sepulse/system.hpp"
#include "sepulse/units.hpp"

namespace sepulse {

enum class Family { Gaussian, SepAsym, SepSym };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::Gaussian: return "gaussian";
    case Family::SepAsym: return "sep-asym";
    case Family::SepSym: return "sep-sym";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  if (s == "gaussian") return Family::Gaussian;
  if (s == "sep-asym" || s == "asym") return Family::SepAsym;
  if (s == "sep-sym" || s == "sep" || s == "sym") return Family::SepSym;
  fail(ErrorKind::ConfigError, "unknown pulse family '" + s + "' (expected gaussian, sep-asym or sep-sym)");
}

/// Profile of the given family: Gaussian ignores the non-targets.
inline FrequencyProfile family_profile(Family f, const QubitSpec& target, const std::vector<QubitSpec>& nontargets,
                                       double sigma, double delta = 0.0) {
  if (f == Family::Gaussian) return build_profile(target, {}, sigma, delta, Symmetry::Symmetric);
  return build_profile(target, nontargets, sigma, delta, f == Family::SepSym ? Symmetry::Symmetric : Symmetry::Asymmetric);
}

/// n evenly spaced points including both ends.
inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  if (n <= 0) return v;
  if (n == 1) return {a};
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

struct ExcitationMap {
  Family family = Family::Gaussian;
  std::vector<double> durations;   // s
  std::vector<double> detunings;   // rad/s, non-target minus target
  std::vector<double> pe_target;   // row-major: durations x detunings
  std::vector<double> pe_nontarget;
  double dt = 0.0;

  std::size_t index(std::size_t i, std::size_t j) const { return i * detunings.size() + j; }
};

/// Target at zero detuning, one non-target at each detuning, sigma = 2 pi / T,
/// area pi/2. SEP cells with zero detuning are NaN.
inline ExcitationMap excitation_map(const QubitSpec& target, const QubitSpec& nontarget, Family family,
                                    const std::vector<double>& durations, const std::vector<double>& detunings,
                                    double dt = units::ns(0.5), double angle = units::kPi / 2) {
  if (durations.empty() || detunings.empty()) fail(ErrorKind::InvalidGrid, "sweep ranges must be nonempty");
  ExcitationMap map;
  map.family = family;
  map.durations = durations;
  map.detunings = detunings;
  map.dt = dt;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double t : durations) {
    for (double d : detunings) {
      if (family != Family::Gaussian && d == 0.0) {
        map.pe_target.push_back(nan);
        map.pe_nontarget.push_back(nan);
        continue;
      }
      QubitSpec nt = nontarget;
      nt.frequency = target.frequency + d;
      const auto profile = family_profile(family, target, {nt}, units::kTwoPi / t);
      const auto pulse = synthesize_with_area(profile, t, dt, angle);
      const Matrix u0 = propagator(target, 1.0, pulse.waveform, target.frequency);
      const Matrix u1 = propagator(nt, 1.0, pulse.waveform, target.frequency);
      map.pe_target.push_back(std::norm(u0(1, 0)));
      map.pe_nontarget.push_back(std::norm(u1(1, 0)));
    }
  }
  return map;
}

struct LeakagePoint {
  double sigma = 0.0;
  double sx_start = 0.0;
  double sx_end = 0.0;
  double pe = 0.0;  // non-target
  double pf = 0.0;
};

/// Non-target excitation and leakage versus sigma at fixed T.
inline std::vector<LeakagePoint> leakage_scan(const QubitSpec& target, const QubitSpec& nontarget, Family family,
                                              const std::vector<double>& sigmas, double duration,
                                              double dt = units::ns(0.5), double angle = units::kPi / 2) {
  if (nontarget.levels != 3) fail(ErrorKind::InvalidSystem, "leakage scan needs a three-level non-target");
  std::vector<LeakagePoint> out;
  for (double sigma : sigmas) {
    const auto pulse = synthesize_with_area(family_profile(family, target, {nontarget}, sigma), duration, dt, angle);
    const auto edges = discontinuity_metric(pulse.waveform);
    const Matrix u = propagator(nontarget, 1.0, pulse.waveform, target.frequency);
    out.push_back({sigma, edges.start, edges.end, std::norm(u(1, 0)), std::norm(u(2, 0))});
  }
  return out;
}

struct DragPoint {
  double lambda = 0.0;
  double target_pe = 0.0;
  double target_pf = 0.0;
  double nontarget_pe = 0.0;
  double nontarget_pf = 0.0;

  /// Population left anywhere it should not be: target leakage plus any non-target excitation.
  double unwanted() const { return target_pf + nontarget_pe + nontarget_pf; }
};

struct DragScan {
  std::vector<DragPoint> points;
  std::size_t best = 0;  // argmin of unwanted()
  const DragPoint& optimum() const { return points.at(best); }
};

/// DRAG-augmented pulses of one family for each lambda; both qubits three-level.
inline DragScan drag_scan(const QubitSpec& target, const QubitSpec& nontarget, Family family, double duration,
                          double sigma, const std::vector<double>& lambdas, double dt = units::ns(0.5),
                          double angle = units::kPi / 2) {
  if (target.levels != 3 || nontarget.levels != 3)
    fail(ErrorKind::InvalidSystem, "DRAG scan needs three-level qubits");
  if (lambdas.empty()) fail(ErrorKind::InvalidGrid, "lambda range must be nonempty");
  const auto pulse = synthesize_with_area(family_profile(family, target, {nontarget}, sigma), duration, dt, angle);
  DragScan scan;
  for (double lambda : lambdas) {
    const Waveform w = drag_augment(pulse.waveform, target.anharmonicity, lambda);
    const Matrix u0 = propagator(target, 1.0, w, target.frequency);
    const Matrix u1 = propagator(nontarget, 1.0, w, target.frequency);
    scan.points.push_back({lambda, std::norm(u0(1, 0)), std::norm(u0(2, 0)), std::norm(u1(1, 0)), std::norm(u1(2, 0))});
    if (scan.points.back().unwanted() < scan.points[scan.best].unwanted()) scan.best = scan.points.size() - 1;
  }
  return scan;
}

}  // namespace sepulse
