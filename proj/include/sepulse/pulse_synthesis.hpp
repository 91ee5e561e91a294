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
 * @file pulse_synthesis.hpp
 * @brief Selective-excitation frequency profiles and their time-domain waveforms.
 *
 * A profile is a Gaussian spectral envelope around the drive frequency
 * multiplied by a polynomial whose roots sit at the non-target qubit
 * frequencies:
 *
 *   S(w) = A * prod_j (w - w_j) [ (w - 2 w_d + w_j) ] * exp(-(w - w_d - delta)^2 / 2 sigma^2)
 *
 * where the bracketed mirror factor is present only for symmetric profiles.
 * The baseband waveform is the inverse transform
 *
 *   s(t) = (1/2pi) * Integral S(w_d + x) exp(i x (t - T/2)) dx
 *
 * sampled at bin centres t_k = (k + 1/2) dt and hard-truncated to [0, T].
 * With this sign choice a drive s(t) excites a qubit at detuning D in
 * proportion to S(w_d + D) under the Hamiltonian in dynamics.hpp.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "sepulse/error.hpp"
#include "sepulse/system.hpp"
#include "sepulse/units.hpp"

namespace sepulse {

enum class Symmetry { Asymmetric, Symmetric };
enum class BaseEnvelope { Gaussian };

struct FrequencyProfile {
  double drive_freq = 0.0;  // rad/s
  double sigma = 0.0;       // rad/s
  double delta = 0.0;       // rad/s, shift of the Gaussian centre only
  double amplitude = 1.0;
  std::vector<double> nulls;  // absolute non-target frequencies, rad/s
  Symmetry symmetry = Symmetry::Symmetric;
  BaseEnvelope base_envelope = BaseEnvelope::Gaussian;

  void validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) fail(ErrorKind::InvalidWidth, "sigma must be positive");
    for (double w : nulls)
      if (w == drive_freq) fail(ErrorKind::DegenerateNull, "null placed at the drive frequency");
  }

  /// Non-target detunings relative to the carrier, w_j - w_d.
  std::vector<double> null_offsets() const {
    std::vector<double> out;
    out.reserve(nulls.size());
    for (double w : nulls) out.push_back(w - drive_freq);
    return out;
  }

  /// Every root of the polynomial prefactor, in absolute frequency.
  std::vector<double> all_nulls() const {
    std::vector<double> out = nulls;
    if (symmetry == Symmetry::Symmetric)
      for (double w : nulls) out.push_back(2.0 * drive_freq - w);
    return out;
  }

  /// Profile relative to the carrier, S(w_d + x). Same closed form as
  /// evaluate_profile() but without the large-offset cancellation.
  double baseband(double x) const {
    double poly = 1.0;
    for (double w : nulls) {
      const double d = w - drive_freq;
      poly *= (x - d);
      if (symmetry == Symmetry::Symmetric) poly *= (x + d);
    }
    const double u = (x - delta) / sigma;
    return amplitude * poly * std::exp(-0.5 * u * u);
  }
};

/// Uniformly sampled complex baseband envelope; s_x = real, s_y = imag (rad/s).
struct Waveform {
  double dt = 0.0;
  std::vector<std::complex<double>> samples;
  double carrier_freq = 0.0;
  /// Product of all normalization factors applied since synthesis.
  double scale = 1.0;

  std::size_t size() const { return samples.size(); }
  double duration() const { return dt * static_cast<double>(samples.size()); }
  /// Sample k represents the piecewise-constant bin [k dt, (k+1) dt].
  double time_at(std::size_t k) const { return (static_cast<double>(k) + 0.5) * dt; }

  std::complex<double> area() const {
    std::complex<double> sum{0.0, 0.0};
    for (const auto& s : samples) sum += s;
    return sum * dt;
  }

  double max_abs_real() const {
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, std::abs(s.real()));
    return m;
  }
  double max_abs_imag() const {
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, std::abs(s.imag()));
    return m;
  }

  Waveform scaled(std::complex<double> factor) const {
    Waveform w = *this;
    for (auto& s : w.samples) s *= factor;
    return w;
  }
};

/// Target/non-target description of an SEP, or a plain Gaussian when
/// `nontargets` is empty.
inline FrequencyProfile build_profile(const QubitSpec& target, const std::vector<QubitSpec>& nontargets,
                                      double sigma, double delta, Symmetry symmetry) {
  FrequencyProfile p;
  p.drive_freq = target.frequency;
  p.sigma = sigma;
  p.delta = delta;
  p.amplitude = 1.0;
  p.symmetry = symmetry;
  for (const auto& q : nontargets) p.nulls.push_back(q.frequency);
  p.validate();
  return p;
}

/// S(w) at absolute angular frequency w. Exactly zero at every stored null
/// and, for symmetric profiles, at every mirror 2 w_d - w_j.
inline double evaluate_profile(const FrequencyProfile& profile, double omega) {
  double poly = 1.0;
  for (double w : profile.nulls) {
    poly *= (omega - w);
    if (profile.symmetry == Symmetry::Symmetric) poly *= (omega - (2.0 * profile.drive_freq - w));
  }
  const double u = (omega - profile.drive_freq - profile.delta) / profile.sigma;
  return profile.amplitude * poly * std::exp(-0.5 * u * u);
}

struct FrequencyGrid {
  double start = 0.0;  // rad/s
  double stop = 0.0;   // rad/s, inclusive
  double step = 0.0;   // rad/s

  std::size_t count() const {
    if (!(step > 0.0) || !(stop >= start)) return 0;
    return static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  }
  double at(std::size_t i) const { return start + step * static_cast<double>(i); }
};

/// Grid covering w_d +/- 8 sigma (plus the delta shift and every null) with 8192 intervals.
inline FrequencyGrid default_grid(const FrequencyProfile& profile) {
  double half = 8.0 * profile.sigma + std::abs(profile.delta);
  for (double w : profile.nulls) half = std::max(half, std::abs(w - profile.drive_freq) + 3.0 * profile.sigma);
  return {profile.drive_freq - half, profile.drive_freq + half, 2.0 * half / 8192.0};
}

/// Rescales A so that max |S| over the grid is exactly one.
inline FrequencyProfile peak_normalize(const FrequencyProfile& profile, const FrequencyGrid& grid) {
  const std::size_t n = grid.count();
  if (n == 0) fail(ErrorKind::EmptyGrid, "frequency grid has no points");
  const double lo = profile.drive_freq - 5.0 * profile.sigma;
  const double hi = profile.drive_freq + 5.0 * profile.sigma;
  if (grid.start > lo || grid.at(n - 1) < hi) fail(ErrorKind::InvalidGrid, "grid must span w_d +/- 5 sigma");

  FrequencyProfile unit = profile;
  unit.amplitude = 1.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) peak = std::max(peak, std::abs(unit.baseband(grid.at(i) - unit.drive_freq)));
  if (!(peak > 0.0)) fail(ErrorKind::EmptyGrid, "profile vanishes on the grid");

  FrequencyProfile out = profile;
  out.amplitude = (profile.amplitude < 0.0 ? -1.0 : 1.0) / peak;
  return out;
}

namespace detail {

// Quadrature half-width and point count for the inverse transform. The
// grid spans w_d +/- 8 sigma, widened to every null +/- 3 sigma and the
// Gaussian shift, with at least 4096 intervals and a spacing no coarser
// than 16 sigma / 4096.
struct TransformGrid {
  double half_width;
  std::size_t intervals;
};

inline TransformGrid transform_grid(const FrequencyProfile& p) {
  double half = 8.0 * p.sigma + std::abs(p.delta);
  for (double d : p.null_offsets()) half = std::max(half, std::abs(d) + 3.0 * p.sigma);
  const double max_step = 16.0 * p.sigma / 4096.0;
  const auto intervals = std::max<std::size_t>(4096, static_cast<std::size_t>(std::ceil(2.0 * half / max_step)));
  return {half, intervals};
}

}  // namespace detail

/// Time-domain envelope on t in [0, T] with the envelope centre at T/2.
/// Evaluates the continuous inverse transform by trapezoidal quadrature of
/// the analytic profile directly at each sample time.
inline Waveform synthesize(const FrequencyProfile& profile, double duration, double dt) {
  profile.validate();
  if (!(duration > 0.0) || !(dt > 0.0)) fail(ErrorKind::InvalidGrid, "duration and dt must be positive");
  const auto n = static_cast<std::size_t>(std::llround(duration / dt));
  if (n < 8) fail(ErrorKind::InvalidGrid, "duration must span at least 8 samples");

  Waveform w;
  w.dt = dt;
  w.carrier_freq = profile.drive_freq;
  w.samples.assign(n, {0.0, 0.0});

  const auto grid = detail::transform_grid(profile);
  const double dx = 2.0 * grid.half_width / static_cast<double>(grid.intervals);
  const double t_centre = 0.5 * dt * static_cast<double>(n);
  const double tau0 = 0.5 * dt - t_centre;

  // Accumulate sum_l S(x_l) exp(i x_l tau_k); the phasor for each x_l is
  // advanced across k by repeated multiplication.
  for (std::size_t l = 0; l <= grid.intervals; ++l) {
    const double x = -grid.half_width + dx * static_cast<double>(l);
    double weight = profile.baseband(x);
    if (l == 0 || l == grid.intervals) weight *= 0.5;
    if (weight == 0.0) continue;
    std::complex<double> phasor = std::polar(1.0, x * tau0);
    const std::complex<double> step = std::polar(1.0, x * dt);
    for (std::size_t k = 0; k < n; ++k) {
      w.samples[k] += weight * phasor;
      phasor *= step;
    }
  }
  const double norm = dx / units::kTwoPi;
  for (auto& s : w.samples) s *= norm;
  return w;
}

/// Forward transform of the sampled waveform at baseband offset x,
/// integral of s(t) exp(-i x (t - T/2)) dt, by the midpoint rule.
inline std::complex<double> spectrum_at(const Waveform& w, double x) {
  const double centre = 0.5 * w.duration();
  std::complex<double> sum{0.0, 0.0};
  for (std::size_t k = 0; k < w.size(); ++k) sum += w.samples[k] * std::polar(1.0, -x * (w.time_at(k) - centre));
  return sum * w.dt;
}

/// Scales the waveform so that Re(sum s dt) equals `angle`.
inline Waveform normalize_area(const Waveform& w, double angle) {
  const double re = w.area().real();
  if (!(std::abs(re) >= 1e-15)) fail(ErrorKind::ZeroArea, "waveform area is zero");
  const double factor = angle / re;
  Waveform out = w.scaled(factor);
  out.scale = w.scale * factor;
  return out;
}

/// Synthesis followed by area normalization; the returned profile carries
/// the amplitude that produces the returned waveform.
struct AreaNormalizedPulse {
  FrequencyProfile profile;
  Waveform waveform;
};

inline AreaNormalizedPulse synthesize_with_area(const FrequencyProfile& profile, double duration, double dt,
                                                double angle) {
  FrequencyProfile unit = profile;
  unit.amplitude = 1.0;
  auto w = normalize_area(synthesize(unit, duration, dt), angle);
  unit.amplitude = w.scale;
  return {unit, std::move(w)};
}

struct Discontinuity {
  double start = 0.0;
  double end = 0.0;
};

/// s_x at the first and last samples. Call on an area-normalized waveform.
inline Discontinuity discontinuity_metric(const Waveform& w) {
  if (w.samples.empty()) return {};
  return {w.samples.front().real(), w.samples.back().real()};
}

/// Adds lambda * (d s_x / dt) / alpha to s_y. Central differences inside,
/// one-sided at the two ends.
inline Waveform drag_augment(const Waveform& w, double anharmonicity, double lambda) {
  if (anharmonicity == 0.0) fail(ErrorKind::ZeroAnharmonicity, "DRAG needs a nonzero anharmonicity");
  Waveform out = w;
  const std::size_t n = w.size();
  if (n < 2 || lambda == 0.0) return out;
  for (std::size_t k = 0; k < n; ++k) {
    double deriv;
    if (k == 0)
      deriv = (w.samples[1].real() - w.samples[0].real()) / w.dt;
    else if (k == n - 1)
      deriv = (w.samples[n - 1].real() - w.samples[n - 2].real()) / w.dt;
    else
      deriv = (w.samples[k + 1].real() - w.samples[k - 1].real()) / (2.0 * w.dt);
    out.samples[k] += std::complex<double>(0.0, lambda * deriv / anharmonicity);
  }
  return out;
}

}  // namespace sepulse
