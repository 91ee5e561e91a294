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
 * @file benchmarking.hpp
 * @brief Single-qubit randomized benchmarking on the shared-line simulator.
 *
 * Cliffords are compiled to X90 pulses with virtual-Z frame updates. Every
 * physical pulse goes down the shared line, so non-target qubits receive
 * the same pulses (with the same emitted phase) as the target. Survival
 * P_g(L) of each qubit is fitted to A p^L + B.
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sepulse/calibration.hpp"
#include "sepulse/clifford.hpp"
#include "sepulse/dynamics.hpp"

namespace sepulse {

/// Average gate fidelity of a single-qubit depolarizing parameter.
inline double rb_fidelity(double p) { return 1.0 - (1.0 - p) / 2.0; }
/// Steady excitation per Clifford, B (1 - p) / 2.
inline double excitation_rate(double b, double p) { return b * (1.0 - p) / 2.0; }

struct DecayFit {
  double a = 0.0;
  double p = 1.0;
  double b = 0.0;
  std::array<double, 3> stderr_{0.0, 0.0, 0.0};  // A, p, B
  double fidelity = 1.0;
  double gamma_ex = 0.0;
  int iterations = 0;
  /// True when p is unidentifiable (constant data or too few lengths).
  bool degenerate = false;
};

inline double excitation_rate(const DecayFit& fit) { return excitation_rate(fit.b, fit.p); }

struct FitOptions {
  /// Pins B instead of fitting it (e.g. 1/2 for a twirled qubit under unital noise).
  std::optional<double> fixed_b;
  int max_iterations = 500;
};

/// Levenberg-Marquardt fit of s(L) = A p^L + B with 0 < p <= 1 and 0 <= B <= 1.
inline DecayFit fit_decay(const std::vector<double>& lengths, const std::vector<double>& survivals,
                          const FitOptions& options = {}) {
  if (lengths.size() != survivals.size() || lengths.empty())
    fail(ErrorKind::FitFailure, "lengths and survivals must be nonempty and equally long");
  const std::size_t n = lengths.size();
  for (double s : survivals)
    if (!(s >= 0.0 && s <= 1.0)) fail(ErrorKind::FitFailure, "survival outside [0, 1]");

  const std::set<double> distinct(lengths.begin(), lengths.end());
  const auto [lo_it, hi_it] = std::minmax_element(survivals.begin(), survivals.end());
  double mean = 0.0;
  for (double s : survivals) mean += s;
  mean /= static_cast<double>(n);

  DecayFit fit;
  if (distinct.size() < 3 || *hi_it - *lo_it < 1e-12) {
    fit.degenerate = true;
    fit.a = 0.0;
    fit.p = 1.0;
    fit.b = options.fixed_b.value_or(mean);
    fit.fidelity = rb_fidelity(fit.p);
    fit.gamma_ex = excitation_rate(fit.b, fit.p);
    return fit;
  }

  // Initial guess: A0 = s(0) - s(inf), B0 = s(inf), p0 from a log-linear
  // regression of (s - B0) / A0. The last point stands in for s(inf).
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return lengths[x] < lengths[y]; });
  const double b0 = options.fixed_b.value_or(survivals[order.back()]);
  const double a0 = survivals[order.front()] - b0;
  double p0 = 0.99;
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i : order) {
      const double r = (survivals[i] - b0) / a0;
      if (!(r > 0.0) || (!options.fixed_b && i == order.back())) continue;
      const double x = lengths[i], y = std::log(r);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++m;
    }
    if (m >= 2 && m * sxx - sx * sx > 0.0) {
      const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      if (std::isfinite(slope)) p0 = std::clamp(std::exp(slope), 1e-3, 1.0 - 1e-12);
    }
  }

  const int np = options.fixed_b ? 2 : 3;
  Eigen::VectorXd theta(np);
  theta(0) = a0;
  theta(1) = p0;
  if (np == 3) theta(2) = b0;
  // Box: 0 < p <= 1, and 0 <= B <= 1 since the asymptote is a probability
  // (nearly linear decays otherwise run off to B -> inf).
  const double inf = std::numeric_limits<double>::infinity();
  const Eigen::Vector3d lower(-inf, 1e-12, 0.0), upper(inf, 1.0, 1.0);
  auto b_of = [&](const Eigen::VectorXd& t) { return np == 3 ? t(2) : *options.fixed_b; };
  auto residuals = [&](const Eigen::VectorXd& t) {
    Eigen::VectorXd r(n);
    for (std::size_t i = 0; i < n; ++i) r(i) = t(0) * std::pow(t(1), lengths[i]) + b_of(t) - survivals[i];
    return r;
  };
  auto jacobian = [&](const Eigen::VectorXd& t) {
    Eigen::MatrixXd j(n, np);
    for (std::size_t i = 0; i < n; ++i) {
      const double l = lengths[i];
      j(i, 0) = std::pow(t(1), l);
      j(i, 1) = l == 0.0 ? 0.0 : t(0) * l * std::pow(t(1), l - 1.0);
      if (np == 3) j(i, 2) = 1.0;
    }
    return j;
  };

  double mu = 1e-3;
  Eigen::VectorXd r = residuals(theta);
  double cost = r.squaredNorm();
  bool converged = false;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const Eigen::MatrixXd j = jacobian(theta);
    const Eigen::MatrixXd jtj = j.transpose() * j;
    const Eigen::VectorXd g = j.transpose() * r;
    if (cost < 1e-30 || g.cwiseAbs().maxCoeff() < 1e-30) {
      converged = true;
      break;
    }
    Eigen::MatrixXd damped = jtj;
    damped.diagonal() += mu * jtj.diagonal().cwiseMax(1e-300);
    Eigen::VectorXd trial = theta + damped.ldlt().solve(-g);
    // Parameters that would leave their box are pinned to the bound and the
    // step is re-solved over the rest.
    std::vector<int> free_idx;
    for (int k = 0; k < np; ++k) {
      if (trial(k) < lower(k) || trial(k) > upper(k))
        trial(k) = std::clamp(trial(k), lower(k), upper(k));
      else
        free_idx.push_back(k);
    }
    if (static_cast<int>(free_idx.size()) < np && !free_idx.empty()) {
      const int nf = static_cast<int>(free_idx.size());
      Eigen::MatrixXd sub(nf, nf);
      Eigen::VectorXd rhs(nf);
      for (int u = 0; u < nf; ++u) {
        rhs(u) = -g(free_idx[u]);
        for (int v = 0; v < nf; ++v) sub(u, v) = damped(free_idx[u], free_idx[v]);
        for (int k = 0; k < np; ++k)
          if (std::find(free_idx.begin(), free_idx.end(), k) == free_idx.end())
            rhs(u) -= damped(free_idx[u], k) * (trial(k) - theta(k));
      }
      const Eigen::VectorXd d = sub.ldlt().solve(rhs);
      for (int u = 0; u < nf; ++u)
        trial(free_idx[u]) = std::clamp(theta(free_idx[u]) + d(u), lower(free_idx[u]), upper(free_idx[u]));
    }
    const Eigen::VectorXd r_trial = residuals(trial);
    const double trial_cost = r_trial.squaredNorm();
    if (std::isfinite(trial_cost) && trial_cost <= cost) {
      const double reduction = (cost - trial_cost) / std::max(cost, 1e-300);
      const double moved = (trial - theta).norm() / (1.0 + theta.norm());
      theta = trial;
      r = r_trial;
      cost = trial_cost;
      mu = std::max(mu / 3.0, 1e-15);
      if (reduction < 1e-12 && moved < 1e-10) {
        converged = true;
        break;
      }
    } else {
      mu *= 4.0;
      // Every damping level fails to decrease the cost: at a minimum to machine precision.
      if (mu > 1e20) {
        converged = true;
        break;
      }
    }
  }
  if (!converged) fail(ErrorKind::FitFailure, "decay fit did not converge in 500 iterations");

  const Eigen::MatrixXd j = jacobian(theta);
  const Eigen::MatrixXd jtj = j.transpose() * j;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
  if (!lu.isInvertible()) fail(ErrorKind::FitFailure, "singular Jacobian at the optimum");
  const Eigen::MatrixXd cov = lu.inverse();
  const double dof = static_cast<double>(n) - np;
  const double s2 = dof > 0.0 ? cost / dof : 0.0;

  fit.a = theta(0);
  fit.p = theta(1);
  fit.b = b_of(theta);
  for (int k = 0; k < np; ++k) fit.stderr_[k] = std::sqrt(std::max(0.0, s2 * cov(k, k)));
  fit.fidelity = rb_fidelity(fit.p);
  fit.gamma_ex = excitation_rate(fit.b, fit.p);
  fit.iterations = it;
  return fit;
}

struct RBSeries {
  std::string label;
  std::vector<double> mean;
  std::vector<double> stddev;
  std::optional<DecayFit> fit;
  std::string fit_error;  // set when the fit raised FitFailure
};

struct RBResult {
  std::vector<int> lengths;
  int seeds = 0;
  std::vector<RBSeries> series;  // one per qubit on the line, line order

  const RBSeries& at(const std::string& label) const {
    for (const auto& s : series)
      if (s.label == label) return s;
    fail(ErrorKind::IndexOutOfRange, "no series for '" + label + "'");
  }
};

struct RBOptions {
  std::vector<int> lengths{1, 2, 4, 8, 16, 32, 64, 128, 256, 512};
  int seeds = 50;
  Noise noise = Noise::Open;
  int shots = 0;  // 0 = exact probabilities
  std::uint64_t seed = 20250101;
};

/// Stream seed for one (length, seed index) work item.
inline std::uint64_t rb_stream_seed(std::uint64_t base, int length, int seed_index) {
  return splitmix64(splitmix64(base ^ splitmix64(static_cast<std::uint64_t>(length))) +
                    static_cast<std::uint64_t>(seed_index));
}

namespace detail {

// Per-qubit action of the target X90 emitted at one frame phase. Unitary
// runs act on state vectors, open runs on vec(rho).
class PulseCache {
 public:
  PulseCache(const QubitSpec& q, double coupling, const Waveform& w, Noise noise)
      : q_(q), coupling_(coupling), w_(w), noise_(noise) {}

  const Matrix& at(double phase) {
    const double key = std::round(std::remainder(phase, units::kTwoPi) * 1e12) / 1e12;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const Waveform shifted = w_.scaled(std::polar(1.0, phase));
    Matrix op = noise_ == Noise::Unitary ? propagator(q_, coupling_, shifted, shifted.carrier_freq)
                                         : pulse_channel(q_, coupling_, shifted, shifted.carrier_freq);
    return cache_.emplace(key, std::move(op)).first->second;
  }

  Vector initial() const {
    const int d = q_.levels;
    Vector v = Vector::Zero(noise_ == Noise::Unitary ? d : d * d);
    v(0) = 1.0;
    return v;
  }

  double ground_population(const Vector& v) const {
    return noise_ == Noise::Unitary ? std::norm(v(0)) : std::clamp(v(0).real(), 0.0, 1.0);
  }

 private:
  QubitSpec q_;
  double coupling_;
  Waveform w_;
  Noise noise_;
  std::map<double, Matrix> cache_;
};

}  // namespace detail

/// Runs RB with the target's calibrated X90 on every qubit of the line.
inline RBResult simulate_rb(const SharedLineSystem& system, const CalibratedGate& gate, const RBOptions& options = {}) {
  system.validate();
  if (options.lengths.empty()) fail(ErrorKind::InvalidGrid, "no sequence lengths");
  for (std::size_t i = 0; i < options.lengths.size(); ++i) {
    if (options.lengths[i] < 1) fail(ErrorKind::InvalidGrid, "sequence lengths must be >= 1");
    if (i > 0 && options.lengths[i] <= options.lengths[i - 1])
      fail(ErrorKind::InvalidGrid, "sequence lengths must be strictly increasing");
  }
  if (options.seeds < 1) fail(ErrorKind::InvalidGrid, "need at least one seed");
  if (system.index_of(gate.target_label) != system.target_index)
    fail(ErrorKind::InvalidSystem, "gate target does not match the system target");

  std::vector<detail::PulseCache> caches;
  for (std::size_t i = 0; i < system.qubits.size(); ++i)
    caches.emplace_back(system.qubits[i], system.coupling(i), gate.waveform, options.noise);

  RBResult result;
  result.lengths = options.lengths;
  result.seeds = options.seeds;
  const std::size_t nq = system.qubits.size();
  const std::size_t nl = options.lengths.size();
  // samples[q][l][s]
  std::vector<std::vector<std::vector<double>>> samples(nq, std::vector<std::vector<double>>(nl));

  for (std::size_t li = 0; li < nl; ++li) {
    const int length = options.lengths[li];
    for (int s = 0; s < options.seeds; ++s) {
      const std::uint64_t stream = rb_stream_seed(options.seed, length, s);
      auto seq = random_sequence(length, stream);
      std::vector<int> all = seq.cliffords;
      all.push_back(seq.inverse);
      const auto phases = compile_frame_phases(all);
      std::mt19937_64 shot_rng(splitmix64(stream));
      for (std::size_t q = 0; q < nq; ++q) {
        Vector v = caches[q].initial();
        for (double phi : phases) v = caches[q].at(phi) * v;
        samples[q][li].push_back(sample_probability(caches[q].ground_population(v), options.shots, shot_rng));
      }
    }
  }

  std::vector<double> lengths_d(options.lengths.begin(), options.lengths.end());
  for (std::size_t q = 0; q < nq; ++q) {
    RBSeries series;
    series.label = system.qubits[q].label;
    for (std::size_t li = 0; li < nl; ++li) {
      const auto& xs = samples[q][li];
      double m = 0.0;
      for (double x : xs) m += x;
      m /= static_cast<double>(xs.size());
      double var = 0.0;
      for (double x : xs) var += (x - m) * (x - m);
      var = xs.size() > 1 ? var / static_cast<double>(xs.size() - 1) : 0.0;
      series.mean.push_back(std::clamp(m, 0.0, 1.0));
      series.stddev.push_back(std::sqrt(var));
    }
    // Under unital (unitary) noise the twirled target relaxes to I/2, so its
    // asymptote is pinned; relaxation and non-target series keep B free.
    FitOptions fit_options;
    if (options.noise == Noise::Unitary && q == system.target_index) fit_options.fixed_b = 0.5;
    try {
      series.fit = fit_decay(lengths_d, series.mean, fit_options);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::FitFailure) throw;
      series.fit_error = e.what();
    }
    result.series.push_back(std::move(series));
  }
  return result;
}

}  // namespace sepulse
