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
 * @file dynamics.hpp
 * @brief Rotating-frame propagation of uncoupled qubits on a shared drive line.
 *
 * Two-level qubits follow
 *
 *   H = -(D/2) sz + (1/2) [ s_x sx - s_y sy ]
 *
 * with D = w_q - w_d. Three-level transmons use
 *
 *   H = D n + (alpha/2) n (n - 1) + (1/2) [ s* a^dag + s a ]
 *
 * whose restriction to {g, e} equals the two-level form up to a constant.
 * The drive envelope is piecewise constant over each sample, so every step
 * propagator is an exact matrix exponential.
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "sepulse/error.hpp"
#include "sepulse/pulse_synthesis.hpp"
#include "sepulse/system.hpp"

namespace sepulse {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct QubitOutcome {
  std::string label;
  double p_g = 1.0;
  double p_e = 0.0;
  double p_f = 0.0;
  /// State vector (unitary runs) or density matrix (open runs).
  Matrix state;
  /// Full propagator for unitary runs; empty for open runs.
  Matrix propagator;
  double global_phase = 0.0;
};

struct PropagationResult {
  std::vector<QubitOutcome> qubits;

  const QubitOutcome& at(const std::string& label) const {
    for (const auto& q : qubits)
      if (q.label == label) return q;
    fail(ErrorKind::IndexOutOfRange, "no qubit labelled '" + label + "'");
  }
};

namespace detail {

template <int D>
using Op = Eigen::Matrix<cplx, D, D>;

template <int D>
Op<D> hamiltonian(double detuning, double anharmonicity, cplx s) {
  Op<D> h = Op<D>::Zero();
  if constexpr (D == 2) {
    h(0, 0) = -0.5 * detuning;
    h(1, 1) = 0.5 * detuning;
    h(0, 1) = 0.5 * s;
    h(1, 0) = 0.5 * std::conj(s);
  } else {
    const double root2 = std::sqrt(2.0);
    h(1, 1) = detuning;
    h(2, 2) = 2.0 * detuning + anharmonicity;
    h(0, 1) = 0.5 * s;
    h(1, 0) = 0.5 * std::conj(s);
    h(1, 2) = 0.5 * root2 * s;
    h(2, 1) = 0.5 * root2 * std::conj(s);
  }
  return h;
}

template <int D>
Op<D> step_propagator(double detuning, double anharmonicity, cplx s, double dt) {
  if constexpr (D == 2) {
    // H = h . sigma with h = (s_x/2, -s_y/2, -D/2).
    const double hx = 0.5 * s.real();
    const double hy = -0.5 * s.imag();
    const double hz = -0.5 * detuning;
    const double norm = std::sqrt(hx * hx + hy * hy + hz * hz);
    const double c = std::cos(norm * dt);
    const double sn = norm > 0.0 ? std::sin(norm * dt) / norm : dt;
    const cplx i{0.0, 1.0};
    Op<2> u;
    u(0, 0) = c - i * sn * hz;
    u(1, 1) = c + i * sn * hz;
    u(0, 1) = -i * sn * cplx(hx, -hy);
    u(1, 0) = -i * sn * cplx(hx, hy);
    return u;
  } else {
    Eigen::SelfAdjointEigenSolver<Op<D>> eig(hamiltonian<D>(detuning, anharmonicity, s));
    Eigen::Matrix<cplx, D, 1> phases;
    for (int j = 0; j < D; ++j) phases(j) = std::polar(1.0, -eig.eigenvalues()(j) * dt);
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  }
}

template <int D>
Op<D> propagator(const QubitSpec& q, double coupling, const Waveform& w, double drive_freq) {
  const double detuning = q.frequency - drive_freq;
  Op<D> u = Op<D>::Identity();
  for (const auto& s : w.samples) u = step_propagator<D>(detuning, q.anharmonicity, coupling * s, w.dt) * u;
  return u;
}

inline double unitarity_error(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

inline double pure_dephasing_rate(const QubitSpec& q) {
  if (!q.t2_echo) return 0.0;
  const double rate = 1.0 / *q.t2_echo - 0.5 / *q.t1;
  if (rate < -1e-12 / *q.t1) fail(ErrorKind::NegativeDephasing, "qubit '" + q.label + "': T2echo exceeds 2*T1");
  return std::max(rate, 0.0);
}

// One decoherence step on a density matrix: amplitude damping with Kraus
// operators K1 = sqrt(g) a, K0 = sqrt(1 - g n), then pure dephasing that
// multiplies rho_jk by exp(-(j - k)^2 dt / T_phi).
template <int D>
void decohere(Op<D>& rho, double gamma, const Op<D>& dephase) {
  Op<D> k0 = Op<D>::Zero();
  Op<D> k1 = Op<D>::Zero();
  for (int j = 0; j < D; ++j) k0(j, j) = std::sqrt(std::max(0.0, 1.0 - gamma * j));
  for (int j = 1; j < D; ++j) k1(j - 1, j) = std::sqrt(gamma * j);
  rho = k0 * rho * k0.adjoint() + k1 * rho * k1.adjoint();
  rho = rho.cwiseProduct(dephase);
}

template <int D>
Op<D> evolve_density(const QubitSpec& q, double coupling, const Waveform& w, double drive_freq, Op<D> rho) {
  const double detuning = q.frequency - drive_freq;
  const double gamma = -std::expm1(-w.dt / *q.t1);
  const double phi_rate = pure_dephasing_rate(q);
  Op<D> dephase;
  for (int j = 0; j < D; ++j)
    for (int k = 0; k < D; ++k) dephase(j, k) = std::exp(-double((j - k) * (j - k)) * w.dt * phi_rate);
  for (const auto& s : w.samples) {
    const Op<D> u = step_propagator<D>(detuning, q.anharmonicity, coupling * s, w.dt);
    rho = u * rho * u.adjoint();
    decohere<D>(rho, gamma, dephase);
  }
  return rho;
}

inline void require_coherence(const QubitSpec& q) {
  if (!q.t1) fail(ErrorKind::MissingCoherence, "qubit '" + q.label + "' has no T1");
  if (q.t2_echo && *q.t2_echo > 2.0 * *q.t1) fail(ErrorKind::NegativeDephasing, "qubit '" + q.label + "': T2echo exceeds 2*T1");
}

inline void fill_populations(QubitOutcome& out, const Vector& diag) {
  out.p_g = std::clamp(diag(0).real(), 0.0, 1.0);
  out.p_e = std::clamp(diag(1).real(), 0.0, 1.0);
  out.p_f = diag.size() > 2 ? std::clamp(diag(2).real(), 0.0, 1.0) : 0.0;
}

}  // namespace detail

/// Rotating-frame Hamiltonian of qubit `index` during sample `k`.
inline Matrix hamiltonian_at(const SharedLineSystem& system, std::size_t index, const Waveform& w,
                             double drive_freq, std::size_t k) {
  if (index >= system.qubits.size()) fail(ErrorKind::IndexOutOfRange, "qubit index out of range");
  if (k >= w.size()) fail(ErrorKind::IndexOutOfRange, "sample index out of range");
  const auto& q = system.qubits[index];
  const double detuning = q.frequency - drive_freq;
  const cplx s = system.coupling(index) * w.samples[k];
  if (q.levels == 2) return detail::hamiltonian<2>(detuning, q.anharmonicity, s);
  return detail::hamiltonian<3>(detuning, q.anharmonicity, s);
}

/// Product of per-sample propagators, U = prod_k exp(-i H_k dt).
inline Matrix propagator(const QubitSpec& q, double coupling, const Waveform& w, double drive_freq) {
  Matrix u;
  if (q.levels == 2)
    u = detail::propagator<2>(q, coupling, w, drive_freq);
  else
    u = detail::propagator<3>(q, coupling, w, drive_freq);
  if (detail::unitarity_error(u) > 1e-8) fail(ErrorKind::NonUnitaryDrift, "propagator drifted from unitarity");
  return u;
}

inline Vector ground_state(int levels) {
  Vector v = Vector::Zero(levels);
  v(0) = 1.0;
  return v;
}

/// Unitary evolution of every qubit from |g> (or the supplied initial states).
inline PropagationResult evolve_unitary(const SharedLineSystem& system, const Waveform& w, double drive_freq,
                                        const std::vector<Vector>& initial = {}) {
  system.validate();
  if (w.samples.empty()) fail(ErrorKind::InvalidGrid, "waveform has no samples");
  PropagationResult result;
  for (std::size_t i = 0; i < system.qubits.size(); ++i) {
    const auto& q = system.qubits[i];
    QubitOutcome out;
    out.label = q.label;
    out.propagator = propagator(q, system.coupling(i), w, drive_freq);
    const Vector psi0 = initial.empty() ? ground_state(q.levels) : initial.at(i);
    const Vector psi = out.propagator * psi0;
    out.state = psi;
    detail::fill_populations(out, psi.cwiseAbs2().cast<cplx>());
    out.global_phase = std::arg(out.propagator.determinant()) / q.levels;
    result.qubits.push_back(std::move(out));
  }
  return result;
}

/// Density-matrix evolution with amplitude damping (1/T1) and pure dephasing
/// (1/T_phi = 1/T2echo - 1/(2 T1)) applied after every unitary step.
inline PropagationResult evolve_open(const SharedLineSystem& system, const Waveform& w, double drive_freq,
                                     const std::vector<Matrix>& initial = {}) {
  system.validate();
  if (w.samples.empty()) fail(ErrorKind::InvalidGrid, "waveform has no samples");
  PropagationResult result;
  for (std::size_t i = 0; i < system.qubits.size(); ++i) {
    const auto& q = system.qubits[i];
    detail::require_coherence(q);
    QubitOutcome out;
    out.label = q.label;
    Matrix rho0;
    if (initial.empty()) {
      rho0 = Matrix::Zero(q.levels, q.levels);
      rho0(0, 0) = 1.0;
    } else {
      rho0 = initial.at(i);
    }
    if (q.levels == 2)
      out.state = detail::evolve_density<2>(q, system.coupling(i), w, drive_freq, rho0);
    else
      out.state = detail::evolve_density<3>(q, system.coupling(i), w, drive_freq, rho0);
    detail::fill_populations(out, out.state.diagonal());
    result.qubits.push_back(std::move(out));
  }
  return result;
}

/// Superoperator of the open-system pulse acting on column-stacked vec(rho).
inline Matrix pulse_channel(const QubitSpec& q, double coupling, const Waveform& w, double drive_freq) {
  detail::require_coherence(q);
  const int d = q.levels;
  Matrix super = Matrix::Zero(d * d, d * d);
  for (int col = 0; col < d; ++col) {
    for (int row = 0; row < d; ++row) {
      Matrix basis = Matrix::Zero(d, d);
      basis(row, col) = 1.0;
      Matrix out = d == 2 ? Matrix(detail::evolve_density<2>(q, coupling, w, drive_freq, basis))
                          : Matrix(detail::evolve_density<3>(q, coupling, w, drive_freq, basis));
      super.col(col * d + row) = Eigen::Map<const Vector>(out.data(), d * d);
    }
  }
  return super;
}

/// Binomial estimate of a probability from `shots` projective measurements.
template <class Rng>
double sample_probability(double p, int shots, Rng& rng) {
  if (shots <= 0) return p;
  std::binomial_distribution<int> dist(shots, std::clamp(p, 0.0, 1.0));
  return static_cast<double>(dist(rng)) / shots;
}

}  // namespace sepulse
