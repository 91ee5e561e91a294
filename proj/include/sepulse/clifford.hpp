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

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "sepulse/units.hpp"

namespace sepulse {

using Unitary2 = Eigen::Matrix2cd;

/// Z(theta) = exp(-i theta sz / 2).
inline Unitary2 z_rotation(double theta) {
  Unitary2 z = Unitary2::Zero();
  z(0, 0) = std::polar(1.0, -0.5 * theta);
  z(1, 1) = std::polar(1.0, 0.5 * theta);
  return z;
}

/// X90 = exp(-i (pi/4) sx).
inline Unitary2 x90() {
  const double c = std::sqrt(0.5);
  Unitary2 x;
  x << c, std::complex<double>(0.0, -c), std::complex<double>(0.0, -c), c;
  return x;
}

/// Removes the global phase: the largest-magnitude entry (first in
/// column-major order on ties) is made real and positive.
inline Unitary2 canonical_phase(const Unitary2& u) {
  Eigen::Index best = 0;
  double mag = -1.0;
  for (Eigen::Index k = 0; k < 4; ++k) {
    const double m = std::abs(u.data()[k]);
    if (m > mag + 1e-9) {
      mag = m;
      best = k;
    }
  }
  const auto ref = u.data()[best];
  return u * (std::abs(ref) / ref);
}

/// Distance between two unitaries modulo U(1).
inline double phase_insensitive_distance(const Unitary2& a, const Unitary2& b) {
  const auto overlap = (a.adjoint() * b).trace();
  return std::sqrt(std::max(0.0, 1.0 - std::abs(overlap) / 2.0));
}

struct GateToken {
  enum class Kind { VirtualZ, X90 };
  Kind kind;
  double angle = 0.0;  // VirtualZ only

  static GateToken z(double a) { return {Kind::VirtualZ, a}; }
  static GateToken x() { return {Kind::X90, 0.0}; }
};

/// Composes tokens listed in time order.
inline Unitary2 compose(const std::vector<GateToken>& tokens) {
  Unitary2 u = Unitary2::Identity();
  for (const auto& t : tokens) u = (t.kind == GateToken::Kind::X90 ? x90() : z_rotation(t.angle)) * u;
  return u;
}

struct CliffordElement {
  int index = 0;
  Unitary2 unitary;
  /// Time-ordered Z(a) X90 Z(b) X90 Z(c) pattern with zero-angle Zs removed.
  std::vector<GateToken> decomposition;

  int x90_count() const {
    int n = 0;
    for (const auto& t : decomposition) n += t.kind == GateToken::Kind::X90;
    return n;
  }
};

/// The 24 single-qubit Cliffords with a multiplication table.
class CliffordGroup {
 public:
  CliffordGroup() {
    build_elements();
    build_tables();
  }

  const std::vector<CliffordElement>& elements() const { return elements_; }
  const CliffordElement& operator[](int i) const { return elements_.at(i); }
  std::size_t size() const { return elements_.size(); }

  /// Index of the element equal to u up to global phase, or -1.
  int find(const Unitary2& u) const {
    for (const auto& e : elements_)
      if (phase_insensitive_distance(e.unitary, u) < 1e-7) return e.index;
    return -1;
  }

  /// Index of (a applied first, then b), i.e. U_b * U_a.
  int then(int a, int b) const { return product_[a][b]; }
  int inverse(int a) const { return inverse_[a]; }

 private:
  void build_elements() {
    // Closure of <X90, Z(pi/2)> by breadth-first search.
    std::vector<Unitary2> found{Unitary2::Identity()};
    for (std::size_t head = 0; head < found.size(); ++head) {
      for (const Unitary2& g : {x90(), z_rotation(units::kPi / 2)}) {
        const Unitary2 next = g * found[head];
        bool seen = false;
        for (const auto& f : found) seen = seen || phase_insensitive_distance(f, next) < 1e-7;
        if (!seen) found.push_back(next);
      }
    }
    assert(found.size() == 24);

    for (std::size_t i = 0; i < found.size(); ++i) {
      CliffordElement e;
      e.index = static_cast<int>(i);
      e.unitary = canonical_phase(found[i]);
      e.decomposition = shortest_decomposition(e.unitary);
      elements_.push_back(std::move(e));
    }
  }

  // Fewest X90s first, then fewest virtual Zs, over Z angles in {0, pi/2, pi, 3pi/2}.
  static std::vector<GateToken> shortest_decomposition(const Unitary2& target) {
    std::vector<GateToken> best;
    int best_x = 3, best_z = 4;
    for (int nx = 0; nx <= 2; ++nx) {
      const int nz = nx + 1;
      int combos = 1;
      for (int k = 0; k < nz; ++k) combos *= 4;
      for (int code = 0; code < combos; ++code) {
        std::vector<GateToken> tokens;
        int rest = code, zcount = 0;
        for (int k = 0; k < nz; ++k) {
          const int q = rest % 4;
          rest /= 4;
          if (q != 0) {
            tokens.push_back(GateToken::z(q * units::kPi / 2));
            ++zcount;
          }
          if (k < nx) tokens.push_back(GateToken::x());
        }
        if (phase_insensitive_distance(compose(tokens), target) > 1e-7) continue;
        if (nx < best_x || (nx == best_x && zcount < best_z)) {
          best = tokens;
          best_x = nx;
          best_z = zcount;
        }
      }
      if (best_x <= nx) break;
    }
    assert(best_x <= 2);
    return best;
  }

  void build_tables() {
    const int n = static_cast<int>(elements_.size());
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        product_[a][b] = find(elements_[b].unitary * elements_[a].unitary);
        assert(product_[a][b] >= 0);
        if (product_[a][b] == 0) inverse_[a] = b;
      }
    }
  }

  std::vector<CliffordElement> elements_;
  std::array<std::array<int, 24>, 24> product_{};
  std::array<int, 24> inverse_{};
};

inline const CliffordGroup& clifford_group() {
  static const CliffordGroup group;
  return group;
}

inline const std::vector<CliffordElement>& clifford_table() { return clifford_group().elements(); }

struct RandomSequence {
  std::vector<int> cliffords;
  int inverse = 0;
};

/// Stateless 64-bit mixer used to derive independent per-(length, seed) streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// L uniform Cliffords plus the element that returns the product to identity.
inline RandomSequence random_sequence(int length, std::uint64_t seed) {
  const auto& group = clifford_group();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 23);
  RandomSequence seq;
  int acc = 0;
  for (int k = 0; k < std::max(length, 1); ++k) {
    const int c = pick(rng);
    seq.cliffords.push_back(c);
    acc = group.then(acc, c);
  }
  seq.inverse = group.inverse(acc);
  return seq;
}

/// Physical X90 pulse list with the frame phase each one is emitted at.
/// A virtual Z(theta) advances the frame by theta; the pulse at frame phi
/// realizes Z(-phi) X90 Z(phi).
inline std::vector<double> compile_frame_phases(const std::vector<int>& cliffords) {
  const auto& group = clifford_group();
  std::vector<double> phases;
  double frame = 0.0;
  for (int c : cliffords) {
    for (const auto& t : group[c].decomposition) {
      if (t.kind == GateToken::Kind::VirtualZ)
        frame = std::remainder(frame + t.angle, units::kTwoPi);
      else
        phases.push_back(frame);
    }
  }
  return phases;
}

}  // namespace sepulse
