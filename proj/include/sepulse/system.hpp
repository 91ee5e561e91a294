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

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sepulse/error.hpp"

namespace sepulse {

/// One transmon on the shared line. Frequencies in rad/s, times in s.
struct QubitSpec {
  std::string label;
  double frequency = 0.0;
  double anharmonicity = 0.0;  // <= 0 for transmons
  int levels = 2;
  std::optional<double> t1;
  std::optional<double> t2_echo;

  void validate() const {
    if (!(frequency > 0.0)) fail(ErrorKind::InvalidSystem, "qubit '" + label + "': frequency must be positive");
    if (levels != 2 && levels != 3) fail(ErrorKind::InvalidSystem, "qubit '" + label + "': levels must be 2 or 3");
    if (levels == 3 && anharmonicity == 0.0)
      fail(ErrorKind::ZeroAnharmonicity, "qubit '" + label + "': three-level model needs a nonzero anharmonicity");
    if (t1 && !(*t1 > 0.0)) fail(ErrorKind::InvalidSystem, "qubit '" + label + "': T1 must be positive");
    if (t2_echo && !(*t2_echo > 0.0)) fail(ErrorKind::InvalidSystem, "qubit '" + label + "': T2echo must be positive");
    if (t1 && t2_echo && *t2_echo > 2.0 * *t1)
      fail(ErrorKind::NegativeDephasing, "qubit '" + label + "': T2echo exceeds 2*T1");
  }
};

/// Uncoupled qubits driven through one line. Dynamics factorize per qubit.
struct SharedLineSystem {
  std::vector<QubitSpec> qubits;
  std::size_t target_index = 0;
  /// Per-qubit multiplier on the drive envelope (divider asymmetry). Empty means all 1.
  std::vector<double> coupling_scale;

  void validate() const {
    if (qubits.empty()) fail(ErrorKind::InvalidSystem, "shared line has no qubits");
    if (target_index >= qubits.size()) fail(ErrorKind::IndexOutOfRange, "target index out of range");
    if (!coupling_scale.empty() && coupling_scale.size() != qubits.size())
      fail(ErrorKind::InvalidSystem, "coupling_scale must have one entry per qubit");
    std::set<std::string> labels;
    for (const auto& q : qubits) {
      q.validate();
      if (!labels.insert(q.label).second) fail(ErrorKind::InvalidSystem, "duplicate qubit label '" + q.label + "'");
    }
  }

  const QubitSpec& target() const { return qubits.at(target_index); }
  double drive_freq() const { return target().frequency; }
  double coupling(std::size_t i) const { return coupling_scale.empty() ? 1.0 : coupling_scale.at(i); }

  std::vector<QubitSpec> nontargets() const {
    std::vector<QubitSpec> out;
    for (std::size_t i = 0; i < qubits.size(); ++i)
      if (i != target_index) out.push_back(qubits[i]);
    return out;
  }

  std::optional<std::size_t> index_of(const std::string& label) const {
    for (std::size_t i = 0; i < qubits.size(); ++i)
      if (qubits[i].label == label) return i;
    return std::nullopt;
  }

  SharedLineSystem with_target(std::size_t index) const {
    SharedLineSystem s = *this;
    s.target_index = index;
    s.validate();
    return s;
  }
};

}  // namespace sepulse
