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

#include <stdexcept>
#include <string>
#include <string_view>

namespace sepulse {

enum class ErrorKind {
  // pulse synthesis
  DegenerateNull,
  InvalidWidth,
  EmptyGrid,
  InvalidGrid,
  ZeroArea,
  ZeroAnharmonicity,
  // dynamics
  IndexOutOfRange,
  NonUnitaryDrift,
  MissingCoherence,
  NegativeDephasing,
  InvalidSystem,
  // calibration
  NonUnitary,
  NoBracket,
  NonConvergence,
  // benchmarking
  FitFailure,
  DegenerateData,
  // io
  ConfigError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateNull: return "DegenerateNull";
    case ErrorKind::InvalidWidth: return "InvalidWidth";
    case ErrorKind::EmptyGrid: return "EmptyGrid";
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::ZeroArea: return "ZeroArea";
    case ErrorKind::ZeroAnharmonicity: return "ZeroAnharmonicity";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NonUnitaryDrift: return "NonUnitaryDrift";
    case ErrorKind::MissingCoherence: return "MissingCoherence";
    case ErrorKind::NegativeDephasing: return "NegativeDephasing";
    case ErrorKind::InvalidSystem: return "InvalidSystem";
    case ErrorKind::NonUnitary: return "NonUnitary";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::FitFailure: return "FitFailure";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Single exception type for the library; `kind()` distinguishes failures.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Configuration problems are the caller's fault; everything else is numerical.
  bool is_config_error() const noexcept {
    return kind_ == ErrorKind::ConfigError || kind_ == ErrorKind::InvalidSystem ||
           kind_ == ErrorKind::DegenerateNull || kind_ == ErrorKind::InvalidWidth ||
           kind_ == ErrorKind::InvalidGrid || kind_ == ErrorKind::EmptyGrid;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace sepulse
