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

#include <numbers>

// Internal quantities are SI: angular frequencies in rad/s, times in s.
// Config files and CLI flags use Hz / MHz / ns; convert at the boundary.
namespace sepulse::units {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double ns(double v) { return v * 1e-9; }
constexpr double us(double v) { return v * 1e-6; }
constexpr double to_ns(double seconds) { return seconds * 1e9; }

/// Cyclic frequency in Hz to angular frequency in rad/s.
constexpr double hz(double v) { return kTwoPi * v; }
constexpr double mhz(double v) { return kTwoPi * v * 1e6; }
constexpr double ghz(double v) { return kTwoPi * v * 1e9; }

constexpr double to_hz(double omega) { return omega / kTwoPi; }
constexpr double to_mhz(double omega) { return omega / kTwoPi * 1e-6; }

}  // namespace sepulse::units
