// Copyright 2026 The qrc authors
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

#ifndef QRC_COMMON_HPP
#define QRC_COMMON_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace qrc {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Bad user input: malformed config, schema violation, mismatched data.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A circuit violates a structural invariant (alternation, qubit bounds, ...).
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Request exceeds a hard limit (e.g. dense simulation width).
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Misuse of the emulated instruction protocol (signals a compiler bug).
struct ProtocolError : std::runtime_error {
  explicit ProtocolError(const std::string& msg) : std::runtime_error(msg) {}
};

// A should-never-happen consistency fault (broken table construction, ...).
struct InternalError : std::runtime_error {
  explicit InternalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Normalizes an angle into the half-open interval (-pi, pi].
// In-range values are returned unchanged so the map is bitwise idempotent.
inline double normalize_angle(double phi) {
  if (phi > -kPi && phi <= kPi) {
    return phi;
  }
  if (!std::isfinite(phi)) {
    throw ConfigError("angle is not finite");
  }
  double r = std::remainder(phi, kTwoPi);  // r in [-pi, pi]
  if (r <= -kPi) {
    r += kTwoPi;
  }
  return r;
}

}  // namespace qrc

#endif
