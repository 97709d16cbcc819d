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

#ifndef QRC_CIRCUIT_HPP
#define QRC_CIRCUIT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qrc/gates.hpp"

namespace qrc {

// Dense unitary evaluation is capped at this width; compilation is not.
inline constexpr size_t kMaxSimWidth = 6;

// The three virtual-Z phases of the fixed single-qubit decomposition
// Z(phi2) X90 Z(phi1) X90 Z(phi0). Angles are stored normalized to (-pi, pi].
struct PhaseTriple {
  double phi0 = 0, phi1 = 0, phi2 = 0;

  PhaseTriple() = default;
  PhaseTriple(double p0, double p1, double p2)
      : phi0(normalize_angle(p0)), phi1(normalize_angle(p1)), phi2(normalize_angle(p2)) {}

  double slot(int n) const {
    switch (n) {
      case 0:
        return phi0;
      case 1:
        return phi1;
      default:
        return phi2;
    }
  }

  void set_slot(int n, double v) {
    (n == 0 ? phi0 : n == 1 ? phi1 : phi2) = normalize_angle(v);
  }

  // Physical idle: Z(0) X90 Z(pi) X90 Z(pi) is the identity up to phase.
  static PhaseTriple identity() { return PhaseTriple(kPi, kPi, 0.0); }

  bool operator==(const PhaseTriple& o) const = default;
};

// 2x2 unitary realized by a phase triple.
inline CMat triple_unitary(const PhaseTriple& t) {
  return zrot(t.phi2) * x90_matrix() * zrot(t.phi1) * x90_matrix() * zrot(t.phi0);
}

// Phase triple for the Euler-angle gate
//   U(theta, phi, lambda) = [[cos(t/2), -e^{i lambda} sin(t/2)],
//                            [e^{i phi} sin(t/2), e^{i(phi+lambda)} cos(t/2)]].
// The identity U = Z(phi) X90 Z(pi - theta) X90 Z(lambda + pi) holds up to a
// global phase under this project's Z/X90 conventions.
inline PhaseTriple phases_from_euler(double theta, double phi, double lambda) {
  if (!std::isfinite(theta) || !std::isfinite(phi) || !std::isfinite(lambda))
    throw ConfigError("Euler angles must be finite");
  return PhaseTriple(lambda + kPi, kPi - theta, phi);
}

inline CMat euler_unitary(double theta, double phi, double lambda) {
  CMat m(2, 2);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  m(0, 0) = c;
  m(0, 1) = -std::polar(s, lambda);
  m(1, 0) = std::polar(s, phi);
  m(1, 1) = std::polar(c, phi + lambda);
  return m;
}

// Phase triple reproducing an arbitrary 2x2 unitary up to global phase.
// Euler angles are extracted from the matrix and checked by reconstruction.
inline PhaseTriple phases_from_unitary(const CMat& u) {
  const double a00 = std::abs(u(0, 0));
  const double a10 = std::abs(u(1, 0));
  const double theta = 2.0 * std::atan2(a10, a00);
  double phi = 0, lambda = 0;
  if (a00 > 1e-9 && a10 > 1e-9) {
    const double g = std::arg(u(0, 0));
    phi = std::arg(u(1, 0)) - g;
    lambda = std::arg(-u(0, 1)) - g;
  } else if (a00 > 1e-9) {
    // Diagonal: only phi + lambda is defined.
    phi = 0;
    lambda = std::arg(u(1, 1)) - std::arg(u(0, 0));
  } else {
    // Antidiagonal: only phi - lambda is defined.
    phi = 0;
    lambda = std::arg(-u(0, 1)) - std::arg(u(1, 0));
  }
  const PhaseTriple t = phases_from_euler(theta, phi, lambda);
  if (deviation_up_to_phase(u, triple_unitary(t)) > 1e-10)
    throw InternalError("phase-triple extraction failed to reproduce the unitary");
  return t;
}

// Named single-qubit gates.
inline PhaseTriple phases_from_standard_gate(const std::string& name) {
  if (name == "i" || name == "id" || name == "identity") return phases_from_euler(0, 0, 0);
  if (name == "x") return phases_from_euler(kPi, 0, kPi);
  if (name == "y") return phases_from_euler(kPi, kPi / 2, kPi / 2);
  if (name == "z") return phases_from_euler(0, 0, kPi);
  if (name == "h") return phases_from_euler(kPi / 2, 0, kPi);
  if (name == "s") return phases_from_euler(0, 0, kPi / 2);
  if (name == "sdg") return phases_from_euler(0, 0, -kPi / 2);
  if (name == "t") return phases_from_euler(0, 0, kPi / 4);
  if (name == "tdg") return phases_from_euler(0, 0, -kPi / 4);
  if (name == "x90" || name == "sx") return phases_from_euler(kPi / 2, -kPi / 2, kPi / 2);
  if (name == "y90") return phases_from_euler(kPi / 2, 0, 0);
  throw ConfigError("unknown gate name '" + name + "'");
}

inline PhaseTriple phases_from_rz(double theta) { return phases_from_euler(0, 0, theta); }

// A two-qubit Clifford gate instance. CZ pairs are stored sorted (the gate
// is symmetric); CNOT keeps (control, target) order.
struct TwoQubitGate {
  TwoQubitGateKind kind = TwoQubitGateKind::CZ;
  size_t q0 = 0, q1 = 1;

  TwoQubitGate() = default;
  TwoQubitGate(TwoQubitGateKind k, size_t a, size_t b) : kind(k), q0(a), q1(b) {
    if (k == TwoQubitGateKind::CZ && q0 > q1) std::swap(q0, q1);
  }

  bool covers(size_t q) const { return q == q0 || q == q1; }

  bool operator==(const TwoQubitGate& o) const = default;
};

enum class CycleTag : uint8_t { SINGLE = 0, TWO = 1 };

// One cycle of a circuit. SINGLE cycles map qubit -> phase triple (absent
// qubits are implicitly the identity triple); TWO cycles hold gates on
// disjoint pairs.
struct Cycle {
  CycleTag tag = CycleTag::SINGLE;
  std::map<size_t, PhaseTriple> singles;
  std::vector<TwoQubitGate> gates;

  static Cycle single(std::map<size_t, PhaseTriple> s = {}) {
    Cycle c;
    c.tag = CycleTag::SINGLE;
    c.singles = std::move(s);
    return c;
  }

  static Cycle two(std::vector<TwoQubitGate> g = {}) {
    Cycle c;
    c.tag = CycleTag::TWO;
    c.gates = std::move(g);
    return c;
  }

  PhaseTriple triple_for(size_t q) const {
    auto it = singles.find(q);
    return it == singles.end() ? PhaseTriple::identity() : it->second;
  }

  // Gate covering qubit q in a TWO cycle, if any.
  std::optional<TwoQubitGate> gate_on(size_t q) const {
    for (const auto& g : gates)
      if (g.covers(q)) return g;
    return std::nullopt;
  }
};

struct ValidationReport {
  bool valid = true;
  std::string message;

  static ValidationReport ok() { return {}; }
  static ValidationReport fail(std::string msg) { return {false, std::move(msg)}; }
};

// A circuit: strictly alternating SINGLE/TWO cycles, starting and ending
// with SINGLE, so every twirl and inversion always has an absorption site.
struct Circuit {
  size_t width = 1;
  std::vector<Cycle> cycles;

  // Number of TWO cycles.
  size_t depth() const {
    size_t d = 0;
    for (const auto& c : cycles)
      if (c.tag == CycleTag::TWO) ++d;
    return d;
  }
};

inline ValidationReport validate(const Circuit& c) {
  if (c.width == 0) return ValidationReport::fail("width must be at least 1");
  if (c.cycles.empty()) return ValidationReport::fail("circuit must contain at least one cycle");
  if (c.cycles.front().tag != CycleTag::SINGLE)
    return ValidationReport::fail("must begin with SINGLE");
  if (c.cycles.back().tag != CycleTag::SINGLE)
    return ValidationReport::fail("must end with SINGLE");
  for (size_t i = 0; i + 1 < c.cycles.size(); ++i) {
    if (c.cycles[i].tag == c.cycles[i + 1].tag)
      return ValidationReport::fail("cycles must alternate SINGLE/TWO (violated at cycle " +
                                    std::to_string(i + 1) + ")");
  }
  for (size_t i = 0; i < c.cycles.size(); ++i) {
    const Cycle& cy = c.cycles[i];
    if (cy.tag == CycleTag::SINGLE) {
      if (!cy.gates.empty())
        return ValidationReport::fail("SINGLE cycle " + std::to_string(i) +
                                      " carries two-qubit gates");
      for (const auto& [q, t] : cy.singles) {
        if (q >= c.width)
          return ValidationReport::fail("cycle " + std::to_string(i) + ": qubit " +
                                        std::to_string(q) + " out of range");
        if (!std::isfinite(t.phi0) || !std::isfinite(t.phi1) || !std::isfinite(t.phi2))
          return ValidationReport::fail("cycle " + std::to_string(i) + ": non-finite phase");
      }
    } else {
      if (!cy.singles.empty())
        return ValidationReport::fail("TWO cycle " + std::to_string(i) +
                                      " carries single-qubit gates");
      std::vector<bool> used(c.width, false);
      for (const auto& g : cy.gates) {
        if (g.q0 >= c.width || g.q1 >= c.width)
          return ValidationReport::fail("cycle " + std::to_string(i) + ": qubit out of range");
        if (g.q0 == g.q1)
          return ValidationReport::fail("cycle " + std::to_string(i) +
                                        ": gate qubits must be distinct");
        if (used[g.q0] || used[g.q1])
          return ValidationReport::fail("cycle " + std::to_string(i) +
                                        ": overlapping two-qubit gates");
        used[g.q0] = used[g.q1] = true;
      }
    }
  }
  return ValidationReport::ok();
}

inline void require_valid(const Circuit& c) {
  const ValidationReport r = validate(c);
  if (!r.valid) throw ValidationError(r.message);
}

namespace detail {

// Embeds a 2x2 operator acting on qubit q into the full 2^width space.
// Qubit 0 is the most significant bit of the basis index.
inline CMat embed1(const CMat& u, size_t q, size_t width) {
  const size_t dim = size_t{1} << width;
  const size_t shift = width - 1 - q;
  CMat out(dim, dim);
  for (size_t r = 0; r < dim; ++r) {
    const size_t rb = (r >> shift) & 1;
    for (size_t cb = 0; cb < 2; ++cb) {
      const cx v = u(rb, cb);
      if (v == cx{}) continue;
      const size_t c = (r & ~(size_t{1} << shift)) | (cb << shift);
      out(r, c) = v;
    }
  }
  return out;
}

// Embeds a 4x4 operator on qubits (a, b); a is the high bit of the 4x4 basis.
inline CMat embed2(const CMat& u, size_t a, size_t b, size_t width) {
  const size_t dim = size_t{1} << width;
  const size_t sa = width - 1 - a;
  const size_t sb = width - 1 - b;
  CMat out(dim, dim);
  for (size_t r = 0; r < dim; ++r) {
    const size_t ra = (r >> sa) & 1;
    const size_t rb = (r >> sb) & 1;
    const size_t rest = r & ~((size_t{1} << sa) | (size_t{1} << sb));
    for (size_t cc = 0; cc < 4; ++cc) {
      const cx v = u(ra * 2 + rb, cc);
      if (v == cx{}) continue;
      const size_t c = rest | (((cc >> 1) & 1) << sa) | ((cc & 1) << sb);
      out(r, c) = v;
    }
  }
  return out;
}

}  // namespace detail

// Dense unitary of one cycle in the full 2^width space.
inline CMat cycle_unitary(const Cycle& cy, size_t width) {
  const size_t dim = size_t{1} << width;
  if (cy.tag == CycleTag::SINGLE) {
    // Absent qubits contribute an exact identity factor. (Physically they
    // still play two X90 pulses with the identity triple, but that differs
    // from I only by a global phase.)
    CMat u = CMat::identity(1);
    for (size_t q = 0; q < width; ++q) {
      auto it = cy.singles.find(q);
      u = kron(u, it == cy.singles.end() ? CMat::identity(2) : triple_unitary(it->second));
    }
    return u;
  }
  CMat u = CMat::identity(dim);
  for (const auto& g : cy.gates)
    u = detail::embed2(two_qubit_gate_matrix(g.kind), g.q0, g.q1, width) * u;
  return u;
}

// Exact dense unitary of a circuit (width capped at kMaxSimWidth).
inline CMat unitary(const Circuit& c) {
  if (c.width > kMaxSimWidth)
    throw CapacityError("dense unitary limited to width " + std::to_string(kMaxSimWidth));
  require_valid(c);
  const size_t dim = size_t{1} << c.width;
  CMat u = CMat::identity(dim);
  for (const auto& cy : c.cycles) u = cycle_unitary(cy, c.width) * u;
  return u;
}

}  // namespace qrc

#endif
