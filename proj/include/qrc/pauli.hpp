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

#ifndef QRC_PAULI_HPP
#define QRC_PAULI_HPP

#include <array>

#include "qrc/circuit.hpp"
#include "qrc/rng.hpp"

namespace qrc {

// Ordered pair of single-qubit Paulis on the two qubits of a gate. The
// combined 4-bit code (first Pauli in the high bits) doubles as the index
// into the propagation tables and the Pauli-basis ordering II, IX, ..., ZZ.
struct PauliPair {
  Pauli first = Pauli::I;
  Pauli second = Pauli::I;

  PauliPair() = default;
  PauliPair(Pauli a, Pauli b) : first(a), second(b) {}

  uint8_t code() const { return static_cast<uint8_t>(pauli_code(first) * 4 + pauli_code(second)); }

  static PauliPair from_code(uint8_t code) {
    return PauliPair(pauli_from_code((code >> 2) & 3), pauli_from_code(code & 3));
  }

  std::string str() const { return {pauli_char(first), pauli_char(second)}; }

  static PauliPair from_str(const std::string& s) {
    if (s.size() != 2) throw ConfigError("two-qubit Pauli label must have two letters: '" + s + "'");
    return PauliPair(pauli_from_char(s[0]), pauli_from_char(s[1]));
  }

  bool operator==(const PauliPair& o) const = default;
};

inline CMat pauli_pair_matrix(const PauliPair& p) {
  return kron(pauli_matrix(p.first), pauli_matrix(p.second));
}

// One conjugation result: G (P) G^dag = sign * out, exactly, as 4x4 matrices.
struct PropEntry {
  PauliPair out;
  int sign = +1;
};

// Conjugation of all 16 two-qubit Paulis through one Clifford gate kind,
// built by brute force: conjugate and match against all 32 signed pairs.
class PropagationTable {
 public:
  static PropagationTable build(TwoQubitGateKind kind) {
    PropagationTable t;
    t.kind_ = kind;
    const CMat g = two_qubit_gate_matrix(kind);
    const CMat gd = g.adjoint();
    for (uint8_t code = 0; code < 16; ++code) {
      const CMat conj = g * pauli_pair_matrix(PauliPair::from_code(code)) * gd;
      bool found = false;
      for (uint8_t oc = 0; oc < 16 && !found; ++oc) {
        const CMat cand = pauli_pair_matrix(PauliPair::from_code(oc));
        for (int sign : {+1, -1}) {
          if ((conj - cand * cx(double(sign), 0.0)).max_abs() < 1e-12) {
            t.entries_[code] = {PauliPair::from_code(oc), sign};
            found = true;
            break;
          }
        }
      }
      if (!found)
        throw InternalError(std::string("conjugation through ") + gate_kind_name(kind) +
                            " left the signed Pauli group (gate is not Clifford)");
    }
    // Sanity: the map must be a bijection fixing II.
    uint16_t seen = 0;
    for (const auto& e : t.entries_) seen |= uint16_t(1) << e.out.code();
    if (seen != 0xFFFF || t.entries_[0].out.code() != 0 || t.entries_[0].sign != +1)
      throw InternalError("propagation table is not a bijection fixing the identity");
    return t;
  }

  const PropEntry& propagate(const PauliPair& p) const { return entries_[p.code()]; }
  const PropEntry& propagate(uint8_t code) const { return entries_[code]; }
  TwoQubitGateKind kind() const { return kind_; }

 private:
  TwoQubitGateKind kind_ = TwoQubitGateKind::IDENTITY;
  std::array<PropEntry, 16> entries_{};
};

// The four phase rewrites closed under twirl absorption.
enum class PhaseFn : uint8_t { IDENT = 0, NEG = 1, PI_MINUS = 2, PI_PLUS = 3 };

inline const char* phase_fn_name(PhaseFn f) {
  switch (f) {
    case PhaseFn::IDENT:
      return "ident";
    case PhaseFn::NEG:
      return "neg";
    case PhaseFn::PI_MINUS:
      return "pi_minus";
    case PhaseFn::PI_PLUS:
      return "pi_plus";
  }
  return "?";
}

inline double apply_phase_fn(PhaseFn f, double phi) {
  switch (f) {
    case PhaseFn::IDENT:
      return normalize_angle(phi);
    case PhaseFn::NEG:
      return normalize_angle(-phi);
    case PhaseFn::PI_MINUS:
      return normalize_angle(kPi - phi);
    case PhaseFn::PI_PLUS:
      return normalize_angle(kPi + phi);
  }
  return phi;
}

// Phase-rewrite map for absorbing P_post * U3 * P_pre back into circuit form:
//   P_post Z(p2) X90 Z(p1) X90 Z(p0) P_pre = Z(p2') X90 Z(p1') X90 Z(p0')
// with pn' = fn(pn) and fn depending only on (P_post, P_pre, n).
//
// Addresses use a 2-bit slot field (hardware addressing), so the table holds
// 64 entries of which 48 (slots 0..2) are meaningful.
class AbsorptionTable {
 public:
  // Finds each entry by exhaustive search over the 4^3 slot-function
  // assignments, validated on random phase triples against the matrix
  // oracle.
  //
  // The rewrite (p0, p1, p2) -> (p0 + pi, -p1, p2 + pi) reproduces the same
  // unitary exactly (Z Rx(t) Z = Rx(-t)), so every target has exactly two
  // valid assignments; the lexicographically smallest is the canonical one.
  // Any other solution count signals broken gate conventions.
  static AbsorptionTable build() {
    AbsorptionTable t;
    RandomStream rng(0x7C1E57ABULL);  // fixed: the table is a constant
    constexpr int kTriples = 100;
    std::vector<std::array<double, 3>> triples(kTriples);
    for (auto& tr : triples)
      tr = {rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi)};
    for (uint8_t post = 0; post < 4; ++post) {
      for (uint8_t pre = 0; pre < 4; ++pre) {
        const CMat pm = pauli_matrix(pauli_from_code(post));
        const CMat qm = pauli_matrix(pauli_from_code(pre));
        int matches = 0;
        std::array<PhaseFn, 3> found{};
        for (uint8_t f0 = 0; f0 < 4; ++f0)
          for (uint8_t f1 = 0; f1 < 4; ++f1)
            for (uint8_t f2 = 0; f2 < 4; ++f2) {
              const std::array<PhaseFn, 3> fs = {PhaseFn(f0), PhaseFn(f1), PhaseFn(f2)};
              bool ok = true;
              for (const auto& tr : triples) {
                const PhaseTriple in(tr[0], tr[1], tr[2]);
                const PhaseTriple out(apply_phase_fn(fs[0], in.phi0),
                                      apply_phase_fn(fs[1], in.phi1),
                                      apply_phase_fn(fs[2], in.phi2));
                if (deviation_up_to_phase(pm * triple_unitary(in) * qm, triple_unitary(out)) >
                    1e-10) {
                  ok = false;
                  break;
                }
              }
              if (ok) {
                if (matches == 0) found = fs;  // first hit is lex-smallest
                ++matches;
              }
            }
        if (matches != 2)
          throw InternalError("absorption entry (" +
                              std::string(1, pauli_char(pauli_from_code(post))) + ", " +
                              std::string(1, pauli_char(pauli_from_code(pre))) + ") has " +
                              std::to_string(matches) + " solutions (conventions broken)");
        for (uint8_t n = 0; n < 3; ++n) t.fns_[index(post, pre, n)] = found[n];
      }
    }
    return t;
  }

  PhaseFn fn(Pauli post, Pauli pre, int slot) const {
    return fns_[index(pauli_code(post), pauli_code(pre), static_cast<uint8_t>(slot))];
  }

 private:
  static size_t index(uint8_t post, uint8_t pre, uint8_t slot) {
    return (size_t(post) << 4) | (size_t(pre) << 2) | slot;
  }

  std::array<PhaseFn, 64> fns_{};  // slot 3 addresses stay IDENT, unused
};

// Immutable process-wide tables, built once from the matrix oracle.
struct PauliTables {
  PropagationTable cz = PropagationTable::build(TwoQubitGateKind::CZ);
  PropagationTable cnot = PropagationTable::build(TwoQubitGateKind::CNOT);
  PropagationTable identity = PropagationTable::build(TwoQubitGateKind::IDENTITY);
  AbsorptionTable absorption = AbsorptionTable::build();

  const PropagationTable& for_kind(TwoQubitGateKind k) const {
    switch (k) {
      case TwoQubitGateKind::CZ:
        return cz;
      case TwoQubitGateKind::CNOT:
        return cnot;
      case TwoQubitGateKind::IDENTITY:
        return identity;
    }
    throw InternalError("unreachable gate kind");
  }
};

inline const PauliTables& tables() {
  static const PauliTables t;
  return t;
}

inline PropEntry propagate(TwoQubitGateKind kind, const PauliPair& p) {
  return tables().for_kind(kind).propagate(p);
}

// Rewrites one virtual-Z phase to absorb the given post/pre Paulis.
// Pure; the result is normalized to (-pi, pi].
inline double absorb(Pauli post, Pauli pre, int slot, double phi) {
  return apply_phase_fn(tables().absorption.fn(post, pre, slot), phi);
}

}  // namespace qrc

#endif
