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

#include "qrc/pauli.hpp"

#include "doctest.h"

using namespace qrc;

namespace {

// Brute-force conjugation oracle: G P G^dag matched against all 32 signed
// Pauli pairs by dense 4x4 algebra. Independent of the table construction's
// result caching; used to cross-check every entry.
PropEntry conjugation_oracle(TwoQubitGateKind kind, const PauliPair& p) {
  const CMat g = two_qubit_gate_matrix(kind);
  const CMat conj = g * pauli_pair_matrix(p) * g.adjoint();
  for (uint8_t oc = 0; oc < 16; ++oc) {
    for (int sign : {+1, -1}) {
      if ((conj - pauli_pair_matrix(PauliPair::from_code(oc)) * cx(double(sign), 0)).max_abs() <
          1e-12)
        return {PauliPair::from_code(oc), sign};
    }
  }
  FAIL("conjugation left the signed Pauli group");
  return {};
}

}  // namespace

TEST_SUITE("pauli") {

TEST_CASE("pauli codes round-trip") {
  for (uint8_t c = 0; c < 4; ++c) CHECK(pauli_code(pauli_from_code(c)) == c);
  for (uint8_t c = 0; c < 16; ++c) CHECK(PauliPair::from_code(c).code() == c);
  CHECK(PauliPair::from_str("XZ").first == Pauli::X);
  CHECK(PauliPair::from_str("XZ").second == Pauli::Z);
  CHECK_THROWS_AS((void)PauliPair::from_str("XQ"), ConfigError);
}

TEST_CASE("propagation through IDENTITY is trivial") {
  for (uint8_t c = 0; c < 16; ++c) {
    const PropEntry e = propagate(TwoQubitGateKind::IDENTITY, PauliPair::from_code(c));
    CHECK(e.out.code() == c);
    CHECK(e.sign == +1);
  }
}

TEST_CASE("propagation table equals brute-force conjugation, exhaustively") {
  for (TwoQubitGateKind kind : {TwoQubitGateKind::CZ, TwoQubitGateKind::CNOT}) {
    for (uint8_t c = 0; c < 16; ++c) {
      const PauliPair p = PauliPair::from_code(c);
      const PropEntry want = conjugation_oracle(kind, p);
      const PropEntry got = propagate(kind, p);
      CHECK(got.out == want.out);
      CHECK(got.sign == want.sign);
    }
  }
}

TEST_CASE("pinned propagation facts") {
  CHECK(propagate(TwoQubitGateKind::CZ, PauliPair::from_str("II")).out == PauliPair::from_str("II"));
  // CZ is diagonal, so it commutes with Z-type pairs.
  CHECK(propagate(TwoQubitGateKind::CZ, PauliPair::from_str("ZZ")).out == PauliPair::from_str("ZZ"));
  CHECK(propagate(TwoQubitGateKind::CZ, PauliPair::from_str("ZZ")).sign == +1);
  // X picks up the neighbor's Z through CZ.
  CHECK(propagate(TwoQubitGateKind::CZ, PauliPair::from_str("XI")).out == PauliPair::from_str("XZ"));
  // CNOT copies Z from target to control.
  const PropEntry e = propagate(TwoQubitGateKind::CNOT, PauliPair::from_str("IZ"));
  CHECK(e.out == conjugation_oracle(TwoQubitGateKind::CNOT, PauliPair::from_str("IZ")).out);
  CHECK(e.out == PauliPair::from_str("ZZ"));
}

TEST_CASE("propagation is a bijection and an involution for self-inverse gates") {
  for (TwoQubitGateKind kind : {TwoQubitGateKind::CZ, TwoQubitGateKind::CNOT}) {
    uint16_t seen = 0;
    for (uint8_t c = 0; c < 16; ++c) {
      const PropEntry e1 = propagate(kind, PauliPair::from_code(c));
      seen |= uint16_t(1) << e1.out.code();
      const PropEntry e2 = propagate(kind, e1.out);
      CHECK(e2.out.code() == c);
      CHECK(e1.sign * e2.sign == +1);
    }
    CHECK(seen == 0xFFFF);
  }
}

TEST_CASE("phase functions") {
  CHECK(apply_phase_fn(PhaseFn::IDENT, 0.7) == 0.7);
  CHECK(apply_phase_fn(PhaseFn::NEG, 0.7) == -0.7);
  CHECK(apply_phase_fn(PhaseFn::PI_MINUS, 0.7) == doctest::Approx(kPi - 0.7));
  CHECK(apply_phase_fn(PhaseFn::PI_PLUS, 0.7) == doctest::Approx(0.7 - kPi));

  SUBCASE("closed under composition modulo 2 pi") {
    RandomStream rng(31);
    const PhaseFn fns[] = {PhaseFn::IDENT, PhaseFn::NEG, PhaseFn::PI_MINUS, PhaseFn::PI_PLUS};
    for (PhaseFn f : fns) {
      for (PhaseFn g : fns) {
        // Find a tag matching f(g(.)) on a batch of samples.
        int matches = 0;
        for (PhaseFn h : fns) {
          bool ok = true;
          for (int i = 0; i < 50 && ok; ++i) {
            const double phi = rng.uniform(-3, 3);
            const double a = apply_phase_fn(f, apply_phase_fn(g, phi));
            const double b = apply_phase_fn(h, phi);
            ok = std::abs(normalize_angle(a - b)) < 1e-12 ||
                 std::abs(std::abs(normalize_angle(a - b)) - kTwoPi) < 1e-12;
          }
          if (ok) ++matches;
        }
        CHECK(matches >= 1);
      }
    }
  }
}

TEST_CASE("pinned absorption entries") {
  const auto& t = tables().absorption;
  for (int n = 0; n < 3; ++n) CHECK(t.fn(Pauli::I, Pauli::I, n) == PhaseFn::IDENT);
  // Z on the left is Z(pi) up to phase: only the last slot shifts.
  CHECK(t.fn(Pauli::Z, Pauli::I, 0) == PhaseFn::IDENT);
  CHECK(t.fn(Pauli::Z, Pauli::I, 1) == PhaseFn::IDENT);
  CHECK(t.fn(Pauli::Z, Pauli::I, 2) == PhaseFn::PI_PLUS);
  CHECK(absorb(Pauli::I, Pauli::I, 1, 0.7) == 0.7);
  CHECK(absorb(Pauli::Z, Pauli::I, 2, 0.5) == doctest::Approx(normalize_angle(0.5 + kPi)));
}

TEST_CASE("absorption reproduces P_post U3 P_pre for every pair") {
  RandomStream rng(32);
  for (uint8_t post = 0; post < 4; ++post) {
    for (uint8_t pre = 0; pre < 4; ++pre) {
      const CMat pm = pauli_matrix(pauli_from_code(post));
      const CMat qm = pauli_matrix(pauli_from_code(pre));
      for (int rep = 0; rep < 200; ++rep) {
        const PhaseTriple in(rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi),
                             rng.uniform(-kPi, kPi));
        PhaseTriple out;
        for (int n = 0; n < 3; ++n)
          out.set_slot(n, absorb(pauli_from_code(post), pauli_from_code(pre), n, in.slot(n)));
        CHECK(deviation_up_to_phase(pm * triple_unitary(in) * qm, triple_unitary(out)) < 1e-10);
      }
    }
  }
}

TEST_CASE("single-Pauli absorption checked against named-gate matrices") {
  // (X, Y) exercise mixed left/right absorption on a random phase.
  RandomStream rng(33);
  for (int rep = 0; rep < 20; ++rep) {
    const double phi = rng.uniform(-kPi, kPi);
    const PhaseTriple in(phi, -phi / 2, phi / 3);
    PhaseTriple out;
    for (int n = 0; n < 3; ++n) out.set_slot(n, absorb(Pauli::X, Pauli::Y, n, in.slot(n)));
    const CMat target = pauli_matrix(Pauli::X) * triple_unitary(in) * pauli_matrix(Pauli::Y);
    CHECK(deviation_up_to_phase(target, triple_unitary(out)) < 1e-10);
  }
}

}  // TEST_SUITE
