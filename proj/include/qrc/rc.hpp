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

#ifndef QRC_RC_HPP
#define QRC_RC_HPP

#include <cstdint>
#include <map>

#include "qrc/pauli.hpp"

namespace qrc {

// Supplies one twirl word (2 bits per qubit, qubit q in bits [2q, 2q+1])
// per two-qubit gate cycle. Implementations: seeded PRNG (software pass),
// LFSR (gateware emulation), fixed/constant stubs (tests, differentials).
class TwirlWordSource {
 public:
  virtual ~TwirlWordSource() = default;
  virtual uint64_t next_word() = 0;
};

class RngTwirlSource final : public TwirlWordSource {
 public:
  RngTwirlSource(RandomStream stream, size_t width) : stream_(stream), width_(width) {}
  uint64_t next_word() override { return stream_.next_bits(static_cast<int>(2 * width_)); }

 private:
  RandomStream stream_;
  size_t width_;
};

// Replays a fixed word list; exhausted entries fall back to zero (identity).
class FixedTwirlSource final : public TwirlWordSource {
 public:
  explicit FixedTwirlSource(std::vector<uint64_t> words) : words_(std::move(words)) {}
  uint64_t next_word() override { return pos_ < words_.size() ? words_[pos_++] : 0; }

 private:
  std::vector<uint64_t> words_;
  size_t pos_ = 0;
};

class ConstantTwirlSource final : public TwirlWordSource {
 public:
  explicit ConstantTwirlSource(uint64_t word) : word_(word) {}
  uint64_t next_word() override { return word_; }

 private:
  uint64_t word_;
};

// The sampled twirl and computed inversion Paulis for every two-qubit cycle
// of one randomization. Idle qubits are twirled too; their Pauli propagates
// through the identity and is its own inversion image.
struct TwirlRecord {
  struct CycleTwirl {
    uint64_t word = 0;
    std::vector<Pauli> twirl;      // indexed by qubit
    std::vector<Pauli> inversion;  // indexed by qubit
    bool operator==(const CycleTwirl& o) const = default;
  };
  std::vector<CycleTwirl> cycles;

  bool operator==(const TwirlRecord& o) const = default;
};

// A randomization: same cycle count, same two-qubit gates, same pulse
// structure as the input; only SINGLE-cycle phase triples differ.
struct RandomizedCircuit {
  Circuit circuit;
  TwirlRecord record;
};

namespace detail {

inline TwirlRecord::CycleTwirl twirl_for_cycle(const Cycle& two_cycle, size_t width,
                                               uint64_t word) {
  TwirlRecord::CycleTwirl ct;
  ct.word = word;
  ct.twirl.resize(width);
  ct.inversion.resize(width);
  for (size_t q = 0; q < width; ++q) {
    ct.twirl[q] = pauli_from_code(word >> (2 * q));
    ct.inversion[q] = ct.twirl[q];  // idle default: identity-kind propagation
  }
  for (const auto& g : two_cycle.gates) {
    const PropEntry e = propagate(g.kind, PauliPair(ct.twirl[g.q0], ct.twirl[g.q1]));
    // The sign is a global phase at the circuit level and is dropped here.
    ct.inversion[g.q0] = e.out.first;
    ct.inversion[g.q1] = e.out.second;
  }
  return ct;
}

}  // namespace detail

// Rewrites a SINGLE cycle so each qubit's triple absorbs P_post (the next
// twirl) on the left and P_pre (the previous inversion) on the right.
// All qubits become explicit: an idle qubit's identity triple is rewritten
// like any other, leaving its two X90 pulses in place.
inline Cycle absorb_into_cycle(const Cycle& single, size_t width,
                               const std::vector<Pauli>* post, const std::vector<Pauli>* pre) {
  Cycle out = Cycle::single();
  for (size_t q = 0; q < width; ++q) {
    const Pauli p_post = post ? (*post)[q] : Pauli::I;
    const Pauli p_pre = pre ? (*pre)[q] : Pauli::I;
    const PhaseTriple t = single.triple_for(q);
    PhaseTriple r;
    for (int n = 0; n < 3; ++n) r.set_slot(n, absorb(p_post, p_pre, n, t.slot(n)));
    out.singles[q] = r;
  }
  return out;
}

// Twirl words carry 2 bits per qubit in a 64-bit word.
inline constexpr size_t kMaxTwirlWidth = 32;

// The reference software randomized-compiling pass. The output circuit is
// logically equivalent to the input up to a global phase.
inline RandomizedCircuit randomize_with_source(const Circuit& circuit, TwirlWordSource& words) {
  require_valid(circuit);
  if (circuit.width > kMaxTwirlWidth)
    throw CapacityError("twirl words limited to " + std::to_string(kMaxTwirlWidth) + " qubits");
  RandomizedCircuit out;
  out.circuit = circuit;
  const size_t d = circuit.depth();
  if (d == 0) return out;

  out.record.cycles.reserve(d);
  for (const auto& cy : circuit.cycles)
    if (cy.tag == CycleTag::TWO)
      out.record.cycles.push_back(detail::twirl_for_cycle(cy, circuit.width, words.next_word()));

  size_t single_index = 0;  // j-th SINGLE cycle absorbs (twirl_j, inversion_{j-1})
  for (auto& cy : out.circuit.cycles) {
    if (cy.tag != CycleTag::SINGLE) continue;
    const std::vector<Pauli>* post =
        single_index < d ? &out.record.cycles[single_index].twirl : nullptr;
    const std::vector<Pauli>* pre =
        single_index > 0 ? &out.record.cycles[single_index - 1].inversion : nullptr;
    cy = absorb_into_cycle(cy, circuit.width, post, pre);
    ++single_index;
  }
  return out;
}

inline RandomizedCircuit randomize(const Circuit& circuit, RandomStream rng) {
  RngTwirlSource src(rng, circuit.width);
  return randomize_with_source(circuit, src);
}

// n independent randomizations. Member i draws from the substream derived
// from (seed, i), so the ensemble is order-independent.
inline std::vector<RandomizedCircuit> rc_ensemble(const Circuit& circuit, size_t n,
                                                  uint64_t seed) {
  if (n < 1) throw ConfigError("ensemble size must be at least 1");
  const RandomStream base(seed);
  std::vector<RandomizedCircuit> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(randomize(circuit, base.derive(i)));
  return out;
}

// Every twirl assignment exactly once: 4^(width * depth) randomizations.
inline std::vector<RandomizedCircuit> rc_exhaustive(const Circuit& circuit) {
  require_valid(circuit);
  const size_t d = circuit.depth();
  const size_t bits = 2 * circuit.width * d;
  if (bits > 16)
    throw CapacityError("exhaustive enumeration limited to width * depth <= 8 (got " +
                        std::to_string(bits / 2) + ")");
  const uint64_t total = uint64_t{1} << bits;
  const uint64_t word_mask = (uint64_t{1} << (2 * circuit.width)) - 1;
  std::vector<RandomizedCircuit> out;
  out.reserve(total);
  for (uint64_t idx = 0; idx < total; ++idx) {
    std::vector<uint64_t> words(d);
    for (size_t k = 0; k < d; ++k) words[k] = (idx >> (2 * circuit.width * k)) & word_mask;
    FixedTwirlSource src(words);
    out.push_back(randomize_with_source(circuit, src));
  }
  return out;
}

// Outcome histogram. Values are doubles so exact-probability results can be
// merged with the same machinery as integer shot counts.
using Counts = std::map<std::string, double>;

inline Counts merge_counts(const std::vector<Counts>& results) {
  if (results.empty()) return {};
  size_t key_len = std::string::npos;
  Counts out;
  for (const auto& r : results) {
    for (const auto& [k, v] : r) {
      if (key_len == std::string::npos) key_len = k.size();
      if (k.size() != key_len)
        throw ConfigError("cannot merge outcome maps with mismatched widths");
      out[k] += v;
    }
  }
  return out;
}

}  // namespace qrc

#endif
