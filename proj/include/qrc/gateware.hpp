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

#ifndef QRC_GATEWARE_HPP
#define QRC_GATEWARE_HPP

#include <limits>

#include "qrc/rc.hpp"

namespace qrc {

// ---------------------------------------------------------------------------
// Global LFSR
// ---------------------------------------------------------------------------

// Maximal-length feedback taps (polynomial exponents) per register width.
// Widths 2..64; a circuit of N qubits uses width 2N.
inline const std::vector<int>& lfsr_default_taps(int width) {
  static const std::map<int, std::vector<int>> table = {
      {2, {2, 1}},
      {3, {3, 2}},
      {4, {4, 3}},
      {5, {5, 3}},
      {6, {6, 5}},
      {7, {7, 6}},
      {8, {8, 6, 5, 4}},
      {9, {9, 5}},
      {10, {10, 7}},
      {11, {11, 9}},
      {12, {12, 6, 4, 1}},
      {13, {13, 4, 3, 1}},
      {14, {14, 5, 3, 1}},
      {15, {15, 14}},
      {16, {16, 15, 13, 4}},
      {17, {17, 14}},
      {18, {18, 11}},
      {19, {19, 6, 2, 1}},
      {20, {20, 17}},
      {21, {21, 19}},
      {22, {22, 21}},
      {23, {23, 18}},
      {24, {24, 23, 22, 17}},
      {25, {25, 22}},
      {26, {26, 6, 2, 1}},
      {27, {27, 5, 2, 1}},
      {28, {28, 25}},
      {29, {29, 27}},
      {30, {30, 6, 4, 1}},
      {31, {31, 28}},
      {32, {32, 22, 2, 1}},
      {33, {33, 20}},
      {34, {34, 27, 2, 1}},
      {35, {35, 33}},
      {36, {36, 25}},
      {37, {37, 5, 4, 3, 2, 1}},
      {38, {38, 6, 5, 1}},
      {39, {39, 35}},
      {40, {40, 38, 21, 19}},
      {41, {41, 38}},
      {42, {42, 41, 20, 19}},
      {43, {43, 42, 38, 37}},
      {44, {44, 43, 18, 17}},
      {45, {45, 44, 42, 41}},
      {46, {46, 45, 26, 25}},
      {47, {47, 42}},
      {48, {48, 47, 21, 20}},
      {49, {49, 40}},
      {50, {50, 49, 24, 23}},
      {51, {51, 50, 36, 35}},
      {52, {52, 49}},
      {53, {53, 52, 38, 37}},
      {54, {54, 53, 18, 17}},
      {55, {55, 31}},
      {56, {56, 55, 35, 34}},
      {57, {57, 50}},
      {58, {58, 39}},
      {59, {59, 58, 38, 37}},
      {60, {60, 59}},
      {61, {61, 60, 46, 45}},
      {62, {62, 61, 6, 5}},
      {63, {63, 62}},
      {64, {64, 63, 61, 60}},
  };
  auto it = table.find(width);
  if (it == table.end())
    throw ConfigError("no default LFSR taps for width " + std::to_string(width));
  return it->second;
}

// Fibonacci LFSR: state shifts left, the XOR of the tap bits (polynomial
// exponents, 1-based) enters at the bottom. With maximal taps the nonzero
// states form one cycle of period 2^w - 1.
class LfsrState {
 public:
  LfsrState(int width, uint64_t state, std::vector<int> taps)
      : width_(width), state_(state), taps_(std::move(taps)) {
    if (width < 2 || width > 64) throw ConfigError("LFSR width must be in [2, 64]");
    const uint64_t m = mask();
    state_ &= m;
    if (state_ == 0) throw ConfigError("LFSR state must be nonzero");
    for (int t : taps_)
      if (t < 1 || t > width) throw ConfigError("LFSR tap out of range");
  }

  LfsrState(int width, uint64_t state) : LfsrState(width, state, lfsr_default_taps(width)) {}

  // Derives a nonzero state from an arbitrary 64-bit seed.
  static LfsrState from_seed(int width, uint64_t seed) {
    LfsrState s(width, 1);
    uint64_t st = mix64(seed) & s.mask();
    if (st == 0) st = s.mask();
    s.state_ = st;
    return s;
  }

  uint64_t word() const { return state_; }
  int width() const { return width_; }
  const std::vector<int>& taps() const { return taps_; }
  uint64_t mask() const { return width_ == 64 ? ~uint64_t{0} : (uint64_t{1} << width_) - 1; }

  void advance() {
    uint64_t fb = 0;
    for (int t : taps_) fb ^= (state_ >> (t - 1)) & 1;
    state_ = ((state_ << 1) | fb) & mask();
  }

  LfsrState next() const {
    LfsrState s = *this;
    s.advance();
    return s;
  }

 private:
  int width_;
  uint64_t state_;
  std::vector<int> taps_;
};

// Word source backed by a shared LFSR; every latch event is one fresh draw.
class LfsrTwirlSource final : public TwirlWordSource {
 public:
  explicit LfsrTwirlSource(LfsrState& lfsr) : lfsr_(&lfsr) {}
  uint64_t next_word() override {
    lfsr_->advance();
    return lfsr_->word();
  }

 private:
  LfsrState* lfsr_;
};

// ---------------------------------------------------------------------------
// Per-qubit rc_module
// ---------------------------------------------------------------------------

// Latched twirl registers of one qubit's rc_module. Before the first latch
// both registers hold the identity.
struct RcModuleState {
  Pauli current = Pauli::I;
  Pauli previous = Pauli::I;
  double last_latch_ns = -std::numeric_limits<double>::infinity();
  bool latched = false;
};

// Latches the global word into the listed modules: previous <- current,
// current <- the qubit's 2-bit field. Timestamps must strictly increase per
// module; modules latched at the same timestamp see the identical word.
inline void latch(std::vector<RcModuleState>& modules, uint64_t word, double timestamp_ns,
                  const std::vector<size_t>& qubits) {
  for (size_t q : qubits) {
    if (q >= modules.size()) throw ProtocolError("latch on unknown qubit");
    RcModuleState& m = modules[q];
    if (timestamp_ns <= m.last_latch_ns)
      throw ProtocolError("latch timestamp not increasing on qubit " + std::to_string(q));
    m.previous = m.current;
    m.current = pauli_from_code(word >> (2 * q));
    m.last_latch_ns = timestamp_ns;
    m.latched = true;
  }
}

// Metadata accompanying an rc_alu instruction: the gate (if any) this qubit
// took part in during the immediately preceding two-qubit cycle, and whether
// the current twirl applies (it does not on the terminating cycle).
struct AluMetadata {
  TwoQubitGateKind prev_kind = TwoQubitGateKind::IDENTITY;
  size_t pair_q0 = 0, pair_q1 = 0;
  bool role_first = true;  // this core's qubit is pair_q0
  bool apply_post_twirl = true;
};

// Resolves one virtual-Z phase: P_pre is this qubit's component of the
// previous twirl pair propagated through the previous gate, P_post the
// freshly latched twirl. Identical arithmetic to the software pass.
inline double rc_alu(const RcModuleState& module, Pauli neighbor_previous, int slot, double phase,
                     const AluMetadata& meta) {
  if (!module.latched) throw ProtocolError("rc_alu before first latch");
  const PauliPair prev_pair = meta.role_first ? PauliPair(module.previous, neighbor_previous)
                                              : PauliPair(neighbor_previous, module.previous);
  const PropEntry inv = propagate(meta.prev_kind, prev_pair);
  const Pauli p_pre = meta.role_first ? inv.out.first : inv.out.second;
  const Pauli p_post = meta.apply_post_twirl ? module.current : Pauli::I;
  return absorb(p_post, p_pre, slot, phase);
}

// ---------------------------------------------------------------------------
// Instructions and compilation
// ---------------------------------------------------------------------------

enum class InstrKind : uint8_t { LatchRcCycle, RcAlu, PhaseWrite, PulseX90, Measure };

struct Instruction {
  InstrKind kind = InstrKind::PhaseWrite;
  double t_ns = 0;
  size_t cycle = 0;        // source SINGLE-cycle index
  int slot = 0;            // RcAlu / PhaseWrite
  double phase = 0;        // RcAlu operand / PhaseWrite value
  double duration_ns = 0;  // PulseX90 / Measure
  AluMetadata meta;        // RcAlu only
};

struct CoreProgram {
  size_t qubit = 0;
  std::vector<Instruction> instructions;
};

struct GateDurations {
  double single_cycle_ns = 32;  // both X90 pulses of one SINGLE cycle
  double two_cycle_ns = 200;
  double measure_ns = 1000;
};

// Instruction execution times and the resulting serial floor per cycle.
inline constexpr double kLatchNs = 6.0;
inline constexpr double kAluNs = 12.0;
inline constexpr double kRcFloorNs = kLatchNs + kAluNs;  // 18 ns

struct CycleTiming {
  size_t cycle = 0;
  CycleTag tag = CycleTag::SINGLE;
  double base_ns = 0;
  double added_latency_ns = 0;
};

struct TimingReport {
  std::vector<CycleTiming> cycles;
  double measure_ns = 0;

  double total_ns() const {
    double t = measure_ns;
    for (const auto& c : cycles) t += c.base_ns + c.added_latency_ns;
    return t;
  }
};

struct CompiledCircuit {
  Circuit source;
  GateDurations durations;
  bool rc_enabled = true;
  std::vector<CoreProgram> cores;  // one per qubit
  size_t latch_count = 0;          // latches per shot per core
};

// RC instructions overlap pulse playout; a SINGLE cycle only stretches when
// its pulses are shorter than the 18 ns latch + alu serial floor.
inline double added_latency_ns(const GateDurations& d, bool rc_enabled) {
  return rc_enabled ? std::max(0.0, kRcFloorNs - d.single_cycle_ns) : 0.0;
}

inline TimingReport shot_duration(const CompiledCircuit& cc) {
  if (cc.durations.single_cycle_ns <= 0 || cc.durations.two_cycle_ns <= 0 ||
      cc.durations.measure_ns < 0)
    throw ConfigError("gate durations must be positive");
  TimingReport r;
  r.measure_ns = cc.durations.measure_ns;
  for (size_t i = 0; i < cc.source.cycles.size(); ++i) {
    const bool single = cc.source.cycles[i].tag == CycleTag::SINGLE;
    CycleTiming t;
    t.cycle = i;
    t.tag = single ? CycleTag::SINGLE : CycleTag::TWO;
    t.base_ns = single ? cc.durations.single_cycle_ns : cc.durations.two_cycle_ns;
    t.added_latency_ns = single ? added_latency_ns(cc.durations, cc.rc_enabled) : 0.0;
    r.cycles.push_back(t);
  }
  return r;
}

// Lowers a circuit to per-qubit core programs. With RC enabled, every SINGLE
// cycle gets one LatchRcCycle (trigger timestamps equal across cores) and
// three RcAlu whose metadata names the preceding two-qubit gate on that
// qubit; with RC disabled, plain PhaseWrites carry the static phases.
inline CompiledCircuit compile_to_cores(const Circuit& circuit, const GateDurations& durations,
                                        bool rc_enabled = true) {
  require_valid(circuit);
  if (rc_enabled && circuit.width > kMaxTwirlWidth)
    throw CapacityError("twirl words limited to " + std::to_string(kMaxTwirlWidth) + " qubits");
  if (durations.single_cycle_ns <= 0 || durations.two_cycle_ns <= 0)
    throw ConfigError("gate durations must be positive");

  CompiledCircuit cc;
  cc.source = circuit;
  cc.durations = durations;
  cc.rc_enabled = rc_enabled;
  cc.cores.resize(circuit.width);

  const size_t n_singles = (circuit.cycles.size() + 1) / 2;
  const size_t per_cycle = rc_enabled ? 9 : 5;
  for (size_t q = 0; q < circuit.width; ++q) {
    cc.cores[q].qubit = q;
    cc.cores[q].instructions.reserve(n_singles * per_cycle + 1);
  }

  const double x90_ns = durations.single_cycle_ns / 2.0;
  const double add_ns = added_latency_ns(durations, rc_enabled);
  double t = 0;
  const Cycle* prev_two = nullptr;
  size_t singles_seen = 0;
  for (size_t ci = 0; ci < circuit.cycles.size(); ++ci) {
    const Cycle& cy = circuit.cycles[ci];
    if (cy.tag == CycleTag::TWO) {
      prev_two = &cy;
      t += durations.two_cycle_ns;
      continue;
    }
    const bool last_cycle = ci + 1 == circuit.cycles.size();
    for (size_t q = 0; q < circuit.width; ++q) {
      auto& prog = cc.cores[q].instructions;
      const PhaseTriple triple = cy.triple_for(q);
      AluMetadata meta;
      if (prev_two != nullptr) {
        if (auto g = prev_two->gate_on(q)) {
          meta.prev_kind = g->kind;
          meta.pair_q0 = g->q0;
          meta.pair_q1 = g->q1;
          meta.role_first = g->q0 == q;
        } else {
          meta.prev_kind = TwoQubitGateKind::IDENTITY;
          meta.pair_q0 = meta.pair_q1 = q;
        }
      } else {
        meta.pair_q0 = meta.pair_q1 = q;
      }
      meta.apply_post_twirl = !last_cycle;

      if (rc_enabled) {
        prog.push_back({InstrKind::LatchRcCycle, t, ci, 0, 0, 0, {}});
      }
      for (int slot = 0; slot < 3; ++slot) {
        if (rc_enabled) {
          prog.push_back(
              {InstrKind::RcAlu, t + kLatchNs + slot * kAluNs, ci, slot, triple.slot(slot), 0,
               meta});
        }
        prog.push_back({InstrKind::PhaseWrite, t + kLatchNs + slot * kAluNs, ci, slot,
                        triple.slot(slot), 0, {}});
        if (slot < 2) {
          prog.push_back({InstrKind::PulseX90, t + slot * x90_ns, ci, 0, 0, x90_ns, {}});
        }
      }
    }
    ++singles_seen;
    t += durations.single_cycle_ns + add_ns;
  }
  for (size_t q = 0; q < circuit.width; ++q) {
    cc.cores[q].instructions.push_back(
        {InstrKind::Measure, t, circuit.cycles.size(), 0, 0, durations.measure_ns, {}});
  }
  cc.latch_count = rc_enabled ? singles_seen : 0;
  return cc;
}

// ---------------------------------------------------------------------------
// Shot execution
// ---------------------------------------------------------------------------

struct ShotResult {
  Circuit resolved;
  TwirlRecord record;
  TimingReport timing;
};

// Runs one shot: walks all core programs in lockstep, drawing one word per
// synchronized latch timestamp and resolving every phase through rc_alu.
// With RC disabled the PhaseWrites replay the static phases unchanged.
inline ShotResult execute_shot(const CompiledCircuit& cc, TwirlWordSource& words) {
  const size_t width = cc.source.width;
  ShotResult out;
  out.resolved = cc.source;
  out.timing = shot_duration(cc);

  std::vector<RcModuleState> modules(width);
  std::vector<size_t> cursors(width, 0);
  std::vector<size_t> all_qubits(width);
  for (size_t q = 0; q < width; ++q) all_qubits[q] = q;

  // Per-cycle resolved triples are written straight into the output circuit.
  auto write_phase = [&](size_t cycle, size_t q, int slot, double value) {
    Cycle& cy = out.resolved.cycles[cycle];
    auto it = cy.singles.try_emplace(q, PhaseTriple::identity()).first;
    it->second.set_slot(slot, value);
  };

  std::vector<uint64_t> latched_words;
  latched_words.reserve(cc.latch_count);
  std::vector<double> pending_alu(width, 0);

  bool more = true;
  while (more) {
    more = false;
    // Synchronized latch: every core must be parked on a latch with the same
    // trigger timestamp (or all past their last instruction).
    bool any_latch = false;
    double latch_ts = 0;
    for (size_t q = 0; q < width; ++q) {
      const auto& prog = cc.cores[q].instructions;
      if (cursors[q] >= prog.size()) continue;
      const Instruction& in = prog[cursors[q]];
      if (in.kind == InstrKind::LatchRcCycle) {
        if (!any_latch) {
          any_latch = true;
          latch_ts = in.t_ns;
        } else if (in.t_ns != latch_ts) {
          throw ProtocolError("latch trigger timestamps diverge across cores");
        }
      }
    }
    if (any_latch) {
      const uint64_t word = words.next_word();
      latched_words.push_back(word);
      latch(modules, word, latch_ts, all_qubits);
      for (size_t q = 0; q < width; ++q) {
        const auto& prog = cc.cores[q].instructions;
        if (cursors[q] < prog.size() && prog[cursors[q]].kind == InstrKind::LatchRcCycle)
          ++cursors[q];
        else
          throw ProtocolError("core missed a synchronized latch");
      }
    }
    // Drain per-core instructions up to the next latch.
    for (size_t q = 0; q < width; ++q) {
      const auto& prog = cc.cores[q].instructions;
      while (cursors[q] < prog.size() && prog[cursors[q]].kind != InstrKind::LatchRcCycle) {
        const Instruction& in = prog[cursors[q]];
        switch (in.kind) {
          case InstrKind::RcAlu: {
            const size_t other =
                in.meta.role_first ? in.meta.pair_q1 : in.meta.pair_q0;
            pending_alu[q] = rc_alu(modules[q], modules[other].previous, in.slot, in.phase,
                                    in.meta);
            break;
          }
          case InstrKind::PhaseWrite:
            write_phase(in.cycle, q, in.slot, cc.rc_enabled ? pending_alu[q] : in.phase);
            break;
          case InstrKind::PulseX90:
          case InstrKind::Measure:
            break;
          case InstrKind::LatchRcCycle:
            break;  // unreachable
        }
        ++cursors[q];
      }
      if (cursors[q] < prog.size()) more = true;
    }
  }

  // Twirl record: the words latched before each TWO cycle (the terminating
  // latch is consumed but its twirl is forced to identity by the metadata).
  if (cc.rc_enabled) {
    size_t k = 0;
    for (const auto& cy : cc.source.cycles) {
      if (cy.tag != CycleTag::TWO) continue;
      out.record.cycles.push_back(detail::twirl_for_cycle(cy, width, latched_words[k]));
      ++k;
    }
  }
  return out;
}

inline ShotResult execute_shot(const CompiledCircuit& cc, LfsrState& lfsr) {
  LfsrTwirlSource src(lfsr);
  return execute_shot(cc, src);
}

// Runs a deterministic shot schedule: one LFSR seeded from `seed` advances
// continuously across shots, so shot i always sees the same words no matter
// how results are consumed.
inline std::vector<ShotResult> run_shots(const CompiledCircuit& cc, uint64_t seed, size_t shots) {
  LfsrState lfsr = LfsrState::from_seed(static_cast<int>(2 * cc.source.width), seed);
  std::vector<ShotResult> out;
  out.reserve(shots);
  for (size_t s = 0; s < shots; ++s) out.push_back(execute_shot(cc, lfsr));
  return out;
}

}  // namespace qrc

#endif
