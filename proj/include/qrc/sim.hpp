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

#ifndef QRC_SIM_HPP
#define QRC_SIM_HPP

#include <functional>

#include "qrc/gateware.hpp"

namespace qrc {

// ---------------------------------------------------------------------------
// Density matrices
// ---------------------------------------------------------------------------

struct DensityState {
  size_t width = 1;
  CMat rho;

  static DensityState zero_state(size_t width) {
    if (width > kMaxSimWidth)
      throw CapacityError("density simulation limited to width " + std::to_string(kMaxSimWidth));
    DensityState s;
    s.width = width;
    s.rho = CMat(size_t{1} << width, size_t{1} << width);
    s.rho(0, 0) = 1;
    return s;
  }

  void apply_unitary(const CMat& u) { rho = u * rho * u.adjoint(); }

  void apply_kraus(const std::vector<CMat>& ks) {
    CMat acc(rho.rows(), rho.cols());
    for (const auto& k : ks) acc += k * rho * k.adjoint();
    rho = acc;
  }

  // Checks Hermiticity and unit trace within 1e-12 and positivity within
  // `positivity_tol`. Violations are faults, never silently clipped.
  void check(double positivity_tol = 1e-10) const {
    if ((rho - rho.adjoint()).max_abs() > 1e-12)
      throw InternalError("density matrix lost Hermiticity");
    if (std::abs(rho.trace() - cx(1.0)) > 1e-12)
      throw InternalError("density matrix trace drifted from 1");
    const auto ev = hermitian_eigenvalues(rho);
    if (!ev.empty() && ev.front() < -positivity_tol)
      throw InternalError("density matrix developed a negative eigenvalue");
  }
};

// Tr(rho * P) for a Pauli acting on the given qubits.
inline double exact_expectation(const DensityState& s, const std::vector<Pauli>& paulis,
                                const std::vector<size_t>& qubits) {
  CMat op = CMat::identity(size_t{1} << s.width);
  for (size_t i = 0; i < paulis.size(); ++i)
    op = detail::embed1(pauli_matrix(paulis[i]), qubits[i], s.width) * op;
  const cx t = (op * s.rho).trace();
  return t.real();
}

// Exact outcome distribution over computational-basis strings. Qubit 0 is
// the leftmost character.
inline std::map<std::string, double> exact_distribution(const DensityState& s) {
  std::map<std::string, double> out;
  const size_t dim = size_t{1} << s.width;
  for (size_t b = 0; b < dim; ++b) {
    std::string key(s.width, '0');
    for (size_t q = 0; q < s.width; ++q)
      if ((b >> (s.width - 1 - q)) & 1) key[q] = '1';
    out[key] = std::max(0.0, s.rho(b, b).real());
  }
  return out;
}

// Computational-basis sampling from the diagonal.
inline Counts sample(const DensityState& s, size_t shots, RandomStream& rng) {
  const size_t dim = size_t{1} << s.width;
  std::vector<double> cdf(dim);
  double acc = 0;
  for (size_t b = 0; b < dim; ++b) {
    acc += std::max(0.0, s.rho(b, b).real());
    cdf[b] = acc;
  }
  Counts counts;
  for (size_t i = 0; i < shots; ++i) {
    const double u = rng.next_double() * acc;
    const size_t b = std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    const size_t bb = std::min(b, dim - 1);
    std::string key(s.width, '0');
    for (size_t q = 0; q < s.width; ++q)
      if ((bb >> (s.width - 1 - q)) & 1) key[q] = '1';
    counts[key] += 1.0;
  }
  return counts;
}

// Draws basis-state indices instead of strings (cheap path for experiments).
inline size_t sample_index(const DensityState& s, RandomStream& rng) {
  const size_t dim = size_t{1} << s.width;
  double acc = 0;
  const double u = rng.next_double();
  for (size_t b = 0; b < dim; ++b) {
    acc += std::max(0.0, s.rho(b, b).real());
    if (u < acc) return b;
  }
  return dim - 1;
}

// ---------------------------------------------------------------------------
// Noise model
// ---------------------------------------------------------------------------

struct CoherentTerm {
  PauliPair axis = PauliPair::from_str("ZZ");
  double theta = 0;
};

// Noise attached to every instance of one two-qubit gate kind. Errors follow
// the gate (gate-then-error convention, applied consistently everywhere).
struct TwoQubitNoise {
  std::optional<CoherentTerm> coherent;
  std::array<double, 16> stochastic{};  // index = PauliPair code; [0] unused
  double damping = 0;                   // per qubit of the pair, per cycle

  double stochastic_total() const {
    double t = 0;
    for (size_t i = 1; i < 16; ++i) t += stochastic[i];
    return t;
  }

  void validate() const {
    for (size_t i = 1; i < 16; ++i)
      if (stochastic[i] < 0 || stochastic[i] > 1)
        throw ConfigError("stochastic Pauli probabilities must lie in [0, 1]");
    if (stochastic[0] != 0) throw ConfigError("identity entry of the stochastic map must be 0");
    if (stochastic_total() > 1) throw ConfigError("stochastic Pauli probabilities exceed 1");
    if (damping < 0 || damping > 1) throw ConfigError("damping rate must lie in [0, 1]");
  }

  bool trivial() const {
    return !coherent.has_value() && stochastic_total() == 0 && damping == 0;
  }

  // Uniform 15-Pauli channel equal to global two-qubit depolarizing with
  // parameter lambda.
  static TwoQubitNoise depolarizing(double lambda) {
    TwoQubitNoise n;
    const double p = (1.0 - lambda) / 16.0;
    for (size_t i = 1; i < 16; ++i) n.stochastic[i] = p;
    return n;
  }
};

struct NoiseModel {
  std::map<TwoQubitGateKind, TwoQubitNoise> two_qubit;
  double x90_overrotation = 0;  // extra angle on every X90 pulse

  const TwoQubitNoise* for_kind(TwoQubitGateKind k) const {
    auto it = two_qubit.find(k);
    return it == two_qubit.end() ? nullptr : &it->second;
  }

  void validate() const {
    for (const auto& [k, n] : two_qubit) n.validate();
    if (!std::isfinite(x90_overrotation)) throw ConfigError("overrotation must be finite");
  }
};

// exp(-i theta/2 * P) for a two-qubit Pauli axis; P^2 = I gives the closed form.
inline CMat coherent_unitary(const CoherentTerm& c) {
  const CMat h = pauli_pair_matrix(c.axis);
  return CMat::identity(4) * cx(std::cos(c.theta / 2.0), 0) + h * cx(0, -std::sin(c.theta / 2.0));
}

inline std::vector<CMat> damping_kraus(double gamma) {
  CMat k0(2, 2), k1(2, 2);
  k0(0, 0) = 1;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return {k0, k1};
}

// ---------------------------------------------------------------------------
// Noisy circuit evaluation
// ---------------------------------------------------------------------------

// Applies a circuit with noise attached per the model: each two-qubit gate is
// followed by its kind's coherent error, stochastic Pauli channel, and
// per-qubit damping; X90 pulses over-rotate inside SINGLE cycles. Embedded
// operators are cached so per-shot loops stay cheap.
class CircuitSimulator {
 public:
  CircuitSimulator(size_t width, NoiseModel noise) : width_(width), noise_(std::move(noise)) {
    if (width > kMaxSimWidth)
      throw CapacityError("density simulation limited to width " + std::to_string(kMaxSimWidth));
    noise_.validate();
  }

  const NoiseModel& noise() const { return noise_; }

  DensityState run(const Circuit& circuit) const {
    if (circuit.width != width_) throw ConfigError("circuit width does not match simulator");
    require_valid(circuit);
    DensityState s = DensityState::zero_state(width_);
    for (const auto& cy : circuit.cycles) apply_cycle(s, cy);
    return s;
  }

  void apply_cycle(DensityState& s, const Cycle& cy) const {
    if (cy.tag == CycleTag::SINGLE) {
      CMat u = CMat::identity(1);
      for (size_t q = 0; q < width_; ++q) u = kron(u, single_qubit_unitary(cy.triple_for(q)));
      s.apply_unitary(u);
      return;
    }
    for (const auto& g : cy.gates) {
      s.apply_unitary(embedded_gate(g));
      const TwoQubitNoise* n = noise_.for_kind(g.kind);
      if (n == nullptr || n->trivial()) continue;
      if (n->coherent && n->coherent->theta != 0)
        s.apply_unitary(embedded_coherent(g, *n->coherent));
      if (n->stochastic_total() > 0) apply_stochastic(s, g, *n);
      if (n->damping > 0) {
        for (size_t q : {g.q0, g.q1}) s.apply_kraus(embedded_damping(q, n->damping));
      }
    }
  }

  // Single-qubit unitary including any X90 over-rotation.
  CMat single_qubit_unitary(const PhaseTriple& t) const {
    const CMat x = xrot(kPi / 2.0 + noise_.x90_overrotation);
    return zrot(t.phi2) * x * zrot(t.phi1) * x * zrot(t.phi0);
  }

 private:
  struct PairKey {
    TwoQubitGateKind kind;
    size_t q0, q1;
    auto operator<=>(const PairKey&) const = default;
  };

  const CMat& embedded_gate(const TwoQubitGate& g) const {
    const PairKey key{g.kind, g.q0, g.q1};
    auto it = gate_cache_.find(key);
    if (it == gate_cache_.end())
      it = gate_cache_
               .emplace(key, detail::embed2(two_qubit_gate_matrix(g.kind), g.q0, g.q1, width_))
               .first;
    return it->second;
  }

  const CMat& embedded_coherent(const TwoQubitGate& g, const CoherentTerm& c) const {
    const PairKey key{g.kind, g.q0, g.q1};
    auto it = coherent_cache_.find(key);
    if (it == coherent_cache_.end())
      it = coherent_cache_.emplace(key, detail::embed2(coherent_unitary(c), g.q0, g.q1, width_))
               .first;
    return it->second;
  }

  void apply_stochastic(DensityState& s, const TwoQubitGate& g, const TwoQubitNoise& n) const {
    const PairKey key{g.kind, g.q0, g.q1};
    auto it = pauli_cache_.find(key);
    if (it == pauli_cache_.end()) {
      std::vector<CMat> mats;
      mats.reserve(16);
      for (uint8_t c = 0; c < 16; ++c)
        mats.push_back(detail::embed2(pauli_pair_matrix(PauliPair::from_code(c)), g.q0, g.q1,
                                      width_));
      it = pauli_cache_.emplace(key, std::move(mats)).first;
    }
    CMat acc = s.rho * cx(1.0 - n.stochastic_total(), 0);
    for (uint8_t c = 1; c < 16; ++c) {
      if (n.stochastic[c] == 0) continue;
      const CMat& p = it->second[c];
      acc += p * s.rho * p * cx(n.stochastic[c], 0);
    }
    s.rho = acc;
  }

  const std::vector<CMat>& embedded_damping(size_t q, double gamma) const {
    auto it = damping_cache_.find(q);
    if (it == damping_cache_.end()) {
      std::vector<CMat> ks;
      for (const auto& k : damping_kraus(gamma)) ks.push_back(detail::embed1(k, q, width_));
      it = damping_cache_.emplace(q, std::move(ks)).first;
    }
    return it->second;
  }

  size_t width_;
  NoiseModel noise_;
  mutable std::map<PairKey, CMat> gate_cache_;
  mutable std::map<PairKey, CMat> coherent_cache_;
  mutable std::map<PairKey, std::vector<CMat>> pauli_cache_;
  mutable std::map<size_t, std::vector<CMat>> damping_cache_;
};

inline DensityState apply_circuit(const Circuit& circuit, const NoiseModel& noise) {
  return CircuitSimulator(circuit.width, noise).run(circuit);
}

// ---------------------------------------------------------------------------
// Pauli transfer matrices
// ---------------------------------------------------------------------------

// A two-qubit channel as an action on 4x4 density matrices.
using TwoQubitChannel = std::function<CMat(const CMat&)>;

using Ptm = RMat;  // 16x16, entry (i,j) = Tr[P_i L(P_j)] / 4

inline Ptm ptm_of(const TwoQubitChannel& channel) {
  Ptm r(16, 16);
  for (uint8_t j = 0; j < 16; ++j) {
    const CMat out = channel(pauli_pair_matrix(PauliPair::from_code(j)));
    for (uint8_t i = 0; i < 16; ++i) {
      const cx t = (pauli_pair_matrix(PauliPair::from_code(i)) * out).trace() * cx(0.25, 0);
      if (std::abs(t.imag()) > 1e-10) throw InternalError("PTM entry has an imaginary part");
      r(i, j) = t.real();
    }
  }
  return r;
}

inline TwoQubitChannel ideal_channel(TwoQubitGateKind kind) {
  const CMat g = two_qubit_gate_matrix(kind);
  return [g](const CMat& rho) { return g * rho * g.adjoint(); };
}

// Gate followed by its noise terms, on the gate's own two-qubit space
// (first qubit of the pair = high bit).
inline TwoQubitChannel noisy_channel(TwoQubitGateKind kind, const NoiseModel& noise) {
  const CMat g = two_qubit_gate_matrix(kind);
  const TwoQubitNoise* n = noise.for_kind(kind);
  const TwoQubitNoise local = n ? *n : TwoQubitNoise{};
  local.validate();
  const CMat coh = local.coherent ? coherent_unitary(*local.coherent) : CMat::identity(4);
  std::vector<CMat> damp0, damp1;
  if (local.damping > 0) {
    const CMat eye2 = CMat::identity(2);
    for (const auto& k : damping_kraus(local.damping)) {
      damp0.push_back(kron(k, eye2));
      damp1.push_back(kron(eye2, k));
    }
  }
  return [g, coh, local, damp0, damp1](const CMat& rho_in) {
    CMat rho = coh * (g * rho_in * g.adjoint()) * coh.adjoint();
    const double total = local.stochastic_total();
    if (total > 0) {
      CMat acc = rho * cx(1.0 - total, 0);
      for (uint8_t c = 1; c < 16; ++c) {
        if (local.stochastic[c] == 0) continue;
        const CMat p = pauli_pair_matrix(PauliPair::from_code(c));
        acc += p * rho * p * cx(local.stochastic[c], 0);
      }
      rho = acc;
    }
    for (const auto* ks : {&damp0, &damp1}) {
      if (ks->empty()) continue;
      CMat acc(4, 4);
      for (const auto& k : *ks) acc += k * rho * k.adjoint();
      rho = acc;
    }
    return rho;
  };
}

inline Ptm ideal_ptm(TwoQubitGateKind kind) { return ptm_of(ideal_channel(kind)); }

inline Ptm error_ptm(const Ptm& noisy, const Ptm& ideal) { return noisy * inverse(ideal); }

// Exact average over all 16 Pauli twirls of (inversion o noisy-gate o twirl),
// composed with the inverse ideal gate: the error PTM of the perfectly
// twirled gate. Diagonal (within numerics) for any CPTP noise.
inline Ptm twirl_average(TwoQubitGateKind kind, const NoiseModel& noise) {
  const TwoQubitChannel noisy = noisy_channel(kind, noise);
  Ptm sum(16, 16);
  for (uint8_t c = 0; c < 16; ++c) {
    const CMat p = pauli_pair_matrix(PauliPair::from_code(c));
    const CMat pinv = pauli_pair_matrix(propagate(kind, PauliPair::from_code(c)).out);
    const TwoQubitChannel dressed = [&noisy, p, pinv](const CMat& rho) {
      return pinv * noisy(p * rho * p) * pinv;
    };
    sum += ptm_of(dressed);
  }
  const Ptm twirled = sum * (1.0 / 16.0);
  return error_ptm(twirled, ideal_ptm(kind));
}

inline Ptm untwirled_error_ptm(TwoQubitGateKind kind, const NoiseModel& noise) {
  return error_ptm(ptm_of(noisy_channel(kind, noise)), ideal_ptm(kind));
}

inline double max_offdiagonal(const RMat& m) {
  double v = 0;
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j)
      if (i != j) v = std::max(v, std::abs(m(i, j)));
  return v;
}

// 1 - Tr(error PTM) / d^2: equals (1 - lambda)(d^2 - 1)/d^2 for global
// depolarizing with parameter lambda.
inline double process_infidelity_of_error_ptm(const Ptm& err) {
  return 1.0 - err.trace() / static_cast<double>(err.rows());
}

// ---------------------------------------------------------------------------
// Error generators
// ---------------------------------------------------------------------------

struct ErrorGenerator {
  RMat matrix;  // 16x16 generator L with expm(L) * ideal = noisy
};

// Principal-branch logarithm of (noisy * ideal^-1). Spectra on the closed
// negative real axis have no principal log; such inputs are rejected rather
// than regularized.
inline ErrorGenerator error_generator(const Ptm& noisy, const Ptm& ideal) {
  const RMat err = error_ptm(noisy, ideal);
  const CMat ec = to_complex(err);
  for (const cx& ev : eigenvalues(ec)) {
    if (std::abs(ev) < 1e-14 || (ev.real() < 0 && std::abs(ev.imag()) <= 1e-12 * std::abs(ev)))
      throw ConfigError("error generator undefined at this noise strength");
  }
  const CMat l = logm_principal(ec);
  const RMat lr = to_real(l, 1e-8);
  // Independent reconstruction check (the log used a different route).
  const RMat recon = to_real(expm(to_complex(lr)), 1e-8) * ideal;
  if ((recon - noisy).max_abs() > 1e-9)
    throw InternalError("error generator failed to reproduce the noisy gate");
  return {lr};
}

}  // namespace qrc

#endif
