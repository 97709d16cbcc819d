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

#ifndef QRC_EXPERIMENTS_HPP
#define QRC_EXPERIMENTS_HPP

#include <atomic>
#include <bit>
#include <chrono>
#include <cstdlib>
#include <thread>

#include "qrc/sim.hpp"

namespace qrc {

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

// Worker count for experiment grids: QRC_THREADS, default 1. Results are
// stored by index, so any thread count yields identical output.
inline unsigned experiment_threads() {
  if (const char* env = std::getenv("QRC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

template <class Fn>
void parallel_for(size_t n, Fn&& fn) {
  const unsigned workers = std::min<size_t>(experiment_threads(), n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

// Random circuit in canonical alternating form: every qubit gets a fresh
// random triple each SINGLE cycle; each TWO cycle pairs up qubits from a
// shuffle (odd qubit idles; occasionally the cycle is left empty).
inline Circuit random_circuit(size_t width, size_t depth, RandomStream& rng,
                              bool mixed_kinds = true) {
  Circuit c;
  c.width = width;
  for (size_t k = 0;; ++k) {
    Cycle s = Cycle::single();
    for (size_t q = 0; q < width; ++q)
      s.singles[q] =
          PhaseTriple(rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi));
    c.cycles.push_back(std::move(s));
    if (k == depth) break;
    Cycle t = Cycle::two();
    if (width >= 2 && rng.below(8) != 0) {
      std::vector<size_t> order(width);
      for (size_t q = 0; q < width; ++q) order[q] = q;
      for (size_t q = width; q > 1; --q) std::swap(order[q - 1], order[rng.below(q)]);
      for (size_t i = 0; i + 1 < width; i += 2) {
        const TwoQubitGateKind kind = (mixed_kinds && rng.below(2) == 0)
                                          ? TwoQubitGateKind::CNOT
                                          : TwoQubitGateKind::CZ;
        t.gates.emplace_back(kind, order[i], order[i + 1]);
      }
    }
    c.cycles.push_back(std::move(t));
  }
  return c;
}

inline double measure_wall_seconds(const std::function<void()>& fn, double min_seconds = 0.05) {
  using clock = std::chrono::steady_clock;
  size_t iters = 0;
  const auto t0 = clock::now();
  double elapsed = 0;
  do {
    fn();
    ++iters;
    elapsed = std::chrono::duration<double>(clock::now() - t0).count();
  } while (elapsed < min_seconds);
  return elapsed / static_cast<double>(iters);
}

// ---------------------------------------------------------------------------
// Cycle benchmarking
// ---------------------------------------------------------------------------

enum class RcMode { SoftwareRc, GatewareFrc };

inline const char* rc_mode_name(RcMode m) {
  return m == RcMode::SoftwareRc ? "software-rc" : "gateware-frc";
}

inline RcMode rc_mode_from_name(const std::string& s) {
  if (s == "software-rc") return RcMode::SoftwareRc;
  if (s == "gateware-frc") return RcMode::GatewareFrc;
  throw ConfigError("unknown RC mode '" + s + "'");
}

struct CbConfig {
  TwoQubitGateKind gate = TwoQubitGateKind::CZ;
  size_t q0 = 0, q1 = 1;
  // Default decay set: the nine weight-respecting X/Y/Z terms.
  std::vector<PauliPair> paulis = {
      PauliPair::from_str("XI"), PauliPair::from_str("IX"), PauliPair::from_str("XX"),
      PauliPair::from_str("YI"), PauliPair::from_str("IY"), PauliPair::from_str("YY"),
      PauliPair::from_str("ZI"), PauliPair::from_str("IZ"), PauliPair::from_str("ZZ")};
  std::vector<int> depths = {2, 8, 32};
  int shots_per_depth = 1000;  // per Pauli term
  RcMode mode = RcMode::GatewareFrc;
  int n_randomizations = 30;  // software mode only

  void validate() const {
    if (q0 == q1) throw ConfigError("target pair qubits must be distinct");
    if (paulis.empty()) throw ConfigError("at least one Pauli decay term required");
    for (const auto& p : paulis)
      if (p.code() == 0) throw ConfigError("II is not a decay term");
    if (depths.size() < 2) throw ConfigError("at least two depths required");
    for (int m : depths)
      if (m < 2 || m % 2 != 0) throw ConfigError("depths must be even and at least 2");
    if (shots_per_depth < 1) throw ConfigError("shots_per_depth must be at least 1");
    if (mode == RcMode::SoftwareRc && n_randomizations < 1)
      throw ConfigError("n_randomizations must be at least 1");
  }
};

// One benchmark circuit: prepare the +1 eigenstate of P, run m interleaved
// target cycles with twirl sites between them, rotate the propagated Pauli
// back onto the computational axis.
struct CbCircuit {
  PauliPair prepared;
  int depth = 0;
  Circuit circuit;
  PauliPair measured;          // P propagated through m target gates
  int sign = +1;               // accumulated conjugation sign
  std::vector<size_t> support; // circuit qubits measured with Z
};

namespace detail {

inline PhaseTriple prep_triple(Pauli p) {
  switch (p) {
    case Pauli::I:
    case Pauli::Z:
      return PhaseTriple::identity();
    case Pauli::X:
      return phases_from_euler(kPi / 2, 0, 0);  // |0> -> |+>
    case Pauli::Y:
      return phases_from_euler(kPi / 2, kPi / 2, 0);  // |0> -> |+i>
  }
  return PhaseTriple::identity();
}

inline PhaseTriple unprep_triple(Pauli p) {
  switch (p) {
    case Pauli::I:
    case Pauli::Z:
      return PhaseTriple::identity();
    default:
      return phases_from_unitary(triple_unitary(prep_triple(p)).adjoint());
  }
}

}  // namespace detail

inline std::vector<CbCircuit> build_cb_circuits(const CbConfig& cfg) {
  cfg.validate();
  const size_t width = std::max(cfg.q0, cfg.q1) + 1;
  std::vector<CbCircuit> out;
  out.reserve(cfg.paulis.size() * cfg.depths.size());
  for (const PauliPair& p : cfg.paulis) {
    for (int m : cfg.depths) {
      CbCircuit cb;
      cb.prepared = p;
      cb.depth = m;
      cb.circuit.width = width;

      Cycle prep = Cycle::single();
      prep.singles[cfg.q0] = detail::prep_triple(p.first);
      prep.singles[cfg.q1] = detail::prep_triple(p.second);
      cb.circuit.cycles.push_back(std::move(prep));

      PauliPair running = p;
      int sign = +1;
      for (int k = 0; k < m; ++k) {
        cb.circuit.cycles.push_back(
            Cycle::two({TwoQubitGate(cfg.gate, cfg.q0, cfg.q1)}));
        const PropEntry e = propagate(cfg.gate, running);
        running = e.out;
        sign *= e.sign;
        Cycle mid = Cycle::single();
        if (k + 1 == m) {
          mid.singles[cfg.q0] = detail::unprep_triple(running.first);
          mid.singles[cfg.q1] = detail::unprep_triple(running.second);
        }
        cb.circuit.cycles.push_back(std::move(mid));
      }
      cb.measured = running;
      cb.sign = sign;
      if (running.first != Pauli::I) cb.support.push_back(cfg.q0);
      if (running.second != Pauli::I) cb.support.push_back(cfg.q1);
      out.push_back(std::move(cb));
    }
  }
  return out;
}

// +/-1 estimator of the propagated Pauli from one computational outcome.
inline int cb_outcome_value(const CbCircuit& cb, size_t outcome_index) {
  int parity = 0;
  const size_t width = cb.circuit.width;
  for (size_t q : cb.support) parity ^= static_cast<int>((outcome_index >> (width - 1 - q)) & 1);
  return cb.sign * (parity ? -1 : +1);
}

struct FitPoint {
  double m = 0;
  double mean = 0;
  double se = 0;
};

struct FitResult {
  double amplitude = 0;
  double decay = 0;
  double amplitude_err = 0;
  double decay_err = 0;
};

// Weighted least squares of mean = A * p^m by Gauss-Newton with step
// halving; parameter errors from the fit covariance.
inline FitResult fit_exponential(const std::vector<FitPoint>& pts) {
  std::vector<double> depths;
  for (const auto& pt : pts) {
    if (std::abs(pt.mean) > 1 + 1e-9) throw ConfigError("decay means must lie in [-1, 1]");
    if (std::find(depths.begin(), depths.end(), pt.m) == depths.end()) depths.push_back(pt.m);
  }
  if (depths.size() < 2) throw ConfigError("fit needs at least two distinct depths");

  const double floor_se = 1e-12;
  bool any_se = false;
  for (const auto& pt : pts) any_se = any_se || pt.se > 0;

  // Log-linear initialization on points away from zero.
  double a = 1.0, p = 0.9;
  {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& pt : pts) {
      if (std::abs(pt.mean) < 1e-12) continue;
      const double y = std::log(std::abs(pt.mean));
      sw += 1;
      sx += pt.m;
      sy += y;
      sxx += pt.m * pt.m;
      sxy += pt.m * y;
    }
    const double det = sw * sxx - sx * sx;
    if (sw >= 2 && std::abs(det) > 1e-12) {
      const double slope = (sw * sxy - sx * sy) / det;
      const double icept = (sy * sxx - sx * sxy) / det;
      p = std::exp(std::min(slope, 0.5));
      a = std::exp(std::min(icept, 2.0));
      if (pts.front().mean < 0) a = -a;
    }
  }

  auto ssr = [&](double aa, double pp) {
    double s = 0;
    for (const auto& pt : pts) {
      const double sigma = std::max(pt.se, floor_se);
      const double r = (aa * std::pow(pp, pt.m) - pt.mean) / (any_se ? sigma : 1.0);
      s += r * r;
    }
    return s;
  };

  double best = ssr(a, p);
  for (int iter = 0; iter < 200; ++iter) {
    // Normal equations for the 2-parameter Jacobian.
    double jtj00 = 0, jtj01 = 0, jtj11 = 0, jtr0 = 0, jtr1 = 0;
    for (const auto& pt : pts) {
      const double w = any_se ? 1.0 / std::max(pt.se, floor_se) : 1.0;
      const double pm = std::pow(p, pt.m);
      const double j0 = pm * w;
      const double j1 = a * pt.m * std::pow(p, pt.m - 1) * w;
      const double r = (a * pm - pt.mean) * w;
      jtj00 += j0 * j0;
      jtj01 += j0 * j1;
      jtj11 += j1 * j1;
      jtr0 += j0 * r;
      jtr1 += j1 * r;
    }
    const double det = jtj00 * jtj11 - jtj01 * jtj01;
    if (std::abs(det) < 1e-300) break;
    double da = -(jtj11 * jtr0 - jtj01 * jtr1) / det;
    double dp = -(jtj00 * jtr1 - jtj01 * jtr0) / det;
    double step = 1.0;
    double na = a + da, np = p + dp;
    int halvings = 0;
    while (ssr(na, np) > best && halvings < 30) {
      step *= 0.5;
      na = a + step * da;
      np = p + step * dp;
      ++halvings;
    }
    const double improved = best - ssr(na, np);
    a = na;
    p = np;
    best = ssr(a, p);
    if (std::abs(step * da) + std::abs(step * dp) < 1e-15 * (1 + std::abs(a) + std::abs(p)) ||
        improved < 1e-30)
      break;
  }

  // Covariance of (A, p) from the weighted Jacobian at the solution.
  double jtj00 = 0, jtj01 = 0, jtj11 = 0;
  for (const auto& pt : pts) {
    const double w = any_se ? 1.0 / std::max(pt.se, floor_se) : 1.0;
    const double j0 = std::pow(p, pt.m) * w;
    const double j1 = a * pt.m * std::pow(p, pt.m - 1) * w;
    jtj00 += j0 * j0;
    jtj01 += j0 * j1;
    jtj11 += j1 * j1;
  }
  const double det = jtj00 * jtj11 - jtj01 * jtj01;
  FitResult out;
  out.amplitude = a;
  out.decay = std::clamp(p, -1.0, 1.0);
  if (std::abs(det) > 1e-300) {
    double c00 = jtj11 / det, c11 = jtj00 / det;
    if (!any_se) {
      const size_t n = pts.size();
      const double scale = n > 2 ? best / static_cast<double>(n - 2) : 0.0;
      c00 *= scale;
      c11 *= scale;
    }
    out.amplitude_err = std::sqrt(std::max(0.0, c00));
    out.decay_err = std::sqrt(std::max(0.0, c11));
  }
  return out;
}

struct DecayFit {
  PauliPair pauli;
  FitResult fit;
};

struct ProcessInfidelity {
  double value = 0;
  double err = 0;
};

// Mean of the per-Pauli infidelities e_P = (1 - p_P)(d^2 - 1)/d^2, d = 4,
// so global depolarizing with parameter lambda gives (1 - lambda) * 15/16.
inline ProcessInfidelity process_infidelity(const std::vector<DecayFit>& fits) {
  if (fits.empty()) throw ConfigError("no decay fits to average");
  constexpr double kScale = 15.0 / 16.0;
  double sum = 0, var = 0;
  for (const auto& f : fits) {
    sum += (1.0 - f.fit.decay) * kScale;
    var += f.fit.decay_err * f.fit.decay_err * kScale * kScale;
  }
  const double k = static_cast<double>(fits.size());
  return {sum / k, std::sqrt(var) / k};
}

struct CbPoint {
  PauliPair pauli;
  int depth = 0;
  double mean = 0;
  double se = 0;
  size_t shots = 0;
};

struct CbResult {
  RcMode mode = RcMode::GatewareFrc;
  std::vector<CbPoint> points;
  std::vector<DecayFit> fits;
  ProcessInfidelity infidelity;
};

inline CbResult run_cb(const CbConfig& cfg, const NoiseModel& noise, uint64_t seed,
                       const GateDurations& durations = {}) {
  cfg.validate();
  const auto circuits = build_cb_circuits(cfg);
  const size_t width = std::max(cfg.q0, cfg.q1) + 1;
  const RandomStream base(seed);

  CbResult result;
  result.mode = cfg.mode;
  result.points.resize(circuits.size());

  parallel_for(circuits.size(), [&](size_t idx) {
    const CbCircuit& cb = circuits[idx];
    const CircuitSimulator sim(width, noise);
    std::vector<int> values;
    values.reserve(cfg.shots_per_depth);
    RandomStream stream = base.derive(idx);

    if (cfg.mode == RcMode::SoftwareRc) {
      const int n = cfg.n_randomizations;
      for (int r = 0; r < n; ++r) {
        const RandomizedCircuit rand = randomize(cb.circuit, stream.derive(2 * r));
        const DensityState st = sim.run(rand.circuit);
        RandomStream shot_rng = stream.derive(2 * r + 1);
        const int shots = cfg.shots_per_depth / n + (r < cfg.shots_per_depth % n ? 1 : 0);
        for (int s = 0; s < shots; ++s)
          values.push_back(cb_outcome_value(cb, sample_index(st, shot_rng)));
      }
    } else {
      const CompiledCircuit compiled = compile_to_cores(cb.circuit, durations, true);
      LfsrState lfsr = LfsrState::from_seed(static_cast<int>(2 * width),
                                            mix64(seed) ^ mix64(idx + 1));
      RandomStream shot_rng = stream.derive(1);
      for (int s = 0; s < cfg.shots_per_depth; ++s) {
        const ShotResult shot = execute_shot(compiled, lfsr);
        const DensityState st = sim.run(shot.resolved);
        values.push_back(cb_outcome_value(cb, sample_index(st, shot_rng)));
      }
    }

    double mean = 0;
    for (int v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0;
    for (int v : values) var += (v - mean) * (v - mean);
    var = values.size() > 1 ? var / static_cast<double>(values.size() - 1) : 0.0;
    result.points[idx] = {cb.prepared, cb.depth, mean,
                          std::sqrt(var / static_cast<double>(values.size())), values.size()};
  });

  for (const PauliPair& p : cfg.paulis) {
    std::vector<FitPoint> pts;
    for (const auto& pt : result.points)
      if (pt.pauli == p) pts.push_back({static_cast<double>(pt.depth), pt.mean, pt.se});
    result.fits.push_back({p, fit_exponential(pts)});
  }
  result.infidelity = process_infidelity(result.fits);
  return result;
}

// Exact infinite-randomization decay oracle: the dressed cycle is the
// 16-term twirl average, applied in transfer-matrix form. Valid for noise
// attached to the target gate only (single-qubit cycles must be noiseless).
inline std::map<std::pair<uint8_t, int>, double> cb_exact_decays(const CbConfig& cfg,
                                                                 const NoiseModel& noise) {
  cfg.validate();
  if (noise.x90_overrotation != 0)
    throw ConfigError("exact decay oracle requires noiseless single-qubit cycles");
  const size_t width = std::max(cfg.q0, cfg.q1) + 1;
  if (width != 2) throw ConfigError("exact decay oracle supports a two-qubit register");

  const Ptm cycle_ptm = twirl_average(cfg.gate, noise) * ideal_ptm(cfg.gate);
  std::map<std::pair<uint8_t, int>, double> out;
  for (const PauliPair& p : cfg.paulis) {
    // Transfer-space vector of the prepared state, s_j = Tr(P_j rho).
    CbConfig one = cfg;
    one.paulis = {p};
    one.depths = {cfg.depths.front(), cfg.depths.back()};
    const CbCircuit cb = build_cb_circuits(one).front();
    Circuit prep_only;
    prep_only.width = width;
    prep_only.cycles.push_back(cb.circuit.cycles.front());
    const DensityState rho = apply_circuit(prep_only, NoiseModel{});
    RMat s(16, 1);
    for (uint8_t j = 0; j < 16; ++j) {
      const cx t = (pauli_pair_matrix(PauliPair::from_code(j)) * rho.rho).trace();
      s(j, 0) = t.real();
    }
    for (int m : cfg.depths) {
      RMat v = s;
      PauliPair running = p;
      int sign = +1;
      for (int k = 0; k < m; ++k) {
        v = cycle_ptm * v;
        const PropEntry e = propagate(cfg.gate, running);
        running = e.out;
        sign *= e.sign;
      }
      out[{p.code(), m}] = sign * v(running.code(), 0);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Observable variance study
// ---------------------------------------------------------------------------

struct VarianceConfig {
  int n_circuits = 100;
  size_t width = 2;
  int depth = 4;
  int shots = 1000;
  int subsample_size = 100;
  int subsamples = 100;
  bool run_bare = true;
  bool run_frc = true;
  std::vector<PauliPair> observables = {PauliPair::from_str("IZ"), PauliPair::from_str("ZI"),
                                        PauliPair::from_str("ZZ")};

  void validate() const {
    if (n_circuits < 1 || shots < 1) throw ConfigError("circuit and shot counts must be >= 1");
    if (width != 2) throw ConfigError("variance study uses two-qubit circuits");
    if (depth < 1) throw ConfigError("depth must be >= 1");
    if (subsample_size > shots) throw ConfigError("subsample size exceeds shot count");
    for (const auto& o : observables) {
      const auto diag = [](Pauli p) { return p == Pauli::I || p == Pauli::Z; };
      if (!diag(o.first) || !diag(o.second))
        throw ConfigError("observables must be diagonal (I/Z) for computational-basis readout");
    }
  }
};

struct VarianceCircuitData {
  std::vector<double> ideal;              // per observable
  std::vector<double> measured;           // per observable
  std::vector<double> error;              // ideal - measured
  std::vector<std::vector<double>> subsample_errors;  // [observable][resample]
};

struct VarianceResult {
  struct Mode {
    std::string name;  // "bare" or "frc"
    std::vector<VarianceCircuitData> circuits;
    std::vector<double> all_errors;
    double mean = 0;
    double variance = 0;
  };
  std::vector<Mode> modes;
  // Fraction of (circuit, observable) pairs where |error_frc| <= |error_bare|.
  double improved_fraction = -1;
};

inline double diagonal_expectation(const std::vector<size_t>& outcomes, size_t width,
                                   const PauliPair& obs, const std::vector<size_t>& idx) {
  size_t mask = 0;
  if (obs.first == Pauli::Z) mask |= size_t{1} << (width - 1);
  if (obs.second == Pauli::Z) mask |= size_t{1} << (width - 2);
  double sum = 0;
  for (size_t i : idx) {
    const int parity = std::popcount(outcomes[i] & mask) & 1;
    sum += parity ? -1.0 : 1.0;
  }
  return sum / static_cast<double>(idx.size());
}

inline VarianceResult variance_study(const VarianceConfig& cfg, const NoiseModel& noise,
                                     uint64_t seed, const GateDurations& durations = {}) {
  cfg.validate();
  const RandomStream base(seed);

  // Shared circuit set across modes.
  std::vector<Circuit> circuits;
  circuits.reserve(cfg.n_circuits);
  for (int i = 0; i < cfg.n_circuits; ++i) {
    RandomStream r = base.derive(1000000 + i);
    Circuit c = random_circuit(cfg.width, cfg.depth, r, /*mixed_kinds=*/false);
    // The study wants a gate in every TWO cycle.
    for (auto& cy : c.cycles)
      if (cy.tag == CycleTag::TWO && cy.gates.empty())
        cy.gates.emplace_back(TwoQubitGateKind::CZ, 0, 1);
    circuits.push_back(std::move(c));
  }

  const CircuitSimulator noiseless(cfg.width, NoiseModel{});
  const CircuitSimulator noisy(cfg.width, noise);

  std::vector<std::string> mode_names;
  if (cfg.run_bare) mode_names.push_back("bare");
  if (cfg.run_frc) mode_names.push_back("frc");

  VarianceResult result;
  for (const auto& name : mode_names) {
    VarianceResult::Mode mode;
    mode.name = name;
    mode.circuits.resize(circuits.size());
    parallel_for(circuits.size(), [&](size_t ci) {
      const Circuit& c = circuits[ci];
      VarianceCircuitData data;
      const DensityState ideal_state = noiseless.run(c);
      for (const auto& obs : cfg.observables)
        data.ideal.push_back(
            exact_expectation(ideal_state, {obs.first, obs.second}, {0, 1}));

      // Collect per-shot outcomes.
      std::vector<size_t> outcomes;
      outcomes.reserve(cfg.shots);
      RandomStream shot_rng = base.derive(2000000 + ci * 4 + (name == "frc" ? 1 : 0));
      if (name == "bare") {
        const DensityState st = noisy.run(c);
        for (int s = 0; s < cfg.shots; ++s) outcomes.push_back(sample_index(st, shot_rng));
      } else {
        const CompiledCircuit compiled = compile_to_cores(c, durations, true);
        LfsrState lfsr = LfsrState::from_seed(static_cast<int>(2 * cfg.width),
                                              mix64(seed) ^ mix64(3000000 + ci));
        for (int s = 0; s < cfg.shots; ++s) {
          const ShotResult shot = execute_shot(compiled, lfsr);
          const DensityState st = noisy.run(shot.resolved);
          outcomes.push_back(sample_index(st, shot_rng));
        }
      }

      std::vector<size_t> all(outcomes.size());
      for (size_t i = 0; i < all.size(); ++i) all[i] = i;
      for (size_t oi = 0; oi < cfg.observables.size(); ++oi) {
        const double measured =
            diagonal_expectation(outcomes, cfg.width, cfg.observables[oi], all);
        data.measured.push_back(measured);
        data.error.push_back(data.ideal[oi] - measured);
      }

      // Subsampling without replacement, resamples independent.
      data.subsample_errors.resize(cfg.observables.size());
      RandomStream sub_rng = base.derive(4000000 + ci * 4 + (name == "frc" ? 1 : 0));
      for (int r = 0; r < cfg.subsamples; ++r) {
        std::vector<size_t> pool = all;
        for (int k = 0; k < cfg.subsample_size; ++k) {
          const size_t j = k + sub_rng.below(pool.size() - k);
          std::swap(pool[k], pool[j]);
        }
        pool.resize(cfg.subsample_size);
        for (size_t oi = 0; oi < cfg.observables.size(); ++oi)
          data.subsample_errors[oi].push_back(
              data.ideal[oi] -
              diagonal_expectation(outcomes, cfg.width, cfg.observables[oi], pool));
      }
      mode.circuits[ci] = std::move(data);
    });

    for (const auto& cd : mode.circuits)
      for (double e : cd.error) mode.all_errors.push_back(e);
    double m = 0;
    for (double e : mode.all_errors) m += e;
    m /= static_cast<double>(mode.all_errors.size());
    double v = 0;
    for (double e : mode.all_errors) v += (e - m) * (e - m);
    mode.mean = m;
    mode.variance = v / static_cast<double>(mode.all_errors.size());
    result.modes.push_back(std::move(mode));
  }

  if (cfg.run_bare && cfg.run_frc) {
    const auto& bare = result.modes[0];
    const auto& frc = result.modes[1];
    size_t improved = 0, total = 0;
    for (size_t ci = 0; ci < bare.circuits.size(); ++ci) {
      for (size_t oi = 0; oi < cfg.observables.size(); ++oi) {
        ++total;
        if (std::abs(frc.circuits[ci].error[oi]) <= std::abs(bare.circuits[ci].error[oi]))
          ++improved;
      }
    }
    result.improved_fraction = static_cast<double>(improved) / static_cast<double>(total);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Pipeline time profiling
// ---------------------------------------------------------------------------

// Modeled per-upload constants; defaults are zero and reported as modeled.
struct StageConstants {
  double load_circuit_s = 0;
  double get_data_s = 0;
  double client_server_s = 0;
};

struct ProfileConfig {
  std::vector<size_t> widths = {2, 4};
  std::vector<int> depths = {10, 50, 100};
  std::vector<RcMode> modes = {RcMode::SoftwareRc, RcMode::GatewareFrc};
  int n_randomizations = 100;
  int shots = 1000;
  GateDurations durations;
  StageConstants constants;
  double min_measure_s = 0.05;

  void validate() const {
    if (widths.empty() || depths.empty() || modes.empty())
      throw ConfigError("profile grid must be non-empty");
    if (n_randomizations < 1) throw ConfigError("n_randomizations must be at least 1");
    if (shots < 1) throw ConfigError("shots must be at least 1");
  }
};

struct ProfileRow {
  size_t width = 0;
  int depth = 0;
  RcMode mode = RcMode::SoftwareRc;
  int n_randomizations = 1;
  double pre_compile_s = 0;       // measured: software RC pass (n_rand circuits)
  double compile_assemble_s = 0;  // measured: lowering to core programs
  double load_circuit_s = 0;      // modeled
  double run_circuit_s = 0;       // emulated shot clock * shots
  double get_data_s = 0;          // modeled
  double client_server_s = 0;     // modeled

  double total_s() const {
    return pre_compile_s + compile_assemble_s + load_circuit_s + run_circuit_s + get_data_s +
           client_server_s;
  }
};

inline std::vector<ProfileRow> time_profile(const ProfileConfig& cfg, uint64_t seed) {
  cfg.validate();
  std::vector<ProfileRow> rows;
  // Defeat dead-code elimination of the measured pipelines.
  std::atomic<uint64_t> sink{0};

  for (size_t width : cfg.widths) {
    for (int depth : cfg.depths) {
      RandomStream rng = RandomStream(seed).derive(width * 1000 + depth);
      const Circuit circuit = random_circuit(width, depth, rng, /*mixed_kinds=*/false);
      for (RcMode mode : cfg.modes) {
        ProfileRow row;
        row.width = width;
        row.depth = depth;
        row.mode = mode;
        row.n_randomizations = mode == RcMode::SoftwareRc ? cfg.n_randomizations : 1;

        if (mode == RcMode::SoftwareRc) {
          std::vector<RandomizedCircuit> rands;
          row.pre_compile_s = measure_wall_seconds(
              [&]() {
                rands = rc_ensemble(circuit, cfg.n_randomizations, seed);
                sink += rands.size();
              },
              cfg.min_measure_s);
          row.compile_assemble_s = measure_wall_seconds(
              [&]() {
                for (const auto& r : rands) {
                  const CompiledCircuit cc = compile_to_cores(r.circuit, cfg.durations, false);
                  sink += cc.cores.size();
                }
              },
              cfg.min_measure_s);
        } else {
          row.pre_compile_s = 0;  // randomization happens on the fly, per shot
          row.compile_assemble_s = measure_wall_seconds(
              [&]() {
                const CompiledCircuit cc = compile_to_cores(circuit, cfg.durations, true);
                sink += cc.cores.size();
              },
              cfg.min_measure_s);
        }

        const CompiledCircuit timing_cc =
            compile_to_cores(circuit, cfg.durations, mode == RcMode::GatewareFrc);
        row.run_circuit_s = shot_duration(timing_cc).total_ns() * 1e-9 * cfg.shots;
        const double uploads = static_cast<double>(row.n_randomizations);
        row.load_circuit_s = cfg.constants.load_circuit_s * uploads;
        row.get_data_s = cfg.constants.get_data_s * uploads;
        row.client_server_s = cfg.constants.client_server_s * uploads;
        rows.push_back(row);
      }
    }
  }
  (void)sink.load();
  return rows;
}

}  // namespace qrc

#endif
