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

#include "qrc/experiments.hpp"

#include "doctest.h"

using namespace qrc;

namespace {

NoiseModel depolarizing_cz(double lambda) {
  NoiseModel nm;
  nm.two_qubit[TwoQubitGateKind::CZ] = TwoQubitNoise::depolarizing(lambda);
  return nm;
}

NoiseModel coherent_cz(double theta) {
  NoiseModel nm;
  TwoQubitNoise n;
  n.coherent = CoherentTerm{PauliPair::from_str("ZZ"), theta};
  nm.two_qubit[TwoQubitGateKind::CZ] = n;
  return nm;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("cb circuit construction") {
  CbConfig cfg;
  cfg.depths = {2, 4};
  SUBCASE("one circuit per (Pauli, depth)") {
    const auto circuits = build_cb_circuits(cfg);
    CHECK(circuits.size() == cfg.paulis.size() * cfg.depths.size());
    for (const auto& cb : circuits) {
      CHECK(validate(cb.circuit).valid);
      CHECK(cb.circuit.depth() == static_cast<size_t>(cb.depth));
    }
  }
  SUBCASE("noiseless estimator reads +1 exactly") {
    for (const auto& cb : build_cb_circuits(cfg)) {
      const DensityState s = apply_circuit(cb.circuit, NoiseModel{});
      double value = 0;
      for (size_t b = 0; b < 4; ++b)
        value += s.rho(b, b).real() * cb_outcome_value(cb, b);
      CHECK(value == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("config validation") {
    CbConfig bad = cfg;
    bad.depths = {3, 8};
    CHECK_THROWS_AS((void)build_cb_circuits(bad), ConfigError);
    bad = cfg;
    bad.paulis = {PauliPair::from_str("II")};
    CHECK_THROWS_AS((void)build_cb_circuits(bad), ConfigError);
    bad = cfg;
    bad.depths = {2};
    CHECK_THROWS_AS((void)build_cb_circuits(bad), ConfigError);
  }
}

TEST_CASE("exponential fit") {
  SUBCASE("noiseless points are recovered to machine precision") {
    std::vector<FitPoint> pts;
    for (int m : {2, 8, 32}) pts.push_back({double(m), 0.98 * std::pow(0.95, m), 0});
    const FitResult f = fit_exponential(pts);
    CHECK(std::abs(f.amplitude - 0.98) < 1e-9);
    CHECK(std::abs(f.decay - 0.95) < 1e-9);
  }
  SUBCASE("bernoulli-sampled points land within three sigma") {
    RandomStream rng(61);
    int misses = 0;
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<FitPoint> pts;
      for (int m : {2, 8, 32}) {
        const double target = std::pow(0.98, m);
        const int shots = 1000;
        int sum = 0;
        for (int s = 0; s < shots; ++s)
          sum += rng.next_double() < (1 + target) / 2 ? 1 : -1;
        const double mean = double(sum) / shots;
        pts.push_back({double(m), mean, std::sqrt((1 - mean * mean) / shots)});
      }
      const FitResult f = fit_exponential(pts);
      if (std::abs(f.decay - 0.98) > 3 * f.decay_err) ++misses;
    }
    CHECK(misses <= 3);  // ~1% expected rate per rep
  }
  SUBCASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS((void)fit_exponential({{2, 0.5, 0}, {2, 0.4, 0}}), ConfigError);
    CHECK_THROWS_AS((void)fit_exponential({{2, 1.5, 0}, {4, 0.5, 0}}), ConfigError);
  }
}

TEST_CASE("process infidelity convention") {
  SUBCASE("all decays at 1 give zero") {
    std::vector<DecayFit> fits = {{PauliPair::from_str("ZZ"), {1.0, 1.0, 0, 0}}};
    CHECK(process_infidelity(fits).value == 0.0);
  }
  SUBCASE("uniform 0.98 gives 0.01875 exactly") {
    std::vector<DecayFit> fits;
    for (const char* p : {"XI", "IX", "ZZ"})
      fits.push_back({PauliPair::from_str(p), {1.0, 0.98, 0, 0}});
    CHECK(process_infidelity(fits).value == doctest::Approx(0.02 * 15.0 / 16.0).epsilon(1e-12));
  }
  SUBCASE("heterogeneous decays match the exact channel value") {
    // Pauli channel with one dominant term; exact process infidelity comes
    // from the trace of the twirled error PTM. The decay fits recover the
    // geometric mean over each conjugation orbit, which differs from the
    // arithmetic mean at second order in the infidelity, hence the absolute
    // tolerance here.
    NoiseModel nm;
    TwoQubitNoise n;
    n.stochastic[PauliPair::from_str("ZZ").code()] = 0.01;
    n.stochastic[PauliPair::from_str("XI").code()] = 0.004;
    nm.two_qubit[TwoQubitGateKind::CZ] = n;
    const Ptm err = twirl_average(TwoQubitGateKind::CZ, nm);
    const double exact = process_infidelity_of_error_ptm(err);

    CbConfig cfg;
    cfg.paulis.clear();
    for (uint8_t c = 1; c < 16; ++c) cfg.paulis.push_back(PauliPair::from_code(c));
    const auto decays = cb_exact_decays(cfg, nm);
    std::vector<DecayFit> fits;
    for (const auto& p : cfg.paulis) {
      std::vector<FitPoint> pts;
      for (int m : cfg.depths) pts.push_back({double(m), decays.at({p.code(), m}), 0});
      fits.push_back({p, fit_exponential(pts)});
    }
    CHECK(std::abs(process_infidelity(fits).value - exact) < 5e-5);
  }
}

TEST_CASE("exact decays reproduce injected depolarizing") {
  CbConfig cfg;
  const auto decays = cb_exact_decays(cfg, depolarizing_cz(0.98));
  for (const auto& p : cfg.paulis) {
    std::vector<FitPoint> pts;
    for (int m : cfg.depths) pts.push_back({double(m), decays.at({p.code(), m}), 0});
    const FitResult f = fit_exponential(pts);
    CHECK(std::abs(f.decay - 0.98) < 1e-6);
    CHECK(std::abs(f.amplitude - 1.0) < 1e-6);
  }
  CHECK_THROWS_AS((void)cb_exact_decays(cfg, [] {
                    NoiseModel nm;
                    nm.x90_overrotation = 0.01;
                    return nm;
                  }()),
                  ConfigError);
}

TEST_CASE("sampled cycle benchmarking recovers the channel, both modes") {
  CbConfig cfg;
  cfg.depths = {2, 8};
  cfg.shots_per_depth = 600;
  cfg.paulis = {PauliPair::from_str("ZZ"), PauliPair::from_str("XI"), PauliPair::from_str("IY")};
  const NoiseModel nm = depolarizing_cz(0.98);
  const double exact = 0.02 * 15.0 / 16.0;

  cfg.mode = RcMode::SoftwareRc;
  cfg.n_randomizations = 12;
  const CbResult sw = run_cb(cfg, nm, 2024);
  CHECK(std::abs(sw.infidelity.value - exact) < 4 * sw.infidelity.err);

  cfg.mode = RcMode::GatewareFrc;
  const CbResult gw = run_cb(cfg, nm, 2024);
  CHECK(std::abs(gw.infidelity.value - exact) < 4 * gw.infidelity.err);

  for (const auto& pt : gw.points) CHECK(pt.shots == 600);
  // Same seed, same config: reruns are bit-identical.
  const CbResult gw2 = run_cb(cfg, nm, 2024);
  for (size_t i = 0; i < gw.points.size(); ++i) {
    CHECK(gw.points[i].mean == gw2.points[i].mean);
    CHECK(gw.points[i].se == gw2.points[i].se);
  }
}

TEST_CASE("sampled decays match the exact Pauli-channel eigenvalues within 3 sigma") {
  NoiseModel nm;
  TwoQubitNoise n;
  n.stochastic[PauliPair::from_str("ZZ").code()] = 0.012;
  n.stochastic[PauliPair::from_str("IX").code()] = 0.006;
  n.stochastic[PauliPair::from_str("YI").code()] = 0.003;
  nm.two_qubit[TwoQubitGateKind::CZ] = n;

  CbConfig cfg;
  cfg.paulis = {PauliPair::from_str("ZZ"), PauliPair::from_str("XI"), PauliPair::from_str("IY")};
  cfg.shots_per_depth = 1000;
  cfg.mode = RcMode::GatewareFrc;

  const auto exact = cb_exact_decays(cfg, nm);
  std::map<uint8_t, double> exact_p;
  for (const auto& p : cfg.paulis) {
    std::vector<FitPoint> pts;
    for (int m : cfg.depths) pts.push_back({double(m), exact.at({p.code(), m}), 0});
    exact_p[p.code()] = fit_exponential(pts).decay;
  }

  const CbResult r = run_cb(cfg, nm, 314159);
  for (const auto& f : r.fits) {
    CHECK(std::abs(f.fit.decay - exact_p.at(f.pauli.code())) < 3 * f.fit.decay_err + 1e-4);
  }
}

TEST_CASE("variance study") {
  VarianceConfig cfg;
  cfg.n_circuits = 12;
  cfg.depth = 4;
  cfg.shots = 400;
  cfg.subsample_size = 100;
  cfg.subsamples = 20;

  SUBCASE("noiseless errors stay within the binomial envelope") {
    VarianceConfig c2 = cfg;
    c2.run_frc = false;
    const VarianceResult r = variance_study(c2, NoiseModel{}, 3);
    REQUIRE(r.modes.size() == 1);
    for (double e : r.modes[0].all_errors) CHECK(std::abs(e) < 5.0 / std::sqrt(400.0));
    CHECK(r.modes[0].variance <= 1.5 / 400.0);
  }
  SUBCASE("coherent noise biases bare circuits; randomization centers them") {
    const NoiseModel nm = coherent_cz(0.25);
    const VarianceResult r = variance_study(cfg, nm, 4);
    REQUIRE(r.modes.size() == 2);
    const auto& bare = r.modes[0];
    const auto& frc = r.modes[1];
    double worst_bare = 0;
    for (double e : bare.all_errors) worst_bare = std::max(worst_bare, std::abs(e));
    CHECK(worst_bare > 0.1);  // systematic bias well beyond sampling noise
    CHECK(frc.variance < bare.variance);
    CHECK(r.improved_fraction > 0.5);
    // Exact twirled-channel direction check: the twirled expectation sits
    // closer to ideal than the bare expectation for most circuits; sampled
    // means follow it.
    CHECK(std::abs(frc.mean) < std::abs(bare.mean) + 0.05);
  }
  SUBCASE("subsample errors have the right shape and determinism") {
    const VarianceResult a = variance_study(cfg, coherent_cz(0.1), 5);
    const VarianceResult b = variance_study(cfg, coherent_cz(0.1), 5);
    for (size_t mi = 0; mi < a.modes.size(); ++mi) {
      for (size_t ci = 0; ci < a.modes[mi].circuits.size(); ++ci) {
        const auto& ca = a.modes[mi].circuits[ci];
        const auto& cb = b.modes[mi].circuits[ci];
        REQUIRE(ca.subsample_errors.size() == 3);
        for (size_t oi = 0; oi < 3; ++oi) {
          REQUIRE(ca.subsample_errors[oi].size() == 20);
          CHECK(ca.subsample_errors[oi] == cb.subsample_errors[oi]);
        }
      }
    }
  }
  SUBCASE("config validation") {
    VarianceConfig bad = cfg;
    bad.observables = {PauliPair::from_str("XZ")};
    CHECK_THROWS_AS((void)variance_study(bad, NoiseModel{}, 1), ConfigError);
    bad = cfg;
    bad.subsample_size = 1000;
    CHECK_THROWS_AS((void)variance_study(bad, NoiseModel{}, 1), ConfigError);
  }
}

TEST_CASE("time profile") {
  ProfileConfig cfg;
  cfg.widths = {2};
  cfg.depths = {4, 8};
  cfg.n_randomizations = 10;
  cfg.shots = 100;
  cfg.min_measure_s = 0.01;
  const auto rows = time_profile(cfg, 9);
  REQUIRE(rows.size() == 4);  // 2 depths x 2 modes

  for (const auto& r : rows) {
    CHECK(r.pre_compile_s >= 0);
    CHECK(r.compile_assemble_s > 0);
    CHECK(r.run_circuit_s > 0);
    if (r.mode == RcMode::GatewareFrc) {
      CHECK(r.n_randomizations == 1);
      CHECK(r.pre_compile_s == 0);
    } else {
      CHECK(r.n_randomizations == 10);
      CHECK(r.pre_compile_s > 0);
    }
  }
  // The software compile stage covers n_rand circuits: it must cost several
  // times the single gateware compile at the same grid point.
  for (size_t i = 0; i < rows.size(); i += 2) {
    const double ratio = rows[i].compile_assemble_s / rows[i + 1].compile_assemble_s;
    CHECK(ratio > 2.0);
    CHECK(ratio < 50.0);
  }
  // Default stage constants are zero (they are modeled, not measured).
  CHECK(rows[0].load_circuit_s == 0.0);
  CHECK(rows[0].get_data_s == 0.0);
  CHECK(rows[0].client_server_s == 0.0);
}

TEST_CASE("gateware-mode pipeline beats software mode whenever n_rand >= 2") {
  ProfileConfig cfg;
  cfg.widths = {2};
  cfg.depths = {6};
  cfg.n_randomizations = 4;
  cfg.shots = 50;
  cfg.min_measure_s = 0.01;
  cfg.constants.load_circuit_s = 0.001;
  const auto rows = time_profile(cfg, 10);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].total_s() < rows[0].total_s());
}

}  // TEST_SUITE
