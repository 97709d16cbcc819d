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

#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "qrc/cli.hpp"

using namespace qrc;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("qrc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::filesystem::path write_sample_circuit(const std::filesystem::path& dir) {
  const json j = {
      {"width", 2},
      {"cycles",
       {{{"type", "single"}, {"gates", {{"0", {0.3, -0.8, 1.1}}, {"1", {0.5, 0.2, -2.0}}}}},
        {{"type", "two"},
         {"gates", {{{"kind", "cz"}, {"qubits", {0, 1}}}}}},
        {{"type", "single"}, {"gates", {{"0", {-1.0, 0.4, 0.9}}}}}}}};
  const auto path = dir / "circuit.json";
  write_text_atomic(path, j.dump(2));
  return path;
}

}  // namespace

TEST_SUITE("io_cli") {

TEST_CASE("circuit JSON round-trip preserves structure and phases") {
  RandomStream rng(71);
  for (int rep = 0; rep < 25; ++rep) {
    const Circuit c = random_circuit(1 + rng.below(4), rng.below(6), rng);
    const Circuit back = circuit_from_json(circuit_to_json(c));
    REQUIRE(back.cycles.size() == c.cycles.size());
    CHECK(back.width == c.width);
    for (size_t i = 0; i < c.cycles.size(); ++i) {
      CHECK(back.cycles[i].tag == c.cycles[i].tag);
      CHECK(back.cycles[i].gates == c.cycles[i].gates);
      CHECK(back.cycles[i].singles == c.cycles[i].singles);
    }
  }
}

TEST_CASE("circuit JSON errors name the offending field") {
  SUBCASE("missing width") {
    CHECK_THROWS_WITH_AS((void)circuit_from_json(json{{"cycles", json::array()}}),
                         doctest::Contains("width"), ConfigError);
  }
  SUBCASE("bad cycle type") {
    const json j = {{"width", 1}, {"cycles", {{{"type", "triple"}, {"gates", json::object()}}}}};
    CHECK_THROWS_WITH_AS((void)circuit_from_json(j), doctest::Contains("cycles[0].type"),
                         ConfigError);
  }
  SUBCASE("bad triple arity") {
    const json j = {{"width", 1},
                    {"cycles", {{{"type", "single"}, {"gates", {{"0", {0.1, 0.2}}}}}}}};
    CHECK_THROWS_WITH_AS((void)circuit_from_json(j), doctest::Contains("gates.0"), ConfigError);
  }
  SUBCASE("alternation violations surface as validation errors") {
    const json j = {{"width", 2},
                    {"cycles",
                     {{{"type", "two"}, {"gates", {{{"kind", "cz"}, {"qubits", {0, 1}}}}}},
                      {{"type", "single"}, {"gates", json::object()}}}}};
    CHECK_THROWS_AS((void)circuit_from_json(j), ValidationError);
  }
}

TEST_CASE("noise JSON round-trip and validation") {
  NoiseModel nm;
  TwoQubitNoise n;
  n.coherent = CoherentTerm{PauliPair::from_str("ZX"), 0.17};
  n.stochastic[PauliPair::from_str("XX").code()] = 0.01;
  n.damping = 0.02;
  nm.two_qubit[TwoQubitGateKind::CZ] = n;
  nm.x90_overrotation = 0.005;

  const NoiseModel back = noise_from_json(noise_to_json(nm));
  const auto* bn = back.for_kind(TwoQubitGateKind::CZ);
  REQUIRE(bn != nullptr);
  CHECK(bn->coherent->axis == PauliPair::from_str("ZX"));
  CHECK(bn->coherent->theta == 0.17);
  CHECK(bn->stochastic[PauliPair::from_str("XX").code()] == 0.01);
  CHECK(bn->damping == 0.02);
  CHECK(back.x90_overrotation == 0.005);

  SUBCASE("depolarizing expands to the uniform Pauli channel") {
    const NoiseModel d = noise_from_json(json{{"cz", {{"depolarizing", 0.98}}}});
    const auto* dn = d.for_kind(TwoQubitGateKind::CZ);
    REQUIRE(dn != nullptr);
    CHECK(dn->stochastic_total() == doctest::Approx(15.0 * 0.02 / 16.0));
  }
  SUBCASE("stochastic and depolarizing are mutually exclusive") {
    const json j = {{"cz", {{"depolarizing", 0.98}, {"stochastic", {{"XX", 0.01}}}}}};
    CHECK_THROWS_AS((void)noise_from_json(j), ConfigError);
  }
  SUBCASE("unknown fields are rejected by name") {
    CHECK_THROWS_WITH_AS((void)noise_from_json(json{{"cz", {{"t1", 0.5}}}}),
                         doctest::Contains("noise.cz.t1"), ConfigError);
  }
}

TEST_CASE("config digest is stable under key reordering") {
  const std::string a = R"({"alpha": 1, "beta": [1, 2], "gamma": {"x": 0.5, "y": 2}})";
  const std::string b = R"({"gamma": {"y": 2, "x": 0.5}, "beta": [1, 2], "alpha": 1})";
  CHECK(config_digest(json::parse(a)) == config_digest(json::parse(b)));
  CHECK(config_digest(json::parse(a)) != config_digest(json::parse(R"({"alpha": 2})")));
}

TEST_CASE("atomic writes leave no temp files behind") {
  const auto dir = fresh_dir("atomic");
  write_text_atomic(dir / "x.json", "{}\n");
  CHECK(slurp(dir / "x.json") == "{}\n");
  size_t entries = 0;
  for (auto& e : std::filesystem::directory_iterator(dir)) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);
}

TEST_CASE("tables subcommand matches the golden file") {
  const auto dir = fresh_dir("tables");
  REQUIRE(cli::dispatch({"tables", "--out", dir.string()}) == 0);
  const json got = json::parse(slurp(dir / "tables.json"));
  const json golden = json::parse(slurp(std::filesystem::path(QRC_TEST_DATA_DIR) / "tables.json"));
  CHECK(got.at("propagation") == golden.at("propagation"));
  CHECK(got.at("absorption") == golden.at("absorption"));
}

TEST_CASE("rc subcommand is deterministic byte for byte") {
  const auto dir1 = fresh_dir("rc1");
  const auto dir2 = fresh_dir("rc2");
  const auto circuit = write_sample_circuit(dir1);
  REQUIRE(cli::dispatch({"rc", "--config", circuit.string(), "--n", "5", "--seed", "7", "--out",
                         dir1.string()}) == 0);
  REQUIRE(cli::dispatch({"rc", "--config", circuit.string(), "--n", "5", "--seed", "7", "--out",
                         dir2.string()}) == 0);
  CHECK(slurp(dir1 / "rc_result.json") == slurp(dir2 / "rc_result.json"));
  const json r = json::parse(slurp(dir1 / "rc_result.json"));
  CHECK(r.at("count") == 5);
  CHECK(r.at("randomizations").size() == 5);
  CHECK(r.at("run").at("seed") == 7);
  CHECK(r.at("run").at("manifest") == "manifest.json");
  const json manifest = json::parse(slurp(dir1 / "manifest.json"));
  CHECK(manifest.at("outputs").size() == 1);
  CHECK(manifest.at("config_digest") == r.at("run").at("config_digest"));
}

TEST_CASE("rc exhaustive flag enumerates every twirl") {
  const auto dir = fresh_dir("rcex");
  const auto circuit = write_sample_circuit(dir);
  REQUIRE(cli::dispatch({"rc", "--config", circuit.string(), "--exhaustive", "--out",
                         dir.string()}) == 0);
  const json r = json::parse(slurp(dir / "rc_result.json"));
  CHECK(r.at("count") == 16);
}

TEST_CASE("emulate subcommand writes the timing CSV") {
  const auto dir = fresh_dir("emulate");
  const auto circuit = write_sample_circuit(dir);
  REQUIRE(cli::dispatch({"emulate", "--config", circuit.string(), "--shots", "3", "--seed", "1",
                         "--gate-ns", "10", "--rc", "on", "--emit-circuits", "--out",
                         dir.string()}) == 0);
  const std::string csv = slurp(dir / "timing.csv");
  CHECK(csv.find("shot,cycle,added_latency_ns,total_ns") != std::string::npos);
  CHECK(csv.find("# manifest=manifest.json") == 0);
  // 10 ns single cycles stretch by 8 ns under RC.
  CHECK(csv.find("0,0,8,18") != std::string::npos);
  const json resolved = json::parse(slurp(dir / "resolved.json"));
  CHECK(resolved.at("resolved").size() == 3);

  // Same seed reproduces the same resolved circuits.
  const auto dir2 = fresh_dir("emulate2");
  REQUIRE(cli::dispatch({"emulate", "--config", circuit.string(), "--shots", "3", "--seed", "1",
                         "--gate-ns", "10", "--rc", "on", "--emit-circuits", "--out",
                         dir2.string()}) == 0);
  CHECK(slurp(dir / "resolved.json") == slurp(dir2 / "resolved.json"));

  SUBCASE("rc off carries no added latency and replays the bare phases") {
    const auto dir3 = fresh_dir("emulate_off");
    REQUIRE(cli::dispatch({"emulate", "--config", circuit.string(), "--shots", "1", "--gate-ns",
                           "10", "--rc", "off", "--emit-circuits", "--out", dir3.string()}) == 0);
    CHECK(slurp(dir3 / "timing.csv").find("0,0,0,10") != std::string::npos);
    const json res = json::parse(slurp(dir3 / "resolved.json"));
    CHECK(res.at("resolved")[0].at("twirl_record").empty());
  }
  SUBCASE("--format json suppresses the CSV") {
    const auto dir4 = fresh_dir("emulate_json");
    REQUIRE(cli::dispatch({"emulate", "--config", circuit.string(), "--shots", "1", "--format",
                           "json", "--out", dir4.string()}) == 0);
    CHECK_FALSE(std::filesystem::exists(dir4 / "timing.csv"));
    CHECK(std::filesystem::exists(dir4 / "emulate_summary.json"));
  }
}

TEST_CASE("ptm subcommand emits matrices and a summary") {
  const auto dir = fresh_dir("ptm");
  const json noise = {{"cz",
                       {{"coherent", {{"pauli", "ZZ"}, {"theta", 0.1}}},
                        {"depolarizing", 0.99}}}};
  write_text_atomic(dir / "noise.json", noise.dump());
  REQUIRE(cli::dispatch({"ptm", "--config", (dir / "noise.json").string(), "--gate", "cz",
                         "--out", dir.string()}) == 0);
  const json summary = json::parse(slurp(dir / "ptm.json"));
  CHECK(summary.at("twirled_error_offdiagonal_max").get<double>() < 1e-10);
  CHECK(summary.at("error_offdiagonal_max").get<double>() > 1e-3);
  const std::string csv = slurp(dir / "ptm_twirled_error.csv");
  size_t rows = 0;
  for (char ch : csv) rows += ch == '\n';
  CHECK(rows == 19);  // manifest + config comments, header, 16 matrix rows
}

TEST_CASE("cb subcommand runs end to end") {
  const auto dir = fresh_dir("cb");
  const json cfg = {{"gate", "cz"},
                    {"paulis", {"ZZ", "XI"}},
                    {"depths", {2, 4}},
                    {"shots_per_depth", 80},
                    {"mode", "gateware-frc"},
                    {"noise", {{"cz", {{"depolarizing", 0.97}}}}}};
  write_text_atomic(dir / "cb.json", cfg.dump());
  REQUIRE(cli::dispatch({"cb", "--config", (dir / "cb.json").string(), "--seed", "5", "--out",
                         dir.string()}) == 0);
  const json r = json::parse(slurp(dir / "cb_results.json"));
  CHECK(r.at("fits").size() == 2);
  CHECK(r.at("points").size() == 4);
  CHECK(r.at("process_infidelity").get<double>() > 0);
  CHECK(slurp(dir / "cb_decays.csv").find("pauli,depth,mean,se,shots") != std::string::npos);
}

TEST_CASE("variance subcommand runs end to end") {
  const auto dir = fresh_dir("variance");
  const json cfg = {{"circuits", 4},
                    {"depth", 3},
                    {"shots", 60},
                    {"subsample", {{"size", 20}, {"resamples", 5}}},
                    {"noise", {{"cz", {{"coherent", {{"pauli", "ZZ"}, {"theta", 0.2}}}}}}}};
  write_text_atomic(dir / "var.json", cfg.dump());
  REQUIRE(cli::dispatch({"variance", "--config", (dir / "var.json").string(), "--seed", "6",
                         "--out", dir.string()}) == 0);
  const json r = json::parse(slurp(dir / "variance_results.json"));
  CHECK(r.at("modes").size() == 2);
  CHECK(r.contains("improved_fraction"));
  const std::string csv = slurp(dir / "variance_errors.csv");
  CHECK(csv.find("mode,circuit,observable,kind,resample,ideal,measured,error") !=
        std::string::npos);
  CHECK(csv.find("bare,0,IZ,full") != std::string::npos);
  CHECK(csv.find("frc,0,IZ,subsample,0") != std::string::npos);
}

TEST_CASE("profile subcommand runs end to end") {
  const auto dir = fresh_dir("profile");
  const json cfg = {{"widths", {2}},
                    {"depths", {4}},
                    {"n_randomizations", 5},
                    {"shots", 10},
                    {"min_measure_s", 0.005}};
  write_text_atomic(dir / "prof.json", cfg.dump());
  REQUIRE(cli::dispatch({"profile", "--config", (dir / "prof.json").string(), "--out",
                         dir.string()}) == 0);
  const json r = json::parse(slurp(dir / "profile_results.json"));
  CHECK(r.at("rows").size() == 2);
}

TEST_CASE("cli error reporting") {
  SUBCASE("unknown subcommand exits with the usage code") {
    CHECK(cli::dispatch({"frobnicate"}) == cli::kExitUsage);
  }
  SUBCASE("malformed circuit maps to the config exit code and names the field") {
    const auto dir = fresh_dir("badcircuit");
    write_text_atomic(dir / "bad.json", R"({"width": 1, "cycles": [{"type": "triple"}]})");
    CHECK(cli::dispatch({"rc", "--config", (dir / "bad.json").string(), "--out",
                         dir.string()}) == cli::kExitConfig);
  }
  SUBCASE("invalid alternation maps to the validation exit code") {
    const auto dir = fresh_dir("badalt");
    const json j = {{"width", 2},
                    {"cycles",
                     {{{"type", "two"}, {"gates", {{{"kind", "cz"}, {"qubits", {0, 1}}}}}},
                      {{"type", "single"}, {"gates", json::object()}}}}};
    write_text_atomic(dir / "bad.json", j.dump());
    CHECK(cli::dispatch({"rc", "--config", (dir / "bad.json").string(), "--out",
                         dir.string()}) == cli::kExitValidation);
  }
  SUBCASE("missing config file is a usage error") {
    CHECK(cli::dispatch({"rc", "--config", "/nonexistent/x.json"}) == cli::kExitUsage);
  }
}

}  // TEST_SUITE
