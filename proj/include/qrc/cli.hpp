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

#ifndef QRC_CLI_HPP
#define QRC_CLI_HPP

#include <ctime>
#include <iostream>

#include "CLI11.hpp"
#include "qrc/io.hpp"

namespace qrc::cli {

// Exit codes (also listed in --help):
//   0 ok, 2 usage, 3 config/schema, 4 circuit validation, 5 capacity,
//   6 instruction protocol, 7 internal fault, 8 i/o.
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitValidation = 4;
inline constexpr int kExitCapacity = 5;
inline constexpr int kExitProtocol = 6;
inline constexpr int kExitInternal = 7;
inline constexpr int kExitIo = 8;

namespace detail {

inline std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Collects one run's outputs and writes the manifest last. Result payloads
// carry no timestamps, so identical (subcommand, config, seed) runs are
// byte-identical; the wall-clock fields of `profile` are the one exception.
class RunWriter {
 public:
  RunWriter(std::filesystem::path out_dir, std::string subcommand, json config, uint64_t seed,
            std::string format = "both")
      : dir_(std::move(out_dir)),
        subcommand_(std::move(subcommand)),
        config_(std::move(config)),
        seed_(seed),
        digest_(config_digest(config_)),
        format_(std::move(format)) {}

  json run_header() const {
    return {{"subcommand", subcommand_}, {"config", config_},      {"config_digest", digest_},
            {"seed", seed_},             {"version", kVersion},    {"manifest", "manifest.json"}};
  }

  // JSON payloads are always written when a subcommand has no CSV form.
  void write_json(const std::string& name, json payload, bool always = false) {
    if (!always && format_ == "csv") return;
    payload["run"] = run_header();
    write_text_atomic(dir_ / name, payload.dump(2) + "\n");
    outputs_.push_back(name);
  }

  void write_csv(const std::string& name, const std::string& header_row,
                 const std::string& body) {
    if (format_ == "json") return;
    std::string content = "# manifest=manifest.json digest=" + digest_ + " seed=" +
                          std::to_string(seed_) + "\n# config=" + config_.dump() + "\n" +
                          header_row + "\n" + body;
    write_text_atomic(dir_ / name, content);
    outputs_.push_back(name);
  }

  void finish() {
    const json manifest = {{"subcommand", subcommand_}, {"config", config_},
                           {"config_digest", digest_},  {"seed", seed_},
                           {"version", kVersion},       {"created_utc", utc_now()},
                           {"outputs", outputs_}};
    write_text_atomic(dir_ / "manifest.json", manifest.dump(2) + "\n");
    for (const auto& o : outputs_) std::cout << (dir_ / o).string() << "\n";
    std::cout << (dir_ / "manifest.json").string() << "\n";
  }

  const std::string& digest() const { return digest_; }

 private:
  std::filesystem::path dir_;
  std::string subcommand_;
  json config_;
  uint64_t seed_;
  std::string digest_;
  std::string format_;
  std::vector<std::string> outputs_;
};

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

inline void cmd_tables(const std::string& out_dir, uint64_t seed, const std::string& format) {
  detail::RunWriter w(out_dir, "tables", json::object(), seed, format);
  w.write_json("tables.json", tables_to_json(), /*always=*/true);
  w.finish();
}

inline void cmd_rc(const std::string& config_path, const std::string& out_dir, uint64_t n,
                   uint64_t seed, bool exhaustive, const std::string& format) {
  const json circuit_json = load_json_file(config_path);
  const Circuit circuit = circuit_from_json(circuit_json);
  const json config = {{"circuit", circuit_json}, {"n", n}, {"exhaustive", exhaustive}};
  detail::RunWriter w(out_dir, "rc", config, seed, format);

  const std::vector<RandomizedCircuit> rands =
      exhaustive ? rc_exhaustive(circuit) : rc_ensemble(circuit, n, seed);
  json arr = json::array();
  for (const auto& r : rands)
    arr.push_back({{"circuit", circuit_to_json(r.circuit)},
                   {"twirl_record", twirl_record_to_json(r.record)}});
  w.write_json("rc_result.json", {{"count", rands.size()}, {"randomizations", arr}},
               /*always=*/true);
  w.finish();
}

inline void cmd_emulate(const std::string& config_path, const std::string& out_dir, size_t shots,
                        uint64_t seed, const GateDurations& durations, bool rc_on,
                        bool emit_circuits, const std::string& format) {
  const json circuit_json = load_json_file(config_path);
  const Circuit circuit = circuit_from_json(circuit_json);
  const json config = {{"circuit", circuit_json},
                       {"shots", shots},
                       {"rc", rc_on ? "on" : "off"},
                       {"durations", durations_to_json(durations)},
                       {"emit_circuits", emit_circuits}};
  detail::RunWriter w(out_dir, "emulate", config, seed, format);

  const CompiledCircuit compiled = compile_to_cores(circuit, durations, rc_on);
  const std::vector<ShotResult> results = run_shots(compiled, seed, shots);

  std::ostringstream csv;
  for (size_t s = 0; s < results.size(); ++s) {
    double running = 0;
    for (const auto& ct : results[s].timing.cycles) {
      running += ct.base_ns + ct.added_latency_ns;
      csv << s << ',' << ct.cycle << ',' << detail::format_double(ct.added_latency_ns) << ','
          << detail::format_double(running) << '\n';
    }
    running += results[s].timing.measure_ns;
    csv << s << ",measure,0," << detail::format_double(running) << '\n';
  }
  w.write_csv("timing.csv", "shot,cycle,added_latency_ns,total_ns", csv.str());

  if (emit_circuits) {
    json arr = json::array();
    for (const auto& r : results)
      arr.push_back({{"circuit", circuit_to_json(r.resolved)},
                     {"twirl_record", twirl_record_to_json(r.record)}});
    w.write_json("resolved.json", {{"shots", results.size()}, {"resolved", arr}});
  } else {
    json summary = {{"shots", results.size()},
                    {"total_ns_per_shot", results.empty() ? 0.0 : results[0].timing.total_ns()}};
    w.write_json("emulate_summary.json", summary);
  }
  w.finish();
}

inline void cmd_ptm(const std::string& config_path, const std::string& out_dir,
                    const std::string& gate_name, uint64_t seed, const std::string& format) {
  const json noise_json = load_json_file(config_path);
  const NoiseModel noise = noise_from_json(noise_json);
  const TwoQubitGateKind kind = gate_kind_from_name(gate_name);
  const json config = {{"noise", noise_json}, {"gate", gate_name}};
  detail::RunWriter w(out_dir, "ptm", config, seed, format);

  const Ptm ideal = ideal_ptm(kind);
  const Ptm noisy = ptm_of(noisy_channel(kind, noise));
  const Ptm raw_err = error_ptm(noisy, ideal);
  const Ptm twirled_err = twirl_average(kind, noise);

  json summary = {{"gate", gate_name},
                  {"error_offdiagonal_max", max_offdiagonal(raw_err)},
                  {"twirled_error_offdiagonal_max", max_offdiagonal(twirled_err)},
                  {"process_infidelity", process_infidelity_of_error_ptm(raw_err)},
                  {"twirled_process_infidelity", process_infidelity_of_error_ptm(twirled_err)}};

  w.write_csv("ptm_ideal.csv", "# 16x16 PTM of the ideal gate", ptm_to_csv(ideal));
  w.write_csv("ptm_noisy.csv", "# 16x16 PTM of the noisy gate", ptm_to_csv(noisy));
  w.write_csv("ptm_error.csv", "# error PTM: noisy o ideal^-1", ptm_to_csv(raw_err));
  w.write_csv("ptm_twirled_error.csv", "# error PTM after an exact 16-element twirl",
              ptm_to_csv(twirled_err));
  for (const auto& [label, err] : {std::pair<const char*, const Ptm&>{"bare", raw_err},
                                   std::pair<const char*, const Ptm&>{"twirled", twirled_err}}) {
    try {
      const ErrorGenerator g = error_generator(err, Ptm::identity(16));
      w.write_csv(std::string("error_generator_") + label + ".csv",
                  "# principal log of the error PTM", ptm_to_csv(g.matrix));
      summary[std::string(label) + "_generator_defined"] = true;
    } catch (const ConfigError&) {
      summary[std::string(label) + "_generator_defined"] = false;
    }
  }
  w.write_json("ptm.json", summary);
  w.finish();
}

inline void cmd_cb(const std::string& config_path, const std::string& out_dir, uint64_t seed,
                  const std::string& format) {
  const json config = load_json_file(config_path);
  const CbConfig cfg = cb_config_from_json(config);
  const NoiseModel noise =
      config.contains("noise") ? noise_from_json(config["noise"]) : NoiseModel{};
  const GateDurations durations =
      config.contains("durations") ? durations_from_json(config["durations"]) : GateDurations{};
  detail::RunWriter w(out_dir, "cb", config, seed, format);

  const CbResult result = run_cb(cfg, noise, seed, durations);

  json points = json::array();
  std::ostringstream csv;
  for (const auto& pt : result.points) {
    points.push_back({{"pauli", pt.pauli.str()},
                      {"depth", pt.depth},
                      {"mean", pt.mean},
                      {"se", pt.se},
                      {"shots", pt.shots}});
    csv << pt.pauli.str() << ',' << pt.depth << ',' << detail::format_double(pt.mean) << ','
        << detail::format_double(pt.se) << ',' << pt.shots << '\n';
  }
  json fits = json::array();
  for (const auto& f : result.fits)
    fits.push_back({{"pauli", f.pauli.str()},
                    {"amplitude", f.fit.amplitude},
                    {"decay", f.fit.decay},
                    {"amplitude_err", f.fit.amplitude_err},
                    {"decay_err", f.fit.decay_err}});
  w.write_json("cb_results.json",
               {{"mode", rc_mode_name(result.mode)},
                {"points", points},
                {"fits", fits},
                {"process_infidelity", result.infidelity.value},
                {"process_infidelity_err", result.infidelity.err}});
  w.write_csv("cb_decays.csv", "pauli,depth,mean,se,shots", csv.str());
  w.finish();
}

inline void cmd_variance(const std::string& config_path, const std::string& out_dir,
                         uint64_t seed, const std::string& format) {
  const json config = load_json_file(config_path);
  const VarianceConfig cfg = variance_config_from_json(config);
  const NoiseModel noise =
      config.contains("noise") ? noise_from_json(config["noise"]) : NoiseModel{};
  const GateDurations durations =
      config.contains("durations") ? durations_from_json(config["durations"]) : GateDurations{};
  detail::RunWriter w(out_dir, "variance", config, seed, format);

  const VarianceResult result = variance_study(cfg, noise, seed, durations);

  json modes = json::array();
  std::ostringstream csv;
  for (const auto& mode : result.modes) {
    json circuits = json::array();
    for (size_t ci = 0; ci < mode.circuits.size(); ++ci) {
      const auto& cd = mode.circuits[ci];
      json obs = json::array();
      for (size_t oi = 0; oi < cfg.observables.size(); ++oi) {
        obs.push_back({{"observable", cfg.observables[oi].str()},
                       {"ideal", cd.ideal[oi]},
                       {"measured", cd.measured[oi]},
                       {"error", cd.error[oi]},
                       {"subsample_errors", cd.subsample_errors[oi]}});
        csv << mode.name << ',' << ci << ',' << cfg.observables[oi].str() << ",full,,"
            << detail::format_double(cd.ideal[oi]) << ','
            << detail::format_double(cd.measured[oi]) << ','
            << detail::format_double(cd.error[oi]) << '\n';
        for (size_t r = 0; r < cd.subsample_errors[oi].size(); ++r)
          csv << mode.name << ',' << ci << ',' << cfg.observables[oi].str() << ",subsample," << r
              << ",,," << detail::format_double(cd.subsample_errors[oi][r]) << '\n';
      }
      circuits.push_back({{"observables", obs}});
    }
    modes.push_back({{"mode", mode.name},
                     {"mean_error", mode.mean},
                     {"variance", mode.variance},
                     {"circuits", circuits}});
  }
  json payload = {{"modes", modes}};
  if (result.improved_fraction >= 0) payload["improved_fraction"] = result.improved_fraction;
  w.write_json("variance_results.json", payload);
  w.write_csv("variance_errors.csv", "mode,circuit,observable,kind,resample,ideal,measured,error",
              csv.str());
  w.finish();
}

inline void cmd_profile(const std::string& config_path, const std::string& out_dir, uint64_t seed,
                        const std::string& format) {
  const json config = load_json_file(config_path);
  const ProfileConfig cfg = profile_config_from_json(config);
  detail::RunWriter w(out_dir, "profile", config, seed, format);

  const std::vector<ProfileRow> rows = time_profile(cfg, seed);

  json arr = json::array();
  std::ostringstream csv;
  for (const auto& r : rows) {
    arr.push_back({{"width", r.width},
                   {"depth", r.depth},
                   {"mode", rc_mode_name(r.mode)},
                   {"n_randomizations", r.n_randomizations},
                   {"pre_compile_s", r.pre_compile_s},
                   {"compile_assemble_s", r.compile_assemble_s},
                   {"load_circuit_s", r.load_circuit_s},
                   {"run_circuit_s", r.run_circuit_s},
                   {"get_data_s", r.get_data_s},
                   {"client_server_s", r.client_server_s},
                   {"total_s", r.total_s()}});
    csv << r.width << ',' << r.depth << ',' << rc_mode_name(r.mode) << ','
        << r.n_randomizations << ',' << detail::format_double(r.pre_compile_s) << ','
        << detail::format_double(r.compile_assemble_s) << ','
        << detail::format_double(r.load_circuit_s) << ','
        << detail::format_double(r.run_circuit_s) << ','
        << detail::format_double(r.get_data_s) << ','
        << detail::format_double(r.client_server_s) << ','
        << detail::format_double(r.total_s()) << '\n';
  }
  w.write_json("profile_results.json",
               {{"rows", arr},
                {"note", "load/get-data/client-server are modeled constants; pre-compile and "
                         "compile-assemble are measured wall clock"}});
  w.write_csv("profile.csv",
              "width,depth,mode,n_randomizations,pre_compile_s,compile_assemble_s,load_circuit_s,"
              "run_circuit_s,get_data_s,client_server_s,total_s",
              csv.str());
  w.finish();
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

inline int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"randomized-compiling toolkit: software pass, gateware emulator, channel "
               "simulator, experiment runners"};
  app.name("qrc");
  app.footer(
      "Config schemas (JSON):\n"
      "  circuit  {\"width\": int, \"cycles\": [\n"
      "             {\"type\": \"single\", \"gates\": {\"<qubit>\": [phi0, phi1, phi2]}},\n"
      "             {\"type\": \"two\",    \"gates\": [{\"kind\": \"cz|cnot|identity\",\n"
      "                                            \"qubits\": [a, b]}]} ]}\n"
      "           Angles in radians; cycles alternate and start/end with single.\n"
      "  noise    {\"cz|cnot|identity\": {\"coherent\": {\"pauli\": \"ZZ\", \"theta\": x},\n"
      "             \"stochastic\": {\"XX\": p, ...} | \"depolarizing\": lambda,\n"
      "             \"damping\": gamma}, \"x90\": {\"overrotation\": eps}}\n"
      "  cb       {\"gate\", \"pair\", \"paulis\", \"depths\" (even, >= 2),\n"
      "            \"shots_per_depth\", \"mode\": \"software-rc|gateware-frc\",\n"
      "            \"n_randomizations\", \"noise\", \"durations\"}\n"
      "  variance {\"circuits\", \"width\": 2, \"depth\", \"shots\",\n"
      "            \"subsample\": {\"size\", \"resamples\"}, \"modes\": [\"bare\",\"frc\"],\n"
      "            \"observables\" (I/Z only), \"noise\", \"durations\"}\n"
      "  profile  {\"widths\", \"depths\", \"modes\", \"n_randomizations\", \"shots\",\n"
      "            \"durations\": {\"single_cycle_ns\", \"two_cycle_ns\", \"measure_ns\"},\n"
      "            \"stage_constants\": {\"load_circuit_s\", \"get_data_s\",\n"
      "            \"client_server_s\"}, \"min_measure_s\"}\n"
      "\n"
      "Exit codes: 0 ok, 2 usage, 3 config/schema, 4 circuit validation, 5 capacity,\n"
      "            6 instruction protocol, 7 internal fault, 8 i/o.\n"
      "Environment: QRC_THREADS caps worker threads for experiment grids (default 1);\n"
      "results are identical for any thread count.");
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", format = "both", gate = "cz", rc_flag = "on";
  uint64_t seed = 0, n = 1;
  size_t shots = 1;
  bool exhaustive = false, emit_circuits = false;
  GateDurations durations;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config)
      sub->add_option("--config", config_path, "input config/circuit JSON")
          ->required()
          ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed; all randomness derives from it");
    sub->add_option("--out", out_dir, "output directory (default: .)");
    sub->add_option("--format", format, "json, csv, or both (default both)")
        ->check(CLI::IsMember({"json", "csv", "both"}));
  };

  CLI::App* tables = app.add_subcommand(
      "tables", "dump the Pauli propagation and phase-absorption lookup tables");
  add_common(tables, false);

  CLI::App* rc = app.add_subcommand(
      "rc", "software randomized compiling: emit n randomizations of a circuit");
  add_common(rc, true);
  rc->add_option("--n", n, "number of randomizations");
  rc->add_flag("--exhaustive", exhaustive, "enumerate every twirl assignment exactly once");

  CLI::App* emulate = app.add_subcommand(
      "emulate", "cycle-accurate gateware emulation: per-shot randomization and timing");
  add_common(emulate, true);
  emulate->add_option("--shots", shots, "number of shots");
  emulate->add_option("--gate-ns", durations.single_cycle_ns,
                      "single-qubit cycle pulse duration in ns (two X90 pulses)");
  emulate->add_option("--two-ns", durations.two_cycle_ns, "two-qubit cycle duration in ns");
  emulate->add_option("--measure-ns", durations.measure_ns, "measurement duration in ns");
  emulate->add_option("--rc", rc_flag, "on or off")->check(CLI::IsMember({"on", "off"}));
  emulate->add_flag("--emit-circuits", emit_circuits, "write per-shot resolved circuits");

  CLI::App* ptm = app.add_subcommand(
      "ptm", "Pauli transfer matrices and error generators for a noisy gate");
  add_common(ptm, true);
  ptm->add_option("--gate", gate, "cz, cnot, or identity")
      ->check(CLI::IsMember({"cz", "cnot", "identity"}));

  CLI::App* cb = app.add_subcommand("cb", "cycle benchmarking with decay fits");
  add_common(cb, true);

  CLI::App* variance = app.add_subcommand(
      "variance", "observable-error distributions with and without per-shot randomization");
  add_common(variance, true);

  CLI::App* profile = app.add_subcommand("profile", "pipeline stage timing across a grid");
  add_common(profile, true);

  std::vector<const char*> argv;
  argv.push_back("qrc");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (tables->parsed()) cmd_tables(out_dir, seed, format);
    if (rc->parsed()) cmd_rc(config_path, out_dir, n, seed, exhaustive, format);
    if (emulate->parsed())
      cmd_emulate(config_path, out_dir, shots, seed, durations, rc_flag == "on", emit_circuits,
                  format);
    if (ptm->parsed()) cmd_ptm(config_path, out_dir, gate, seed, format);
    if (cb->parsed()) cmd_cb(config_path, out_dir, seed, format);
    if (variance->parsed()) cmd_variance(config_path, out_dir, seed, format);
    if (profile->parsed()) cmd_profile(config_path, out_dir, seed, format);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << json{{"error", {{"type", "config"}, {"message", e.what()}}}}.dump() << "\n";
    return kExitConfig;
  } catch (const ValidationError& e) {
    std::cerr << json{{"error", {{"type", "validation"}, {"message", e.what()}}}}.dump() << "\n";
    return kExitValidation;
  } catch (const CapacityError& e) {
    std::cerr << json{{"error", {{"type", "capacity"}, {"message", e.what()}}}}.dump() << "\n";
    return kExitCapacity;
  } catch (const ProtocolError& e) {
    std::cerr << json{{"error", {{"type", "protocol"}, {"message", e.what()}}}}.dump() << "\n";
    return kExitProtocol;
  } catch (const InternalError& e) {
    std::cerr << json{{"error", {{"type", "internal"}, {"message", e.what()}}}}.dump() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"type", "io"}, {"message", e.what()}}}}.dump() << "\n";
    return kExitIo;
  }
}

}  // namespace qrc::cli

#endif
