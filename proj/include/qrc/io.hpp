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

#ifndef QRC_IO_HPP
#define QRC_IO_HPP

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qrc/experiments.hpp"

namespace qrc {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Circuit schema
// ---------------------------------------------------------------------------
//
// {"width": 2,
//  "cycles": [
//    {"type": "single", "gates": {"0": [phi0, phi1, phi2]}},
//    {"type": "two",    "gates": [{"kind": "cz", "qubits": [0, 1]}]}
//  ]}
// Angles are decimal radians.

inline json circuit_to_json(const Circuit& c) {
  json cycles = json::array();
  for (const auto& cy : c.cycles) {
    json entry;
    if (cy.tag == CycleTag::SINGLE) {
      entry["type"] = "single";
      json gates = json::object();
      for (const auto& [q, t] : cy.singles)
        gates[std::to_string(q)] = {t.phi0, t.phi1, t.phi2};
      entry["gates"] = gates;
    } else {
      entry["type"] = "two";
      json gates = json::array();
      for (const auto& g : cy.gates) {
        gates.push_back({{"kind", gate_kind_name(g.kind)}, {"qubits", {g.q0, g.q1}}});
      }
      entry["gates"] = gates;
    }
    cycles.push_back(entry);
  }
  return {{"width", c.width}, {"cycles", cycles}};
}

namespace detail {

[[noreturn]] inline void schema_fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

inline double require_number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_fail(where, "expected a number");
  return j.get<double>();
}

}  // namespace detail

inline Circuit circuit_from_json(const json& j) {
  if (!j.is_object()) detail::schema_fail("circuit", "expected an object");
  if (!j.contains("width")) detail::schema_fail("circuit.width", "missing");
  if (!j["width"].is_number_integer() || j["width"].get<int64_t>() < 1)
    detail::schema_fail("circuit.width", "expected a positive integer");
  if (!j.contains("cycles") || !j["cycles"].is_array())
    detail::schema_fail("circuit.cycles", "expected an array");

  Circuit c;
  c.width = j["width"].get<size_t>();
  size_t idx = 0;
  for (const auto& entry : j["cycles"]) {
    const std::string where = "circuit.cycles[" + std::to_string(idx) + "]";
    if (!entry.is_object() || !entry.contains("type"))
      detail::schema_fail(where + ".type", "missing");
    const std::string type = entry["type"].get<std::string>();
    if (!entry.contains("gates")) detail::schema_fail(where + ".gates", "missing");
    const json& gates = entry["gates"];
    if (type == "single") {
      if (!gates.is_object()) detail::schema_fail(where + ".gates", "expected an object");
      Cycle cy = Cycle::single();
      for (const auto& [key, val] : gates.items()) {
        size_t q = 0;
        try {
          q = std::stoul(key);
        } catch (...) {
          detail::schema_fail(where + ".gates." + key, "qubit key must be an integer");
        }
        if (!val.is_array() || val.size() != 3)
          detail::schema_fail(where + ".gates." + key, "expected [phi0, phi1, phi2]");
        cy.singles[q] = PhaseTriple(detail::require_number(val[0], where + ".gates." + key),
                                    detail::require_number(val[1], where + ".gates." + key),
                                    detail::require_number(val[2], where + ".gates." + key));
      }
      c.cycles.push_back(std::move(cy));
    } else if (type == "two") {
      if (!gates.is_array()) detail::schema_fail(where + ".gates", "expected an array");
      Cycle cy = Cycle::two();
      size_t gi = 0;
      for (const auto& g : gates) {
        const std::string gwhere = where + ".gates[" + std::to_string(gi++) + "]";
        if (!g.is_object() || !g.contains("kind")) detail::schema_fail(gwhere + ".kind", "missing");
        const TwoQubitGateKind kind = gate_kind_from_name(g["kind"].get<std::string>());
        if (!g.contains("qubits") || !g["qubits"].is_array() || g["qubits"].size() != 2)
          detail::schema_fail(gwhere + ".qubits", "expected [a, b]");
        cy.gates.emplace_back(kind, g["qubits"][0].get<size_t>(), g["qubits"][1].get<size_t>());
      }
      c.cycles.push_back(std::move(cy));
    } else {
      detail::schema_fail(where + ".type", "expected 'single' or 'two'");
    }
    ++idx;
  }
  const ValidationReport r = validate(c);
  if (!r.valid) throw ValidationError("circuit: " + r.message);
  return c;
}

// ---------------------------------------------------------------------------
// Noise schema
// ---------------------------------------------------------------------------
//
// {"cz":  {"coherent": {"pauli": "ZZ", "theta": 0.1},
//          "stochastic": {"XX": 0.01, ...},     // or "depolarizing": 0.98
//          "damping": 0.02},
//  "x90": {"overrotation": 0.01}}

inline json noise_to_json(const NoiseModel& n) {
  json out = json::object();
  for (const auto& [kind, tn] : n.two_qubit) {
    json entry = json::object();
    if (tn.coherent)
      entry["coherent"] = {{"pauli", tn.coherent->axis.str()}, {"theta", tn.coherent->theta}};
    if (tn.stochastic_total() > 0) {
      json st = json::object();
      for (uint8_t c = 1; c < 16; ++c)
        if (tn.stochastic[c] > 0) st[PauliPair::from_code(c).str()] = tn.stochastic[c];
      entry["stochastic"] = st;
    }
    if (tn.damping > 0) entry["damping"] = tn.damping;
    out[gate_kind_name(kind)] = entry;
  }
  if (n.x90_overrotation != 0) out["x90"] = {{"overrotation", n.x90_overrotation}};
  return out;
}

inline NoiseModel noise_from_json(const json& j) {
  if (!j.is_object()) detail::schema_fail("noise", "expected an object");
  NoiseModel n;
  for (const auto& [key, val] : j.items()) {
    if (key == "x90") {
      if (!val.is_object()) detail::schema_fail("noise.x90", "expected an object");
      for (const auto& [k2, v2] : val.items()) {
        if (k2 == "overrotation")
          n.x90_overrotation = detail::require_number(v2, "noise.x90.overrotation");
        else
          detail::schema_fail("noise.x90." + k2, "unknown field");
      }
      continue;
    }
    const TwoQubitGateKind kind = gate_kind_from_name(key);
    TwoQubitNoise tn;
    bool has_stochastic = false, has_depol = false;
    if (!val.is_object()) detail::schema_fail("noise." + key, "expected an object");
    for (const auto& [k2, v2] : val.items()) {
      const std::string where = "noise." + key + "." + k2;
      if (k2 == "coherent") {
        if (!v2.is_object() || !v2.contains("pauli") || !v2.contains("theta"))
          detail::schema_fail(where, "expected {pauli, theta}");
        CoherentTerm c;
        c.axis = PauliPair::from_str(v2["pauli"].get<std::string>());
        if (c.axis.code() == 0) detail::schema_fail(where + ".pauli", "axis must not be II");
        c.theta = detail::require_number(v2["theta"], where + ".theta");
        tn.coherent = c;
      } else if (k2 == "stochastic") {
        if (!v2.is_object()) detail::schema_fail(where, "expected an object");
        has_stochastic = true;
        for (const auto& [pk, pv] : v2.items()) {
          const PauliPair p = PauliPair::from_str(pk);
          if (p.code() == 0) detail::schema_fail(where + ".II", "identity carries no probability");
          tn.stochastic[p.code()] = detail::require_number(pv, where + "." + pk);
        }
      } else if (k2 == "depolarizing") {
        has_depol = true;
        const double lambda = detail::require_number(v2, where);
        if (lambda < -1.0 / 15.0 || lambda > 1)
          detail::schema_fail(where, "depolarizing parameter out of range");
        tn.stochastic = TwoQubitNoise::depolarizing(lambda).stochastic;
      } else if (k2 == "damping") {
        tn.damping = detail::require_number(v2, where);
      } else {
        detail::schema_fail(where, "unknown field");
      }
    }
    if (has_stochastic && has_depol)
      detail::schema_fail("noise." + key, "give either 'stochastic' or 'depolarizing', not both");
    tn.validate();
    n.two_qubit[kind] = tn;
  }
  n.validate();
  return n;
}

// ---------------------------------------------------------------------------
// Tables, twirl records, PTMs
// ---------------------------------------------------------------------------

inline json tables_to_json() {
  const PauliTables& t = tables();
  json prop = json::object();
  for (const auto* table : {&t.cz, &t.cnot, &t.identity}) {
    json rows = json::array();
    for (uint8_t c = 0; c < 16; ++c) {
      const PropEntry& e = table->propagate(c);
      rows.push_back({{"in", PauliPair::from_code(c).str()},
                      {"out", e.out.str()},
                      {"sign", e.sign}});
    }
    prop[gate_kind_name(table->kind())] = rows;
  }
  json absorption = json::array();
  for (uint8_t post = 0; post < 4; ++post)
    for (uint8_t pre = 0; pre < 4; ++pre)
      for (int slot = 0; slot < 3; ++slot) {
        absorption.push_back(
            {{"post", std::string(1, pauli_char(pauli_from_code(post)))},
             {"pre", std::string(1, pauli_char(pauli_from_code(pre)))},
             {"slot", slot},
             {"fn", phase_fn_name(t.absorption.fn(pauli_from_code(post), pauli_from_code(pre),
                                                  slot))}});
      }
  return {{"propagation", prop}, {"absorption", absorption}};
}

inline json twirl_record_to_json(const TwirlRecord& r) {
  json cycles = json::array();
  for (const auto& ct : r.cycles) {
    json twirl = json::array(), inv = json::array();
    for (Pauli p : ct.twirl) twirl.push_back(std::string(1, pauli_char(p)));
    for (Pauli p : ct.inversion) inv.push_back(std::string(1, pauli_char(p)));
    cycles.push_back({{"word", ct.word}, {"twirl", twirl}, {"inversion", inv}});
  }
  return cycles;
}

inline std::string ptm_to_csv(const RMat& m) {
  std::ostringstream os;
  os.precision(17);
  for (size_t i = 0; i < m.rows(); ++i) {
    for (size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << m(i, j);
    }
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Experiment configs
// ---------------------------------------------------------------------------

inline GateDurations durations_from_json(const json& j) {
  GateDurations d;
  for (const auto& [k, v] : j.items()) {
    if (k == "single_cycle_ns")
      d.single_cycle_ns = detail::require_number(v, "durations.single_cycle_ns");
    else if (k == "two_cycle_ns")
      d.two_cycle_ns = detail::require_number(v, "durations.two_cycle_ns");
    else if (k == "measure_ns")
      d.measure_ns = detail::require_number(v, "durations.measure_ns");
    else
      detail::schema_fail("durations." + k, "unknown field");
  }
  return d;
}

inline json durations_to_json(const GateDurations& d) {
  return {{"single_cycle_ns", d.single_cycle_ns},
          {"two_cycle_ns", d.two_cycle_ns},
          {"measure_ns", d.measure_ns}};
}

inline CbConfig cb_config_from_json(const json& j) {
  CbConfig cfg;
  for (const auto& [k, v] : j.items()) {
    if (k == "gate")
      cfg.gate = gate_kind_from_name(v.get<std::string>());
    else if (k == "pair") {
      if (!v.is_array() || v.size() != 2) detail::schema_fail("cb.pair", "expected [a, b]");
      cfg.q0 = v[0].get<size_t>();
      cfg.q1 = v[1].get<size_t>();
    } else if (k == "paulis") {
      cfg.paulis.clear();
      for (const auto& p : v) cfg.paulis.push_back(PauliPair::from_str(p.get<std::string>()));
    } else if (k == "depths") {
      cfg.depths = v.get<std::vector<int>>();
    } else if (k == "shots_per_depth") {
      cfg.shots_per_depth = v.get<int>();
    } else if (k == "mode") {
      cfg.mode = rc_mode_from_name(v.get<std::string>());
    } else if (k == "n_randomizations") {
      cfg.n_randomizations = v.get<int>();
    } else if (k == "noise" || k == "durations") {
      // handled by the caller
    } else {
      detail::schema_fail("cb." + k, "unknown field");
    }
  }
  cfg.validate();
  return cfg;
}

inline VarianceConfig variance_config_from_json(const json& j) {
  VarianceConfig cfg;
  for (const auto& [k, v] : j.items()) {
    if (k == "circuits")
      cfg.n_circuits = v.get<int>();
    else if (k == "width")
      cfg.width = v.get<size_t>();
    else if (k == "depth")
      cfg.depth = v.get<int>();
    else if (k == "shots")
      cfg.shots = v.get<int>();
    else if (k == "subsample") {
      if (v.contains("size")) cfg.subsample_size = v["size"].get<int>();
      if (v.contains("resamples")) cfg.subsamples = v["resamples"].get<int>();
    } else if (k == "modes") {
      cfg.run_bare = cfg.run_frc = false;
      for (const auto& m : v) {
        const std::string name = m.get<std::string>();
        if (name == "bare")
          cfg.run_bare = true;
        else if (name == "frc")
          cfg.run_frc = true;
        else
          detail::schema_fail("variance.modes", "expected 'bare' or 'frc'");
      }
    } else if (k == "observables") {
      cfg.observables.clear();
      for (const auto& o : v) cfg.observables.push_back(PauliPair::from_str(o.get<std::string>()));
    } else if (k == "noise" || k == "durations") {
      // handled by the caller
    } else {
      detail::schema_fail("variance." + k, "unknown field");
    }
  }
  cfg.validate();
  return cfg;
}

inline ProfileConfig profile_config_from_json(const json& j) {
  ProfileConfig cfg;
  for (const auto& [k, v] : j.items()) {
    if (k == "widths")
      cfg.widths = v.get<std::vector<size_t>>();
    else if (k == "depths")
      cfg.depths = v.get<std::vector<int>>();
    else if (k == "modes") {
      cfg.modes.clear();
      for (const auto& m : v) cfg.modes.push_back(rc_mode_from_name(m.get<std::string>()));
    } else if (k == "n_randomizations")
      cfg.n_randomizations = v.get<int>();
    else if (k == "shots")
      cfg.shots = v.get<int>();
    else if (k == "durations")
      cfg.durations = durations_from_json(v);
    else if (k == "stage_constants") {
      for (const auto& [sk, sv] : v.items()) {
        if (sk == "load_circuit_s")
          cfg.constants.load_circuit_s = detail::require_number(sv, "profile.stage_constants");
        else if (sk == "get_data_s")
          cfg.constants.get_data_s = detail::require_number(sv, "profile.stage_constants");
        else if (sk == "client_server_s")
          cfg.constants.client_server_s = detail::require_number(sv, "profile.stage_constants");
        else
          detail::schema_fail("profile.stage_constants." + sk, "unknown field");
      }
    } else if (k == "min_measure_s")
      cfg.min_measure_s = detail::require_number(v, "profile.min_measure_s");
    else
      detail::schema_fail("profile." + k, "unknown field");
  }
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------
// Files, digests, manifests
// ---------------------------------------------------------------------------

// FNV-1a over the canonical (sorted-key) dump: stable under key reordering.
inline std::string config_digest(const json& j) {
  const std::string s = j.dump();
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Write-then-rename so outputs appear atomically or not at all.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os << content;
    if (!os.flush()) throw std::runtime_error("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline json load_json_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return j;
}

}  // namespace qrc

#endif
