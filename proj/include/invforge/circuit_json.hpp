// Copyright 2026 The invforge Authors
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

#ifndef INVFORGE_CIRCUIT_JSON_HPP
#define INVFORGE_CIRCUIT_JSON_HPP

#include <fstream>
#include <sstream>
#include <string>

#include "invforge/circuit.hpp"
#include "json.hpp"

namespace invforge {

using json = nlohmann::ordered_json;

inline json complex_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ValidationError("complex values are encoded as [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json gate_to_json(const Gate& g) {
  json j;
  j["kind"] = std::string(to_string(g.kind));
  j["params"] = g.params;
  j["qubits"] = g.qubits;
  j["variant"] = g.is_inverse() ? "inverse" : "standard";
  j["pair_id"] = g.pair_id ? json(*g.pair_id) : json(nullptr);
  if (g.kind == GateKind::MCU) {
    json u = json::array();
    for (const cplx& v : g.target_unitary.data()) u.push_back(complex_to_json(v));
    j["unitary"] = u;
  }
  return j;
}

inline Gate gate_from_json(const json& j) {
  try {
    Gate g;
    g.kind = gate_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("params")) g.params = j.at("params").get<std::vector<double>>();
    g.qubits = j.at("qubits").get<std::vector<QubitId>>();
    const std::string variant = j.value("variant", std::string("standard"));
    if (variant == "inverse")
      g.variant = Variant::Inverse;
    else if (variant != "standard")
      throw ValidationError("unknown gate variant '" + variant + "'");
    if (j.contains("pair_id") && !j.at("pair_id").is_null()) g.pair_id = j.at("pair_id").get<PairId>();
    if (g.kind == GateKind::MCU) {
      const json& u = j.at("unitary");
      if (!u.is_array() || u.size() != 4) throw ValidationError("mcu unitary must list 4 entries");
      g.target_unitary = Matrix(2, 2);
      for (std::size_t i = 0; i < 4; ++i) g.target_unitary.data()[i] = complex_from_json(u[i]);
    }
    return g;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed gate: ") + e.what());
  }
}

inline json circuit_to_json(const Circuit& c) {
  json j;
  j["n_qubits"] = c.n_qubits;
  json gs = json::array();
  for (const Gate& g : c.gates) gs.push_back(gate_to_json(g));
  j["gates"] = gs;
  return j;
}

inline Circuit circuit_from_json(const json& j) {
  Circuit c;
  try {
    c.n_qubits = j.at("n_qubits").get<std::size_t>();
    for (const json& g : j.at("gates")) c.gates.push_back(gate_from_json(g));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed circuit: ") + e.what());
  }
  validate(c);
  return c;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("parse error in '" + path + "': " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace invforge

#endif  // INVFORGE_CIRCUIT_JSON_HPP
