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

// Benchmark program generators. Every generator annotates the hidden-inverse
// pairs it creates structurally, before any gate-level pass runs.

#ifndef INVFORGE_SYNTH_HPP
#define INVFORGE_SYNTH_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "invforge/circuit.hpp"
#include "invforge/circuit_json.hpp"
#include "invforge/decompose.hpp"

namespace invforge {

enum class Pauli { X, Y, Z };

struct PauliTerm {
  QubitId qubit = 0;
  Pauli pauli = Pauli::Z;
};

/// Tensor product of non-identity Pauli operators; identity qubits omitted.
struct PauliString {
  std::vector<PauliTerm> ops;
  double coefficient = 1.0;

  /// Parses "X3 Z2 Z1 Y0" style strings.
  static PauliString parse(const std::string& text, double coefficient = 1.0) {
    PauliString p;
    p.coefficient = coefficient;
    std::size_t i = 0;
    while (i < text.size()) {
      if (text[i] == ' ') {
        ++i;
        continue;
      }
      PauliTerm t;
      switch (text[i]) {
        case 'X': t.pauli = Pauli::X; break;
        case 'Y': t.pauli = Pauli::Y; break;
        case 'Z': t.pauli = Pauli::Z; break;
        default: throw ValidationError("PauliString: unexpected character in '" + text + "'");
      }
      std::size_t j = ++i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j == i) throw ValidationError("PauliString: missing qubit index in '" + text + "'");
      t.qubit = static_cast<QubitId>(std::stoul(text.substr(i, j - i)));
      p.ops.push_back(t);
      i = j;
    }
    return p;
  }
};

enum class CxTree { Ladder, Balanced };

namespace detail {

inline void validate_pauli_string(const PauliString& p) {
  if (p.ops.empty()) throw ValidationError("PauliString must contain at least one non-identity operator");
  std::vector<QubitId> qs;
  for (const auto& t : p.ops) qs.push_back(t.qubit);
  std::sort(qs.begin(), qs.end());
  if (std::adjacent_find(qs.begin(), qs.end()) != qs.end()) throw ValidationError("PauliString: repeated qubit");
}

/// Uniform double in [0, 1) from the top 53 bits; portable across standard libraries.
inline double unit_uniform(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace detail

/// Gates for exp(-i theta/2 P): basis change, CX tree onto the highest active
/// qubit, RZ(theta), the mirrored tree and the undone basis change. Mirrored
/// CX and H gates are marked Inverse and paired with their left partners.
inline std::vector<Gate> pauli_string_gates(const PauliString& p, double theta, PairIdAllocator& ids,
                                            CxTree tree = CxTree::Ladder) {
  detail::validate_pauli_string(p);
  std::vector<PauliTerm> ops = p.ops;
  std::sort(ops.begin(), ops.end(), [](const PauliTerm& a, const PauliTerm& b) { return a.qubit < b.qubit; });

  std::vector<Gate> basis;
  for (const auto& t : ops) {
    if (t.pauli == Pauli::X) basis.push_back(gates::paired(gates::h(t.qubit), ids.fresh()));
    if (t.pauli == Pauli::Y) basis.push_back(gates::rx(t.qubit, kPi / 2));
  }

  std::vector<Gate> ladder;
  std::vector<QubitId> active;
  for (const auto& t : ops) active.push_back(t.qubit);
  if (tree == CxTree::Ladder) {
    for (std::size_t k = 0; k + 1 < active.size(); ++k)
      ladder.push_back(gates::paired(gates::cx(active[k], active[k + 1]), ids.fresh()));
  } else {
    while (active.size() > 1) {
      std::vector<QubitId> next;
      for (std::size_t k = 0; k < active.size(); k += 2) {
        if (k + 1 < active.size()) {
          ladder.push_back(gates::paired(gates::cx(active[k], active[k + 1]), ids.fresh()));
          next.push_back(active[k + 1]);
        } else {
          next.push_back(active[k]);
        }
      }
      active = std::move(next);
    }
  }
  const QubitId top = ops.back().qubit;

  std::vector<Gate> out = basis;
  out.insert(out.end(), ladder.begin(), ladder.end());
  out.push_back(gates::rz(top, theta));
  for (auto it = ladder.rbegin(); it != ladder.rend(); ++it) out.push_back(gates::inverse(*it, it->pair_id));
  for (auto it = basis.rbegin(); it != basis.rend(); ++it) {
    if (it->kind == GateKind::H)
      out.push_back(gates::inverse(*it, it->pair_id));
    else
      out.push_back(gates::rx(it->qubits[0], -kPi / 2));
  }
  return out;
}

inline Circuit pauli_string_circuit(const PauliString& p, double theta, std::size_t n_qubits = 0,
                                    CxTree tree = CxTree::Ladder) {
  detail::validate_pauli_string(p);
  QubitId top = 0;
  for (const auto& t : p.ops) top = std::max(top, t.qubit);
  Circuit c(n_qubits == 0 ? top + 1 : n_qubits);
  PairIdAllocator ids;
  c.append(pauli_string_gates(p, theta, ids, tree));
  validate(c);
  return c;
}

enum class SpinModel { Ising, XY, Heisenberg };

inline SpinModel spin_model_from_string(const std::string& s) {
  if (s == "ising") return SpinModel::Ising;
  if (s == "xy") return SpinModel::XY;
  if (s == "heisenberg") return SpinModel::Heisenberg;
  throw ValidationError("unknown spin model '" + s + "'");
}

/// Nearest-neighbour chain Hamiltonian terms, ordered by term type then bond.
/// Ising = J ZZ + h X, XY = J (XX + YY), Heisenberg = J (XX + YY + ZZ).
inline std::vector<PauliString> spin_model_terms(SpinModel model, std::size_t n, double coupling, double field) {
  std::vector<PauliString> terms;
  const auto bond_terms = [&](Pauli p) {
    for (QubitId q = 0; q + 1 < n; ++q) terms.push_back({{{q, p}, {q + 1, p}}, coupling});
  };
  switch (model) {
    case SpinModel::Ising:
      bond_terms(Pauli::Z);
      if (field != 0.0)
        for (QubitId q = 0; q < n; ++q) terms.push_back({{{q, Pauli::X}}, field});
      break;
    case SpinModel::XY:
      bond_terms(Pauli::X);
      bond_terms(Pauli::Y);
      break;
    case SpinModel::Heisenberg:
      bond_terms(Pauli::X);
      bond_terms(Pauli::Y);
      bond_terms(Pauli::Z);
      break;
  }
  return terms;
}

/// First-order Trotter circuit for exp(-i H steps*dt).
inline Circuit trotter_circuit(SpinModel model, std::size_t n_qubits, double coupling, double field, int steps,
                               double dt, CxTree tree = CxTree::Ladder) {
  if (n_qubits < 2) throw ValidationError("trotter_circuit: needs at least two qubits");
  if (steps < 1) throw ValidationError("trotter_circuit: steps must be >= 1");
  Circuit c(n_qubits);
  PairIdAllocator ids;
  const auto terms = spin_model_terms(model, n_qubits, coupling, field);
  for (int s = 0; s < steps; ++s)
    for (const auto& term : terms) c.append(pauli_string_gates(term, 2.0 * term.coefficient * dt, ids, tree));
  validate(c);
  return c;
}

using Edge = std::pair<QubitId, QubitId>;

inline std::vector<Edge> ring_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (QubitId q = 0; q < n; ++q) edges.emplace_back(q, static_cast<QubitId>((q + 1) % n));
  return edges;
}

/// QAOA for MaxCut: H layer, then per round one ZZ phase CX.RZ(2 gamma).CX per
/// edge (second CX marked) and an RX(2 beta) mixer.
inline Circuit qaoa_maxcut(std::size_t n_qubits, const std::vector<Edge>& edges, const std::vector<double>& gamma,
                           const std::vector<double>& beta) {
  if (gamma.size() != beta.size() || gamma.empty())
    throw ValidationError("qaoa_maxcut: gamma and beta must have the same non-zero length");
  for (const auto& [u, v] : edges) {
    if (u == v) throw ValidationError("qaoa_maxcut: self-loop edge");
    if (u >= n_qubits || v >= n_qubits) throw ValidationError("qaoa_maxcut: edge outside the register");
  }
  Circuit c(n_qubits);
  PairIdAllocator ids;
  for (QubitId q = 0; q < n_qubits; ++q) c.add(gates::h(q));
  for (std::size_t r = 0; r < gamma.size(); ++r) {
    for (const auto& [u, v] : edges) {
      const PairId id = ids.fresh();
      c.add(gates::paired(gates::cx(u, v), id));
      c.add(gates::rz(v, 2.0 * gamma[r]));
      c.add(gates::inverse(gates::cx(u, v), id));
    }
    for (QubitId q = 0; q < n_qubits; ++q) c.add(gates::rx(q, 2.0 * beta[r]));
  }
  validate(c);
  return c;
}

/// Swap-free QFT: qubit j ends holding |0> + e^{2 pi i x / 2^{j+1}} |1>.
inline std::vector<Gate> qft_gates(const std::vector<QubitId>& reg) {
  std::vector<Gate> out;
  for (std::size_t j = reg.size(); j-- > 0;) {
    out.push_back(gates::h(reg[j]));
    for (std::size_t k = j; k-- > 0;)
      out.push_back(gates::cphase(reg[k], reg[j], kPi / static_cast<double>(std::uint64_t{1} << (j - k))));
  }
  return out;
}

inline std::vector<Gate> inverse_qft_gates(const std::vector<QubitId>& reg) {
  const auto forward = qft_gates(reg);
  std::vector<Gate> out;
  for (auto it = forward.rbegin(); it != forward.rend(); ++it) out.push_back(adjoint_gate(*it));
  return out;
}

/// Draper adder |x> -> |x + addend mod 2^n>.
inline Circuit qft_adder(std::size_t n_bits, std::uint64_t addend) {
  if (n_bits < 1 || n_bits > kMaxQubits) throw ValidationError("qft_adder: n_bits out of range");
  if (addend >= (std::uint64_t{1} << n_bits)) throw ValidationError("qft_adder: addend out of range");
  std::vector<QubitId> reg(n_bits);
  for (QubitId q = 0; q < n_bits; ++q) reg[q] = q;
  Circuit c(n_bits);
  c.append(qft_gates(reg));
  for (QubitId j = 0; j < n_bits; ++j) {
    const std::uint64_t modulus = std::uint64_t{1} << (j + 1);
    const std::uint64_t reduced = addend % modulus;
    if (reduced != 0) c.add(gates::phase(j, 2.0 * kPi * static_cast<double>(reduced) / static_cast<double>(modulus)));
  }
  c.append(inverse_qft_gates(reg));
  validate(c);
  return c;
}

/// Phase estimation of U = Phase(2 pi phi) on its |1> eigenstate. Counting
/// qubits are 0..n_counting-1; the eigenstate qubit is n_counting.
inline Circuit qpe(std::size_t n_counting, double phi) {
  if (n_counting < 1 || n_counting + 1 > kMaxQubits) throw ValidationError("qpe: n_counting out of range");
  if (!(phi >= 0.0 && phi < 1.0)) throw ValidationError("qpe: eigenphase must lie in [0, 1)");
  const QubitId target = static_cast<QubitId>(n_counting);
  Circuit c(n_counting + 1);
  c.add(gates::x(target));
  std::vector<QubitId> reg(n_counting);
  for (QubitId q = 0; q < n_counting; ++q) {
    reg[q] = q;
    c.add(gates::h(q));
  }
  for (QubitId j = 0; j < n_counting; ++j) {
    const double power = static_cast<double>(std::uint64_t{1} << (n_counting - 1 - j));
    c.add(gates::cphase(j, target, std::remainder(2.0 * kPi * phi * power, 2.0 * kPi)));
  }
  c.append(inverse_qft_gates(reg));
  validate(c);
  return c;
}

/// Rotation angles of the folding boxes, uniform in [0, pi).
inline std::vector<double> crz_folding_angles(int n_folds, std::uint64_t seed) {
  if (n_folds < 1) throw ValidationError("crz folding: n_folds must be >= 1");
  std::mt19937_64 gen(seed);
  std::vector<double> out(static_cast<std::size_t>(n_folds));
  for (double& a : out) a = kPi * detail::unit_uniform(gen);
  return out;
}

/// H H, n_folds boxes of CRZ(theta_k) CRZ(-theta_k), H H; CRZ left undecomposed.
inline Circuit crz_folding_circuit(int n_folds, std::uint64_t seed) {
  Circuit c(2);
  c.add(gates::h(0)).add(gates::h(1));
  for (double theta : crz_folding_angles(n_folds, seed)) c.add(gates::crz(0, 1, theta)).add(gates::crz(0, 1, -theta));
  c.add(gates::h(0)).add(gates::h(1));
  return c;
}

/// (standard, hidden-inverse) variants with every CRZ pre-expanded.
inline std::pair<Circuit, Circuit> crz_folding_benchmark(int n_folds, std::uint64_t seed) {
  const Circuit logical = crz_folding_circuit(n_folds, seed);
  const auto expand = [&](bool hidden) {
    PassConfig cfg;
    cfg.hidden_inverse = hidden;
    PairIdAllocator ids;
    Circuit out(logical.n_qubits);
    for (const Gate& g : logical.gates) {
      if (g.kind == GateKind::CRZ)
        out.append(decompose_crz(g, cfg, ids));
      else
        out.add(g);
    }
    return out;
  };
  return {expand(false), expand(true)};
}

/// A named benchmark instance with every knob the generators take. Defaults
/// are fixed, declared values for reproducible runs.
struct BenchmarkSpec {
  std::string name = "qaoa-maxcut";
  std::size_t n_qubits = 4;
  std::vector<Edge> edges;  // empty means ring graph
  std::vector<double> gamma{0.4};
  std::vector<double> beta{0.3};
  double coupling = 1.0;
  double field = 1.0;
  double dt = 0.2;
  int trotter_steps = 2;
  int n_folds = 4;
  std::uint64_t seed = 0;
  double eigenphase = 0.3125;
  std::uint64_t addend = 5;
  std::uint64_t input = 3;
};

inline const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names = {"qaoa-maxcut", "ising",  "xy",         "heisenberg",
                                                 "qft-adder",   "qpe",    "crz-folding"};
  return names;
}

inline void validate_benchmark_spec(const BenchmarkSpec& s) {
  const auto& names = benchmark_names();
  if (std::find(names.begin(), names.end(), s.name) == names.end())
    throw ValidationError("unknown benchmark '" + s.name + "'");
  if (s.name == "crz-folding") {
    if (s.n_qubits != 2) throw ValidationError("crz-folding uses exactly two qubits");
    if (s.n_folds < 1) throw ValidationError("crz-folding: n_folds must be >= 1");
    return;
  }
  if (s.n_qubits < 4 || s.n_qubits > 10) throw ValidationError("benchmark n_qubits must lie in [4, 10]");
  if (s.trotter_steps < 1) throw ValidationError("trotter_steps must be >= 1");
}

/// Instantiates the benchmark's logical circuit (crz-folding stays in CRZ form).
inline Circuit build_benchmark(const BenchmarkSpec& s) {
  validate_benchmark_spec(s);
  if (s.name == "qaoa-maxcut")
    return qaoa_maxcut(s.n_qubits, s.edges.empty() ? ring_graph(s.n_qubits) : s.edges, s.gamma, s.beta);
  if (s.name == "ising" || s.name == "xy" || s.name == "heisenberg")
    return trotter_circuit(spin_model_from_string(s.name), s.n_qubits, s.coupling, s.field, s.trotter_steps, s.dt);
  if (s.name == "qft-adder") {
    const std::uint64_t modulus = std::uint64_t{1} << s.n_qubits;
    Circuit c(s.n_qubits);
    for (QubitId q = 0; q < s.n_qubits; ++q)
      if (((s.input % modulus) >> q) & 1U) c.add(gates::x(q));
    c.append(qft_adder(s.n_qubits, s.addend % modulus).gates);
    return c;
  }
  if (s.name == "qpe") return qpe(s.n_qubits - 1, s.eigenphase);
  return crz_folding_circuit(s.n_folds, s.seed);
}

inline json benchmark_spec_to_json(const BenchmarkSpec& s) {
  json j;
  j["name"] = s.name;
  j["n_qubits"] = s.n_qubits;
  json edges = json::array();
  for (const auto& [u, v] : s.edges) edges.push_back(json::array({u, v}));
  j["edges"] = edges;
  j["gamma"] = s.gamma;
  j["beta"] = s.beta;
  j["J"] = s.coupling;
  j["h"] = s.field;
  j["dt"] = s.dt;
  j["trotter_steps"] = s.trotter_steps;
  j["n_folds"] = s.n_folds;
  j["seed"] = s.seed;
  j["eigenphase"] = s.eigenphase;
  j["addend"] = s.addend;
  j["input"] = s.input;
  return j;
}

inline BenchmarkSpec benchmark_spec_from_json(const json& j) {
  BenchmarkSpec s;
  try {
    s.name = j.at("name").get<std::string>();
    if (s.name == "crz-folding") s.n_qubits = 2;
    s.n_qubits = j.value("n_qubits", s.n_qubits);
    if (j.contains("edges"))
      for (const json& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw ValidationError("edges are [u, v] pairs");
        s.edges.emplace_back(e[0].get<QubitId>(), e[1].get<QubitId>());
      }
    s.gamma = j.value("gamma", s.gamma);
    s.beta = j.value("beta", s.beta);
    s.coupling = j.value("J", s.coupling);
    s.field = j.value("h", s.field);
    s.dt = j.value("dt", s.dt);
    s.trotter_steps = j.value("trotter_steps", s.trotter_steps);
    s.n_folds = j.value("n_folds", s.n_folds);
    s.seed = j.value("seed", s.seed);
    s.eigenphase = j.value("eigenphase", s.eigenphase);
    s.addend = j.value("addend", s.addend);
    s.input = j.value("input", s.input);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed benchmark spec: ") + e.what());
  }
  validate_benchmark_spec(s);
  return s;
}

}  // namespace invforge

#endif  // INVFORGE_SYNTH_HPP
