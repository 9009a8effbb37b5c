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

#ifndef INVFORGE_CIRCUIT_HPP
#define INVFORGE_CIRCUIT_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "invforge/errors.hpp"
#include "invforge/linalg.hpp"

namespace invforge {

using QubitId = std::uint32_t;
using PairId = std::int64_t;

inline constexpr std::size_t kMaxQubits = 24;

enum class GateKind {
  X,
  SX,
  H,
  RX,
  RY,
  RZ,
  Phase,
  CX,
  CRZ,
  CPhase,
  RZX,
  MCU,
  Barrier,
};

/// Which pulse realization a gate should be lowered to. Never changes the
/// gate's unitary.
enum class Variant { Standard, Inverse };

inline std::string_view to_string(GateKind k) {
  switch (k) {
    case GateKind::X: return "x";
    case GateKind::SX: return "sx";
    case GateKind::H: return "h";
    case GateKind::RX: return "rx";
    case GateKind::RY: return "ry";
    case GateKind::RZ: return "rz";
    case GateKind::Phase: return "p";
    case GateKind::CX: return "cx";
    case GateKind::CRZ: return "crz";
    case GateKind::CPhase: return "cp";
    case GateKind::RZX: return "rzx";
    case GateKind::MCU: return "mcu";
    case GateKind::Barrier: return "barrier";
  }
  return "?";
}

inline GateKind gate_kind_from_string(std::string_view s) {
  static const std::map<std::string_view, GateKind> table = {
      {"x", GateKind::X},     {"sx", GateKind::SX},       {"h", GateKind::H},        {"rx", GateKind::RX},
      {"ry", GateKind::RY},   {"rz", GateKind::RZ},       {"p", GateKind::Phase},    {"cx", GateKind::CX},
      {"crz", GateKind::CRZ}, {"cp", GateKind::CPhase},   {"rzx", GateKind::RZX},    {"mcu", GateKind::MCU},
      {"barrier", GateKind::Barrier}};
  auto it = table.find(s);
  if (it == table.end()) throw UnsupportedGateError("unknown gate kind '" + std::string(s) + "'");
  return it->second;
}

/// Number of real angle parameters carried by a kind.
inline std::size_t param_count(GateKind k) {
  switch (k) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::Phase:
    case GateKind::CRZ:
    case GateKind::CPhase:
    case GateKind::RZX: return 1;
    default: return 0;
  }
}

/// Fixed operand count, or 0 for kinds whose arity is determined elsewhere
/// (MCU: controls + 1; Barrier: any).
inline std::size_t fixed_arity(GateKind k) {
  switch (k) {
    case GateKind::CX:
    case GateKind::CRZ:
    case GateKind::CPhase:
    case GateKind::RZX: return 2;
    case GateKind::MCU:
    case GateKind::Barrier: return 0;
    default: return 1;
  }
}

/// A gate instance. Operands are ordered controls first, target last.
struct Gate {
  GateKind kind = GateKind::Barrier;
  std::vector<QubitId> qubits;
  std::vector<double> params;
  /// Target unitary of an MCU gate; the number of controls is qubits.size() - 1.
  Matrix target_unitary;
  Variant variant = Variant::Standard;
  std::optional<PairId> pair_id;

  std::size_t controls() const { return kind == GateKind::MCU ? qubits.size() - 1 : 0; }
  double angle() const { return params.at(0); }
  bool is_inverse() const { return variant == Variant::Inverse; }

  friend bool operator==(const Gate& a, const Gate& b) {
    if (a.kind != b.kind || a.qubits != b.qubits || a.params != b.params || a.variant != b.variant ||
        a.pair_id != b.pair_id)
      return false;
    if (a.kind != GateKind::MCU) return true;
    return a.target_unitary.rows() == b.target_unitary.rows() && a.target_unitary.data() == b.target_unitary.data();
  }
};

struct Circuit {
  std::size_t n_qubits = 1;
  std::vector<Gate> gates;

  Circuit() = default;
  explicit Circuit(std::size_t n) : n_qubits(n) {}

  Circuit& add(Gate g) {
    gates.push_back(std::move(g));
    return *this;
  }
  Circuit& append(const std::vector<Gate>& gs) {
    gates.insert(gates.end(), gs.begin(), gs.end());
    return *this;
  }

  friend bool operator==(const Circuit& a, const Circuit& b) { return a.n_qubits == b.n_qubits && a.gates == b.gates; }
};

namespace gates {

inline Gate make(GateKind k, std::vector<QubitId> qs, std::vector<double> ps = {}) {
  Gate g;
  g.kind = k;
  g.qubits = std::move(qs);
  g.params = std::move(ps);
  return g;
}

inline Gate x(QubitId q) { return make(GateKind::X, {q}); }
inline Gate sx(QubitId q) { return make(GateKind::SX, {q}); }
inline Gate h(QubitId q) { return make(GateKind::H, {q}); }
inline Gate rx(QubitId q, double t) { return make(GateKind::RX, {q}, {t}); }
inline Gate ry(QubitId q, double t) { return make(GateKind::RY, {q}, {t}); }
inline Gate rz(QubitId q, double t) { return make(GateKind::RZ, {q}, {t}); }
inline Gate phase(QubitId q, double t) { return make(GateKind::Phase, {q}, {t}); }
inline Gate cx(QubitId c, QubitId t) { return make(GateKind::CX, {c, t}); }
inline Gate crz(QubitId c, QubitId t, double theta) { return make(GateKind::CRZ, {c, t}, {theta}); }
inline Gate cphase(QubitId c, QubitId t, double theta) { return make(GateKind::CPhase, {c, t}, {theta}); }
inline Gate rzx(QubitId c, QubitId t, double theta) { return make(GateKind::RZX, {c, t}, {theta}); }
inline Gate barrier(std::vector<QubitId> qs) { return make(GateKind::Barrier, std::move(qs)); }

/// m-controlled single-qubit unitary; `controls` may be empty.
inline Gate mcu(std::vector<QubitId> controls, QubitId target, Matrix u) {
  Gate g = make(GateKind::MCU, std::move(controls));
  g.qubits.push_back(target);
  g.target_unitary = std::move(u);
  return g;
}

inline Gate inverse(Gate g, std::optional<PairId> pair = std::nullopt) {
  g.variant = Variant::Inverse;
  g.pair_id = pair;
  return g;
}

inline Gate paired(Gate g, PairId pair) {
  g.pair_id = pair;
  return g;
}

}  // namespace gates

/// Unitary of the gate on its own operands. Local basis index bit k belongs
/// to operand qubits[k]; for controlled kinds the target is the top bit.
inline Matrix local_matrix(const Gate& g) {
  switch (g.kind) {
    case GateKind::X: return mat2::pauli_x();
    case GateKind::SX: return mat2::sx();
    case GateKind::H: return mat2::hadamard();
    case GateKind::RX: return mat2::rx(g.angle());
    case GateKind::RY: return mat2::ry(g.angle());
    case GateKind::RZ: return mat2::rz(g.angle());
    case GateKind::Phase: return mat2::phase(g.angle());
    case GateKind::CX: {
      Matrix m(4, 4);
      m(0, 0) = m(2, 2) = 1.0;
      m(1, 3) = m(3, 1) = 1.0;
      return m;
    }
    case GateKind::CRZ: {
      Matrix m(4, 4);
      m(0, 0) = m(2, 2) = 1.0;
      m(1, 1) = std::exp(-kI * (g.angle() / 2));
      m(3, 3) = std::exp(kI * (g.angle() / 2));
      return m;
    }
    case GateKind::CPhase: {
      Matrix m = Matrix::identity(4);
      m(3, 3) = std::exp(kI * g.angle());
      return m;
    }
    case GateKind::RZX: {
      // exp(-i theta/2 Z_c X_t): RX(theta) on the target when c=0, RX(-theta) when c=1.
      const Matrix plus = mat2::rx(g.angle());
      const Matrix minus = mat2::rx(-g.angle());
      Matrix m(4, 4);
      for (int tr = 0; tr < 2; ++tr)
        for (int tc = 0; tc < 2; ++tc) {
          m(2 * tr, 2 * tc) = plus(tr, tc);
          m(2 * tr + 1, 2 * tc + 1) = minus(tr, tc);
        }
      return m;
    }
    case GateKind::MCU: {
      const std::size_t m = g.controls();
      const std::size_t dim = std::size_t{1} << (m + 1);
      const std::size_t all_controls = (std::size_t{1} << m) - 1;
      Matrix out = Matrix::identity(dim);
      const std::size_t lo = all_controls;
      const std::size_t hi = all_controls | (std::size_t{1} << m);
      out(lo, lo) = g.target_unitary(0, 0);
      out(lo, hi) = g.target_unitary(0, 1);
      out(hi, lo) = g.target_unitary(1, 0);
      out(hi, hi) = g.target_unitary(1, 1);
      return out;
    }
    case GateKind::Barrier: return Matrix::identity(std::size_t{1} << g.qubits.size());
  }
  throw UnsupportedGateError("local_matrix: unsupported gate kind");
}

/// Kinds whose standard and inverse realizations implement the same unitary.
inline bool is_self_adjoint(const Gate& g) {
  switch (g.kind) {
    case GateKind::X:
    case GateKind::H:
    case GateKind::CX: return true;
    case GateKind::MCU: {
      if (g.target_unitary.rows() != 2) return false;
      return max_abs_diff(g.target_unitary * g.target_unitary, Matrix::identity(2)) <= 1e-10;
    }
    default: return false;
  }
}

/// Checks one gate against the circuit width; throws ValidationError.
inline void validate_gate(const Gate& g, std::size_t n_qubits) {
  const auto where = [&] { return std::string(to_string(g.kind)); };
  if (g.kind == GateKind::MCU) {
    if (g.qubits.empty()) throw ValidationError("mcu: needs a target qubit");
    if (g.target_unitary.rows() != 2 || g.target_unitary.cols() != 2)
      throw ValidationError("mcu: target unitary must be 2x2");
    if (!is_unitary(g.target_unitary, 1e-10)) throw ValidationError("mcu: target matrix is not unitary");
  } else if (g.kind != GateKind::Barrier && g.qubits.size() != fixed_arity(g.kind)) {
    throw ValidationError(where() + ": expected " + std::to_string(fixed_arity(g.kind)) + " qubit operand(s)");
  }
  if (g.params.size() != param_count(g.kind))
    throw ValidationError(where() + ": expected " + std::to_string(param_count(g.kind)) + " parameter(s)");
  for (double p : g.params)
    if (!std::isfinite(p)) throw ValidationError(where() + ": non-finite angle");
  std::set<QubitId> seen;
  for (QubitId q : g.qubits) {
    if (q >= n_qubits)
      throw ValidationError(where() + ": qubit " + std::to_string(q) + " out of range for " +
                            std::to_string(n_qubits) + " qubits");
    if (!seen.insert(q).second) throw ValidationError(where() + ": repeated qubit operand");
  }
  if (g.variant == Variant::Inverse && !is_self_adjoint(g))
    throw ValidationError(where() + ": inverse variant is only legal for self-adjoint gates");
}

/// Full structural validation, including pair bookkeeping: a pair id occurs on
/// at most two gates, which share kind and operands.
inline void validate(const Circuit& c) {
  if (c.n_qubits == 0) throw ValidationError("circuit must have at least one qubit");
  if (c.n_qubits > kMaxQubits)
    throw SimulationBoundError("circuit has " + std::to_string(c.n_qubits) + " qubits; the limit is " +
                               std::to_string(kMaxQubits));
  std::map<PairId, std::vector<std::size_t>> pairs;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    validate_gate(c.gates[i], c.n_qubits);
    if (c.gates[i].pair_id) pairs[*c.gates[i].pair_id].push_back(i);
  }
  for (const auto& [id, members] : pairs) {
    if (members.size() > 2) throw ValidationError("pair " + std::to_string(id) + " has more than two members");
    if (members.size() == 2) {
      const Gate& a = c.gates[members[0]];
      const Gate& b = c.gates[members[1]];
      if (a.kind != b.kind || a.qubits != b.qubits)
        throw ValidationError("pair " + std::to_string(id) + " members differ in kind or operands");
    }
  }
}

/// One past the largest pair id in use (0 when none).
inline PairId next_free_pair_id(const Circuit& c) {
  PairId next = 0;
  for (const auto& g : c.gates)
    if (g.pair_id) next = std::max(next, *g.pair_id + 1);
  return next;
}

/// Hands out fresh pair ids.
class PairIdAllocator {
 public:
  explicit PairIdAllocator(PairId start = 0) : next_(start) {}
  PairId fresh() { return next_++; }
  PairId peek() const { return next_; }

 private:
  PairId next_;
};

}  // namespace invforge

#endif  // INVFORGE_CIRCUIT_HPP
