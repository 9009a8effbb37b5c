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

// Gate-level lowering to {RZ, RX, SX, X, CX}.
//
// Every two-CX sandwich produced here (controlled rotations, the Barenco
// A/B/C construction, the V/V^dagger layers of multi-controlled gates) can be
// emitted as a hidden-inverse pair: the second CX is flagged Variant::Inverse
// and shares a pair id with the first, so the pulse layer realizes it with the
// time-reversed, amplitude-negated schedule.

#ifndef INVFORGE_DECOMPOSE_HPP
#define INVFORGE_DECOMPOSE_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "invforge/circuit.hpp"
#include "invforge/errors.hpp"
#include "invforge/linalg.hpp"

namespace invforge {

/// W = e^{i delta} RZ(alpha) RY(theta) RZ(beta).
struct ZYZAngles {
  double delta = 0.0;
  double alpha = 0.0;
  double theta = 0.0;
  double beta = 0.0;
};

struct PassConfig {
  bool hidden_inverse = true;
  bool peephole = true;
  int max_peephole_window = 32;
};

inline Matrix zyz_reconstruct(const ZYZAngles& a) {
  Matrix w = mat2::rz(a.alpha) * mat2::ry(a.theta) * mat2::rz(a.beta);
  w *= std::exp(kI * a.delta);
  return w;
}

/// Euler factorization. theta lands in [0, pi]; when theta is 0 or pi the
/// split between alpha and beta is fixed by beta = 0.
inline ZYZAngles zyz_decompose(const Matrix& w) {
  if (w.rows() != 2 || w.cols() != 2 || !is_unitary(w, 1e-10))
    throw ValidationError("zyz_decompose: input is not a 2x2 unitary");
  const cplx det = w(0, 0) * w(1, 1) - w(0, 1) * w(1, 0);
  ZYZAngles out;
  out.delta = std::arg(det) / 2.0;
  const cplx unphase = std::exp(-kI * out.delta);
  const cplx u00 = unphase * w(0, 0);
  const cplx u10 = unphase * w(1, 0);
  const cplx u11 = unphase * w(1, 1);
  out.theta = 2.0 * std::atan2(std::abs(u10), std::abs(u00));
  constexpr double kDegenerate = 1e-12;
  if (std::abs(u10) < kDegenerate) {
    out.alpha = 2.0 * std::arg(u11);
    out.beta = 0.0;
    out.theta = 0.0;
  } else if (std::abs(u00) < kDegenerate) {
    out.alpha = 2.0 * std::arg(u10);
    out.beta = 0.0;
    out.theta = kPi;
  } else {
    const double sum = 2.0 * std::arg(u11);   // alpha + beta
    const double diff = 2.0 * std::arg(u10);  // alpha - beta
    out.alpha = (sum + diff) / 2.0;
    out.beta = (sum - diff) / 2.0;
  }
  return out;
}

namespace detail {

inline void push_rotation(std::vector<Gate>& out, GateKind kind, QubitId q, double angle) {
  if (angle == 0.0) return;
  out.push_back(gates::make(kind, {q}, {angle}));
}

/// RY(t) = RZ(pi/2) RX(t) RZ(-pi/2), emitted in time order.
inline void push_ry(std::vector<Gate>& out, QubitId q, double angle) {
  if (angle == 0.0) return;
  out.push_back(gates::rz(q, -kPi / 2));
  out.push_back(gates::rx(q, angle));
  out.push_back(gates::rz(q, kPi / 2));
}

/// Emits a CX pair around `middle`; the second member is the hidden inverse.
inline void push_cx_sandwich(std::vector<Gate>& out, QubitId c, QubitId t, const std::vector<Gate>& middle,
                             const PassConfig& cfg, PairIdAllocator& ids) {
  Gate first = gates::cx(c, t);
  Gate second = gates::cx(c, t);
  if (cfg.hidden_inverse) {
    const PairId id = ids.fresh();
    first.pair_id = id;
    second = gates::inverse(second, id);
  }
  out.push_back(first);
  out.insert(out.end(), middle.begin(), middle.end());
  out.push_back(second);
}

inline void require_kind(const Gate& g, GateKind k, const char* op) {
  if (g.kind != k) throw ValidationError(std::string(op) + ": wrong gate kind '" + std::string(to_string(g.kind)) + "'");
}

}  // namespace detail

/// Adjoint of a single gate. Self-adjoint gates keep their kind; the caller
/// decides how variants are assigned.
inline Gate adjoint_gate(const Gate& g) {
  Gate out = g;
  switch (g.kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::Phase:
    case GateKind::CRZ:
    case GateKind::CPhase:
    case GateKind::RZX: out.params[0] = -g.params[0]; break;
    case GateKind::SX:
      out = gates::rx(g.qubits[0], -kPi / 2);
      break;
    case GateKind::MCU: out.target_unitary = g.target_unitary.adjoint(); break;
    default: break;
  }
  return out;
}

/// Time-reversed adjoint of a gate sequence, realized as the hidden inverse of
/// the original: every self-adjoint gate has its variant flipped, pairs inside
/// the sequence are re-keyed with fresh ids, and unpaired self-adjoint gates in
/// `seq` are paired with their mirror images (which is why `seq` is mutable).
inline std::vector<Gate> mirror_sequence(std::vector<Gate>& seq, PairIdAllocator& ids) {
  std::map<PairId, PairId> rekey;
  for (Gate& g : seq) {
    if (!is_self_adjoint(g) || g.kind == GateKind::MCU) continue;
    if (g.pair_id) {
      if (!rekey.contains(*g.pair_id)) rekey[*g.pair_id] = ids.fresh();
    } else if (g.variant == Variant::Standard) {
      g.pair_id = ids.fresh();
      rekey[*g.pair_id] = *g.pair_id;
    }
  }
  std::vector<Gate> out;
  out.reserve(seq.size());
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
    Gate m = adjoint_gate(*it);
    if (is_self_adjoint(*it) && it->kind != GateKind::MCU) {
      m.variant = it->is_inverse() ? Variant::Standard : Variant::Inverse;
      if (it->pair_id) m.pair_id = rekey.at(*it->pair_id);
    }
    out.push_back(std::move(m));
  }
  return out;
}

/// CRZ(theta) -> RZ(theta/2)_t, CX, RZ(-theta/2)_t, CX.
inline std::vector<Gate> decompose_crz(const Gate& g, const PassConfig& cfg, PairIdAllocator& ids) {
  detail::require_kind(g, GateKind::CRZ, "decompose_crz");
  const QubitId c = g.qubits[0], t = g.qubits[1];
  const double theta = g.angle();
  std::vector<Gate> out{gates::rz(t, theta / 2)};
  detail::push_cx_sandwich(out, c, t, {gates::rz(t, -theta / 2)}, cfg, ids);
  return out;
}

inline std::vector<Gate> decompose_crz(const Gate& g, const PassConfig& cfg) {
  PairIdAllocator ids;
  return decompose_crz(g, cfg, ids);
}

/// Exact (not phase-equivalent) CPhase expansion.
inline std::vector<Gate> decompose_cphase(const Gate& g, const PassConfig& cfg, PairIdAllocator& ids) {
  detail::require_kind(g, GateKind::CPhase, "decompose_cphase");
  const QubitId c = g.qubits[0], t = g.qubits[1];
  const double theta = g.angle();
  std::vector<Gate> out{gates::phase(c, theta / 2), gates::phase(t, theta / 2)};
  detail::push_cx_sandwich(out, c, t, {gates::phase(t, -theta / 2)}, cfg, ids);
  return out;
}

inline std::vector<Gate> decompose_cphase(const Gate& g, const PassConfig& cfg) {
  PairIdAllocator ids;
  return decompose_cphase(g, cfg, ids);
}

/// Single-qubit unitary as RZ/RX/RZ-level rotations (global phase dropped).
inline std::vector<Gate> decompose_single_qubit(const Matrix& w, QubitId q) {
  const ZYZAngles a = zyz_decompose(w);
  std::vector<Gate> out;
  detail::push_rotation(out, GateKind::RZ, q, a.beta);
  detail::push_ry(out, q, a.theta);
  detail::push_rotation(out, GateKind::RZ, q, a.alpha);
  return out;
}

/// Controlled-W via W = e^{i delta} A X B X C with ABC = I:
/// C, CX, B, CX, A on the target and Phase(delta) on the control.
inline std::vector<Gate> decompose_lambda1(const Gate& g, const PassConfig& cfg, PairIdAllocator& ids) {
  detail::require_kind(g, GateKind::MCU, "decompose_lambda1");
  if (g.controls() != 1) throw ValidationError("decompose_lambda1: expected exactly one control");
  const QubitId c = g.qubits[0], t = g.qubits[1];
  const ZYZAngles a = zyz_decompose(g.target_unitary);

  std::vector<Gate> out;
  detail::push_rotation(out, GateKind::RZ, t, (a.beta - a.alpha) / 2);  // C

  std::vector<Gate> b;
  detail::push_rotation(b, GateKind::RZ, t, -(a.alpha + a.beta) / 2);
  detail::push_ry(b, t, -a.theta / 2);
  detail::push_cx_sandwich(out, c, t, b, cfg, ids);

  detail::push_ry(out, t, a.theta / 2);  // A
  detail::push_rotation(out, GateKind::RZ, t, a.alpha);
  detail::push_rotation(out, GateKind::Phase, c, a.delta);
  return out;
}

inline std::vector<Gate> decompose_mcu(const Gate& g, const PassConfig& cfg, PairIdAllocator& ids, std::size_t depth = 0);

/// Doubly-controlled U with V^2 = U: (V on c2,t), CX(c1,c2), (V^dagger on c2,t),
/// CX(c1,c2), (V on c1,t).
inline std::vector<Gate> decompose_lambda2(const Gate& g, const PassConfig& cfg, PairIdAllocator& ids) {
  detail::require_kind(g, GateKind::MCU, "decompose_lambda2");
  if (g.controls() != 2) throw ValidationError("decompose_lambda2: expected exactly two controls");
  const QubitId c1 = g.qubits[0], c2 = g.qubits[1], t = g.qubits[2];
  const Matrix v = mat2::principal_sqrt(g.target_unitary);
  if (max_abs_diff(v * v, g.target_unitary) > 1e-9) throw ValidationError("decompose_lambda2: square root failed");
  const Matrix vdag = v.adjoint();

  std::vector<Gate> out = decompose_lambda1(gates::mcu({c2}, t, v), cfg, ids);
  detail::push_cx_sandwich(out, c1, c2, decompose_lambda1(gates::mcu({c2}, t, vdag), cfg, ids), cfg, ids);
  const auto tail = decompose_lambda1(gates::mcu({c1}, t, v), cfg, ids);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

/// m >= 3 controls: (V on c_m,t), Lambda_{m-1}(X) onto c_m, (V^dagger on c_m,t),
/// Lambda_{m-1}(X) again, Lambda_{m-1}(V) on the remaining controls. With
/// hidden inverses enabled the second Lambda_{m-1}(X) is realized as the
/// mirror of the first.
inline std::vector<Gate> decompose_lambda_m(const Gate& g, const PassConfig& cfg, PairIdAllocator& ids,
                                            std::size_t depth = 0) {
  detail::require_kind(g, GateKind::MCU, "decompose_lambda_m");
  const std::size_t m = g.controls();
  if (m < 3) throw ValidationError("decompose_lambda_m: expected at least three controls");
  if (depth > m) throw ValidationError("decompose_lambda_m: recursion depth exceeded");
  const std::vector<QubitId> head(g.qubits.begin(), g.qubits.begin() + static_cast<std::ptrdiff_t>(m - 1));
  const QubitId cm = g.qubits[m - 1];
  const QubitId t = g.qubits[m];
  const Matrix v = mat2::principal_sqrt(g.target_unitary);
  if (max_abs_diff(v * v, g.target_unitary) > 1e-9) throw ValidationError("decompose_lambda_m: square root failed");

  std::vector<Gate> out = decompose_lambda1(gates::mcu({cm}, t, v), cfg, ids);
  std::vector<Gate> toggle = decompose_mcu(gates::mcu(head, cm, mat2::pauli_x()), cfg, ids, depth + 1);
  std::vector<Gate> middle = decompose_lambda1(gates::mcu({cm}, t, v.adjoint()), cfg, ids);
  std::vector<Gate> untoggle = cfg.hidden_inverse
                                   ? mirror_sequence(toggle, ids)
                                   : decompose_mcu(gates::mcu(head, cm, mat2::pauli_x()), cfg, ids, depth + 1);
  std::vector<Gate> last = decompose_mcu(gates::mcu(head, t, v), cfg, ids, depth + 1);

  for (auto* part : {&toggle, &middle, &untoggle, &last}) out.insert(out.end(), part->begin(), part->end());
  return out;
}

inline std::vector<Gate> decompose_lambda_m(const Gate& g, const PassConfig& cfg) {
  PairIdAllocator ids;
  return decompose_lambda_m(g, cfg, ids);
}

inline std::vector<Gate> decompose_lambda1(const Gate& g, const PassConfig& cfg) {
  PairIdAllocator ids;
  return decompose_lambda1(g, cfg, ids);
}

inline std::vector<Gate> decompose_lambda2(const Gate& g, const PassConfig& cfg) {
  PairIdAllocator ids;
  return decompose_lambda2(g, cfg, ids);
}

/// Dispatches on the control count. An Inverse-variant MCU (legal only for
/// self-adjoint targets) expands to the mirror of its standard expansion.
inline std::vector<Gate> decompose_mcu(const Gate& g, const PassConfig& cfg, PairIdAllocator& ids, std::size_t depth) {
  detail::require_kind(g, GateKind::MCU, "decompose_mcu");
  if (g.is_inverse()) {
    Gate standard = g;
    standard.variant = Variant::Standard;
    standard.pair_id.reset();
    std::vector<Gate> forward = decompose_mcu(standard, cfg, ids, depth);
    return mirror_sequence(forward, ids);
  }
  switch (g.controls()) {
    case 0: return decompose_single_qubit(g.target_unitary, g.qubits[0]);
    case 1: return decompose_lambda1(g, cfg, ids);
    case 2: return decompose_lambda2(g, cfg, ids);
    default: return decompose_lambda_m(g, cfg, ids, depth);
  }
}

/// H = RZ(pi/2) RX(pi/2) RZ(pi/2); the inverse variant negates every angle.
inline std::vector<Gate> lower_h(const Gate& g, const PassConfig& /*cfg*/ = {}) {
  detail::require_kind(g, GateKind::H, "lower_h");
  const QubitId q = g.qubits[0];
  const double s = g.is_inverse() ? -1.0 : 1.0;
  return {gates::rz(q, s * kPi / 2), gates::rx(q, s * kPi / 2), gates::rz(q, s * kPi / 2)};
}

namespace detail {

inline bool touches(const Gate& g, QubitId q) {
  return std::find(g.qubits.begin(), g.qubits.end(), q) != g.qubits.end();
}

inline bool is_unmarked_standard(const Gate& g) { return g.variant == Variant::Standard && !g.pair_id; }

}  // namespace detail

/// Greedy left-to-right pairing of unmarked CX(a,b)...CX(a,b) and H...H.
///
/// Single-qubit gates on a or b and any gate on other qubits may sit between
/// two CX members; a multi-qubit gate touching a or b ends the search. H pairs
/// tolerate nothing on their qubit. Existing marks are never changed.
inline Circuit mark_hidden_inverses_peephole(const Circuit& c, const PassConfig& cfg, PairIdAllocator& ids) {
  Circuit out = c;
  auto& gs = out.gates;
  const std::size_t window = static_cast<std::size_t>(std::max(cfg.max_peephole_window, 1));
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const Gate& head = gs[i];
    if (!detail::is_unmarked_standard(head)) continue;
    if (head.kind == GateKind::CX) {
      const QubitId a = head.qubits[0], b = head.qubits[1];
      for (std::size_t j = i + 1; j < gs.size() && j - i <= window; ++j) {
        const Gate& g = gs[j];
        if (!detail::touches(g, a) && !detail::touches(g, b)) continue;
        if (g.kind == GateKind::CX && g.qubits == head.qubits && detail::is_unmarked_standard(g)) {
          const PairId id = ids.fresh();
          gs[i].pair_id = id;
          gs[j] = gates::inverse(gs[j], id);
          break;
        }
        if (g.qubits.size() == 1 && g.kind != GateKind::Barrier) continue;
        break;
      }
    } else if (head.kind == GateKind::H) {
      const QubitId q = head.qubits[0];
      for (std::size_t j = i + 1; j < gs.size() && j - i <= window; ++j) {
        const Gate& g = gs[j];
        if (!detail::touches(g, q)) continue;
        if (g.kind == GateKind::H && detail::is_unmarked_standard(g)) {
          const PairId id = ids.fresh();
          gs[i].pair_id = id;
          gs[j] = gates::inverse(gs[j], id);
        }
        break;
      }
    }
  }
  return out;
}

inline Circuit mark_hidden_inverses_peephole(const Circuit& c, const PassConfig& cfg) {
  PairIdAllocator ids(next_free_pair_id(c));
  return mark_hidden_inverses_peephole(c, cfg, ids);
}

/// Gates the pulse layer can realize directly.
inline bool is_basis_gate(GateKind k) {
  return k == GateKind::RZ || k == GateKind::RX || k == GateKind::SX || k == GateKind::X || k == GateKind::CX;
}

namespace detail {

/// One rewrite step towards {RZ, RX, SX, X, H, CX}. H is left for the final
/// lowering so its variant survives peephole marking.
inline std::vector<Gate> expand_once(const Gate& g, const PassConfig& cfg, PairIdAllocator& ids) {
  switch (g.kind) {
    case GateKind::RZ:
    case GateKind::RX:
    case GateKind::SX:
    case GateKind::X:
    case GateKind::CX:
    case GateKind::H: return {g};
    case GateKind::Phase: return {gates::rz(g.qubits[0], g.angle())};
    case GateKind::RY: {
      std::vector<Gate> out;
      push_ry(out, g.qubits[0], g.angle());
      return out;
    }
    case GateKind::CRZ: return decompose_crz(g, cfg, ids);
    case GateKind::CPhase: return decompose_cphase(g, cfg, ids);
    case GateKind::RZX: {
      // exp(-i t/2 Z_c X_t) = H_t exp(-i t/2 Z_c Z_t) H_t.
      const QubitId c = g.qubits[0], t = g.qubits[1];
      std::vector<Gate> out{gates::h(t)};
      push_cx_sandwich(out, c, t, {gates::rz(t, g.angle())}, cfg, ids);
      out.push_back(gates::h(t));
      return out;
    }
    case GateKind::MCU: return decompose_mcu(g, cfg, ids);
    case GateKind::Barrier: return {};
  }
  throw UnsupportedGateError("run_pipeline: unsupported gate kind");
}

inline bool is_expanded(GateKind k) { return is_basis_gate(k) || k == GateKind::H; }

}  // namespace detail

/// Full gate-level lowering. With hidden inverses disabled every mark is
/// stripped; otherwise structural marks are kept and the peephole pass only
/// adds pairs among still-unmarked gates.
inline Circuit run_pipeline(const Circuit& c, const PassConfig& cfg) {
  validate(c);
  Circuit work = c;
  if (!cfg.hidden_inverse) {
    for (Gate& g : work.gates) {
      g.variant = Variant::Standard;
      g.pair_id.reset();
    }
  }
  PairIdAllocator ids(next_free_pair_id(work));

  std::vector<Gate> pending = std::move(work.gates);
  work.gates.clear();
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Gate> next;
    next.reserve(pending.size());
    for (const Gate& g : pending) {
      if (detail::is_expanded(g.kind)) {
        next.push_back(g);
        continue;
      }
      changed = true;
      const auto expanded = detail::expand_once(g, cfg, ids);
      next.insert(next.end(), expanded.begin(), expanded.end());
    }
    pending = std::move(next);
  }
  work.gates = std::move(pending);

  if (cfg.hidden_inverse && cfg.peephole) work = mark_hidden_inverses_peephole(work, cfg, ids);

  Circuit out(work.n_qubits);
  for (const Gate& g : work.gates) {
    if (g.kind == GateKind::H)
      out.append(lower_h(g, cfg));
    else
      out.add(g);
  }
  return out;
}

}  // namespace invforge

#endif  // INVFORGE_DECOMPOSE_HPP
