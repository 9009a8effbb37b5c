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

// Coherent-noise statevector simulation.
//
// Every primitive rotation exp(-i theta/2 G) is applied as
// exp(-i (1 + eps) theta/2 G), where eps is looked up by (axis, qubits). The
// lookup ignores the sign of theta, so a schedule and its inverse (negated
// angles, reversed order) see the same eps and multiply to the identity.

#ifndef INVFORGE_NOISESIM_HPP
#define INVFORGE_NOISESIM_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "invforge/circuit.hpp"
#include "invforge/circuit_json.hpp"
#include "invforge/errors.hpp"
#include "invforge/primitive.hpp"
#include "invforge/pulse.hpp"

namespace invforge {

enum class NoiseDistribution { Uniform, Normal };

/// Per-key spread of eps around its axis default:
/// eps = default * (1 + scale * u), u ~ U[-1, 1] or N(0, 1).
struct NoiseSampling {
  NoiseDistribution dist = NoiseDistribution::Uniform;
  double scale = 0.5;
  std::uint64_t seed = 0;
};

class CoherentNoiseModel {
 public:
  using Key = std::pair<Axis, std::vector<QubitId>>;

  static constexpr double kEpsilonBound = 0.5;

  /// All fractions zero.
  static CoherentNoiseModel zero() { return CoherentNoiseModel(); }

  /// ZX 0.02, X 0.000625 (ratio 32), virtual Z noiseless; no sampling.
  static CoherentNoiseModel fixed_default() {
    CoherentNoiseModel nm;
    nm.set_default(Axis::ZX, 0.02);
    nm.set_default(Axis::X, 0.000625);
    return nm;
  }

  /// fixed_default() with uniform +-50% per-channel spread.
  static CoherentNoiseModel sampled_default(std::uint64_t seed) {
    CoherentNoiseModel nm = fixed_default();
    nm.set_sampling(NoiseSampling{NoiseDistribution::Uniform, 0.5, seed});
    return nm;
  }

  void set_default(Axis a, double eps) {
    check_bound(eps);
    defaults_[index(a)] = eps;
  }
  double default_epsilon(Axis a) const { return defaults_[index(a)]; }

  void set_override(Axis a, std::vector<QubitId> qubits, double eps) {
    check_bound(eps);
    overrides_[{a, std::move(qubits)}] = eps;
  }
  void set_phase_offset(Axis a, std::vector<QubitId> qubits, double offset) {
    phase_offsets_[{a, std::move(qubits)}] = offset;
  }
  void set_sampling(std::optional<NoiseSampling> s) { sampling_ = s; }
  const std::optional<NoiseSampling>& sampling() const { return sampling_; }
  const std::map<Key, double>& overrides() const { return overrides_; }
  const std::map<Key, double>& phase_offsets() const { return phase_offsets_; }

  /// Same model realized for the k-th independent draw.
  CoherentNoiseModel with_draw(std::uint64_t draw) const {
    CoherentNoiseModel out = *this;
    out.draw_ = draw;
    return out;
  }
  std::uint64_t draw() const { return draw_; }

  bool is_zero() const {
    if (std::any_of(defaults_.begin(), defaults_.end(), [](double e) { return e != 0.0; })) return false;
    for (const auto& [k, v] : overrides_)
      if (v != 0.0) return false;
    for (const auto& [k, v] : phase_offsets_)
      if (v != 0.0) return false;
    return true;
  }

  double epsilon(Axis a, std::span<const QubitId> qubits) const {
    const Key key{a, {qubits.begin(), qubits.end()}};
    if (auto it = overrides_.find(key); it != overrides_.end()) return it->second;
    const double base = defaults_[index(a)];
    if (!sampling_ || base == 0.0) return base;
    const double u = draw_value(key);
    const double eps = base * (1.0 + sampling_->scale * u);
    constexpr double kClamp = kEpsilonBound - 1e-3;
    return std::clamp(eps, -kClamp, kClamp);
  }

  double phase_offset(Axis a, std::span<const QubitId> qubits) const {
    if (phase_offsets_.empty()) return 0.0;
    auto it = phase_offsets_.find({a, {qubits.begin(), qubits.end()}});
    return it == phase_offsets_.end() ? 0.0 : it->second;
  }

 private:
  static std::size_t index(Axis a) { return static_cast<std::size_t>(a); }

  static void check_bound(double eps) {
    if (!(std::abs(eps) < kEpsilonBound)) throw ValidationError("|epsilon| must be below 0.5");
  }

  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  /// Deterministic per (seed, draw, key) variate; independent of lookup order.
  double draw_value(const Key& key) const {
    std::uint64_t h = splitmix(sampling_->seed);
    h = splitmix(h ^ draw_);
    h = splitmix(h ^ (static_cast<std::uint64_t>(key.first) + 0x100));
    for (QubitId q : key.second) h = splitmix(h ^ (q + 0x200ULL));
    const auto unit = [&](std::uint64_t v) { return (static_cast<double>(v >> 11) + 0.5) * 0x1.0p-53; };
    if (sampling_->dist == NoiseDistribution::Uniform) return 2.0 * unit(h) - 1.0;
    const double u1 = unit(h);
    const double u2 = unit(splitmix(h));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  std::array<double, 3> defaults_{0.0, 0.0, 0.0};
  std::map<Key, double> overrides_;
  std::map<Key, double> phase_offsets_;
  std::optional<NoiseSampling> sampling_;
  std::uint64_t draw_ = 0;
};

inline json noise_model_to_json(const CoherentNoiseModel& nm) {
  json j;
  j["default_epsilon"] = {{"X", nm.default_epsilon(Axis::X)},
                          {"ZX", nm.default_epsilon(Axis::ZX)},
                          {"Z", nm.default_epsilon(Axis::Z)}};
  json ov = json::array();
  for (const auto& [k, v] : nm.overrides())
    ov.push_back({{"axis", std::string(to_string(k.first))}, {"qubits", k.second}, {"epsilon", v}});
  j["overrides"] = ov;
  json po = json::array();
  for (const auto& [k, v] : nm.phase_offsets())
    po.push_back({{"axis", std::string(to_string(k.first))}, {"qubits", k.second}, {"offset", v}});
  j["phase_offsets"] = po;
  if (nm.sampling()) {
    const auto& s = *nm.sampling();
    j["sampling"] = {{"dist", s.dist == NoiseDistribution::Uniform ? "uniform" : "normal"},
                     {"scale", s.scale},
                     {"seed", s.seed}};
  } else {
    j["sampling"] = nullptr;
  }
  return j;
}

inline CoherentNoiseModel noise_model_from_json(const json& j) {
  CoherentNoiseModel nm;
  try {
    if (j.contains("default_epsilon"))
      for (const auto& [axis, v] : j.at("default_epsilon").items()) nm.set_default(axis_from_string(axis), v.get<double>());
    if (j.contains("overrides"))
      for (const json& o : j.at("overrides")) {
        const Axis a = axis_from_string(o.at("axis").get<std::string>());
        auto qs = o.at("qubits").get<std::vector<QubitId>>();
        if (qs.size() != axis_arity(a)) throw ValidationError("noise override has the wrong number of qubits");
        nm.set_override(a, std::move(qs), o.at("epsilon").get<double>());
      }
    if (j.contains("phase_offsets"))
      for (const json& o : j.at("phase_offsets")) {
        const Axis a = axis_from_string(o.at("axis").get<std::string>());
        if (a == Axis::Z) throw ValidationError("phase offsets apply to drive axes (X, ZX) only");
        nm.set_phase_offset(a, o.at("qubits").get<std::vector<QubitId>>(), o.at("offset").get<double>());
      }
    if (j.contains("sampling") && !j.at("sampling").is_null()) {
      const json& s = j.at("sampling");
      NoiseSampling ns;
      const std::string dist = s.value("dist", std::string("uniform"));
      if (dist == "uniform")
        ns.dist = NoiseDistribution::Uniform;
      else if (dist == "normal")
        ns.dist = NoiseDistribution::Normal;
      else
        throw ValidationError("unknown sampling distribution '" + dist + "'");
      ns.scale = s.value("scale", ns.scale);
      ns.seed = s.value("seed", ns.seed);
      nm.set_sampling(ns);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed noise model: ") + e.what());
  }
  return nm;
}

/// Local matrix of a primitive under the noise model.
inline Matrix noisy_primitive(const Primitive& p, const CoherentNoiseModel& nm) {
  if (p.qubits.size() != axis_arity(p.axis)) throw ValidationError("primitive has the wrong number of qubits");
  const double eps = nm.epsilon(p.axis, p.qubits);
  const double offset = p.axis == Axis::Z ? 0.0 : nm.phase_offset(p.axis, p.qubits);
  return rotation_local_matrix(p.axis, (1.0 + eps) * p.angle, offset);
}

/// Dense noisy product of a primitive list on its own qubit span (test helper
/// and oracle for the kernels).
inline Matrix noisy_primitives_unitary(std::span<const Primitive> prims, const CoherentNoiseModel& nm,
                                       std::size_t n_qubits) {
  Matrix acc = Matrix::identity(std::size_t{1} << n_qubits);
  for (const Primitive& p : prims) {
    validate_primitive(p, n_qubits);
    acc = left_apply(noisy_primitive(p, nm), p.qubits, acc);
  }
  return acc;
}

class Statevector {
 public:
  explicit Statevector(std::size_t n_qubits, std::uint64_t basis_index = 0) : n_(n_qubits) {
    if (n_qubits == 0) throw ValidationError("statevector needs at least one qubit");
    if (n_qubits > kMaxQubits)
      throw SimulationBoundError("statevector limited to " + std::to_string(kMaxQubits) + " qubits");
    amps_.assign(std::size_t{1} << n_qubits, cplx{});
    if (basis_index >= amps_.size()) throw ValidationError("basis index out of range");
    amps_[basis_index] = 1.0;
  }

  Statevector(std::size_t n_qubits, std::vector<cplx> amps) : n_(n_qubits), amps_(std::move(amps)) {
    if (n_qubits == 0 || n_qubits > kMaxQubits) throw SimulationBoundError("statevector qubit count out of range");
    if (amps_.size() != (std::size_t{1} << n_qubits)) throw ValidationError("amplitude count must be 2^n");
  }

  std::size_t n_qubits() const { return n_; }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  cplx operator[](std::size_t i) const { return amps_[i]; }

  double norm() const {
    double s = 0.0;
    for (const cplx& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }

  /// 2x2 block on qubit q.
  void apply_1q(QubitId q, const Matrix& m) {
    check_qubit(q);
    const std::size_t bit = std::size_t{1} << q;
    const cplx m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & bit) continue;
      const cplx a0 = amps_[i], a1 = amps_[i | bit];
      amps_[i] = m00 * a0 + m01 * a1;
      amps_[i | bit] = m10 * a0 + m11 * a1;
    }
  }

  /// 2x2 block on `target`, chosen by the value of the `control` bit.
  void apply_conditioned_1q(QubitId control, QubitId target, const Matrix& when0, const Matrix& when1) {
    check_qubit(control);
    check_qubit(target);
    const std::size_t tbit = std::size_t{1} << target;
    const std::size_t cbit = std::size_t{1} << control;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & tbit) continue;
      const Matrix& m = (i & cbit) ? when1 : when0;
      const cplx a0 = amps_[i], a1 = amps_[i | tbit];
      amps_[i] = m(0, 0) * a0 + m(0, 1) * a1;
      amps_[i | tbit] = m(1, 0) * a0 + m(1, 1) * a1;
    }
  }

  /// Dense local operator on an arbitrary operand list (bit k of the local
  /// index is qubits[k]).
  void apply_local(std::span<const QubitId> qubits, const Matrix& local) {
    for (QubitId q : qubits) check_qubit(q);
    const std::size_t k = qubits.size();
    const std::size_t local_dim = std::size_t{1} << k;
    std::size_t mask = 0;
    for (QubitId q : qubits) mask |= std::size_t{1} << q;
    std::vector<std::size_t> offsets(local_dim, 0);
    for (std::size_t l = 0; l < local_dim; ++l)
      for (std::size_t b = 0; b < k; ++b)
        if ((l >> b) & 1U) offsets[l] |= std::size_t{1} << qubits[b];
    std::vector<cplx> in(local_dim), out(local_dim);
    for (std::size_t base = 0; base < amps_.size(); ++base) {
      if (base & mask) continue;
      for (std::size_t l = 0; l < local_dim; ++l) in[l] = amps_[base | offsets[l]];
      for (std::size_t r = 0; r < local_dim; ++r) {
        cplx acc = 0.0;
        for (std::size_t c = 0; c < local_dim; ++c) acc += local(r, c) * in[c];
        out[r] = acc;
      }
      for (std::size_t l = 0; l < local_dim; ++l) amps_[base | offsets[l]] = out[l];
    }
  }

  void apply_primitive(const Primitive& p, const CoherentNoiseModel& nm) {
    validate_primitive(p, n_);
    const double eps = nm.epsilon(p.axis, p.qubits);
    const double angle = (1.0 + eps) * p.angle;
    switch (p.axis) {
      case Axis::Z: {
        const std::size_t bit = std::size_t{1} << p.qubits[0];
        const cplx lo = std::exp(-kI * (angle / 2)), hi = std::exp(kI * (angle / 2));
        for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] *= (i & bit) ? hi : lo;
        break;
      }
      case Axis::X:
        apply_1q(p.qubits[0], rotation_local_matrix(Axis::X, angle, nm.phase_offset(p.axis, p.qubits)));
        break;
      case Axis::ZX: {
        const double offset = nm.phase_offset(p.axis, p.qubits);
        apply_conditioned_1q(p.qubits[0], p.qubits[1], rotation_local_matrix(Axis::X, angle, offset),
                             rotation_local_matrix(Axis::X, -angle, offset));
        break;
      }
    }
  }

  /// Ideal gate application (no pulse lowering); Barriers are no-ops.
  void apply_gate(const Gate& g) {
    validate_gate(g, n_);
    if (g.kind == GateKind::Barrier) return;
    if (g.qubits.size() == 1)
      apply_1q(g.qubits[0], local_matrix(g));
    else
      apply_local(g.qubits, local_matrix(g));
  }

 private:
  void check_qubit(QubitId q) const {
    if (q >= n_) throw SimulationBoundError("qubit " + std::to_string(q) + " outside the statevector");
  }

  std::size_t n_;
  std::vector<cplx> amps_;
};

/// Applies primitives in order under the noise model.
inline Statevector simulate(std::span<const Primitive> prims, const CoherentNoiseModel& nm, Statevector initial) {
  for (const Primitive& p : prims) initial.apply_primitive(p, nm);
  return initial;
}

/// Ideal gate-level simulation of any valid circuit.
inline Statevector simulate_ideal(const Circuit& c, std::optional<Statevector> initial = std::nullopt) {
  validate(c);
  Statevector sv = initial ? std::move(*initial) : Statevector(c.n_qubits);
  if (sv.n_qubits() != c.n_qubits) throw ValidationError("initial state width does not match the circuit");
  for (const Gate& g : c.gates) sv.apply_gate(g);
  return sv;
}

/// Lowers a basis-gate circuit to pulses and simulates the primitives.
inline Statevector simulate(const Circuit& c, const CalibrationConfig& cal, const CoherentNoiseModel& nm,
                            std::optional<Statevector> initial = std::nullopt) {
  const auto prims = schedules_to_primitives(circuit_to_schedule(c, cal));
  Statevector sv = initial ? std::move(*initial) : Statevector(c.n_qubits);
  if (sv.n_qubits() != c.n_qubits) throw ValidationError("initial state width does not match the circuit");
  return simulate(prims, nm, std::move(sv));
}

/// Outcome probabilities keyed by basis index; absent keys have probability 0.
struct Distribution {
  std::size_t n_bits = 1;
  std::map<std::uint64_t, double> probs;

  double at(std::uint64_t k) const {
    auto it = probs.find(k);
    return it == probs.end() ? 0.0 : it->second;
  }

  double total() const {
    double s = 0.0;
    for (const auto& [k, p] : probs) s += p;
    return s;
  }

  /// Qubit n-1 leftmost.
  std::string bitstring(std::uint64_t k) const {
    std::string s(n_bits, '0');
    for (std::size_t b = 0; b < n_bits; ++b)
      if ((k >> b) & 1U) s[n_bits - 1 - b] = '1';
    return s;
  }
};

inline Distribution distribution(const Statevector& sv) {
  Distribution d;
  d.n_bits = sv.n_qubits();
  const auto& a = sv.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double p = std::norm(a[i]);
    if (p > 0.0) d.probs[i] = p;
  }
  return d;
}

/// Empirical distribution of `shots` samples (inverse-CDF over a portable uniform).
inline Distribution sample(const Statevector& sv, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw ValidationError("sample: shots must be positive");
  const auto& a = sv.amplitudes();
  std::vector<double> cdf(a.size());
  double run = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) cdf[i] = (run += std::norm(a[i]));
  std::mt19937_64 gen(seed);
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53 * run;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
    if (idx >= a.size()) idx = a.size() - 1;
    ++counts[idx];
  }
  Distribution d;
  d.n_bits = sv.n_qubits();
  for (const auto& [k, c] : counts) d.probs[k] = static_cast<double>(c) / static_cast<double>(shots);
  return d;
}

/// F(p, q) = (sum_x sqrt(p(x) q(x)))^2.
inline double fidelity(const Distribution& p, const Distribution& q) {
  if (p.n_bits != q.n_bits) throw ValidationError("fidelity: distributions have different bit widths");
  double bc = 0.0;
  for (const auto& [k, pk] : p.probs) {
    auto it = q.probs.find(k);
    if (it != q.probs.end()) bc += std::sqrt(pk * it->second);
  }
  return std::clamp(bc * bc, 0.0, 1.0);
}

inline json distribution_to_json(const Distribution& d) {
  json j = json::object();
  for (const auto& [k, p] : d.probs) j[d.bitstring(k)] = p;
  return j;
}

inline Distribution distribution_from_json(const json& j) {
  Distribution d;
  bool first = true;
  for (const auto& [bits, p] : j.items()) {
    if (first) {
      d.n_bits = bits.size();
      first = false;
    } else if (bits.size() != d.n_bits) {
      throw ValidationError("distribution keys have mixed widths");
    }
    std::uint64_t k = 0;
    for (char ch : bits) {
      if (ch != '0' && ch != '1') throw ValidationError("distribution key is not a bitstring");
      k = (k << 1) | static_cast<std::uint64_t>(ch == '1');
    }
    d.probs[k] = p.get<double>();
  }
  return d;
}

}  // namespace invforge

#endif  // INVFORGE_NOISESIM_HPP
