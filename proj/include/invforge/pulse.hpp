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

// Pulse-level model.
//
// A pulse is described by its channel, timing, complex amplitude, phase and
// envelope shape, and by the rotation it nominally performs. The rotation angle
// is linear in the pulse area:
//
//     nominal_angle = kappa(channel) * Re(amplitude * e^{i phase}) * duration
//
// Envelope shapes are carried as metadata only; no waveform is integrated.
// Errors are modelled at the rotation level by the simulator, which is the
// granularity at which over-rotation is defined.
//
// The inverse of a schedule runs the same pulses in reverse order with
// negated amplitudes (frame changes get negated angles), so its noise-free
// product is the exact adjoint of the original's.

#ifndef INVFORGE_PULSE_HPP
#define INVFORGE_PULSE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "invforge/circuit.hpp"
#include "invforge/circuit_json.hpp"
#include "invforge/decompose.hpp"
#include "invforge/errors.hpp"
#include "invforge/primitive.hpp"
#include "invforge/unitary.hpp"

namespace invforge {

enum class ChannelKind { Drive, Control };

struct Channel {
  ChannelKind kind = ChannelKind::Drive;
  std::uint32_t index = 0;

  std::string name() const { return (kind == ChannelKind::Drive ? "D" : "U") + std::to_string(index); }

  static Channel parse(const std::string& s) {
    if (s.size() < 2 || (s[0] != 'D' && s[0] != 'U')) throw ValidationError("bad channel name '" + s + "'");
    Channel c;
    c.kind = s[0] == 'D' ? ChannelKind::Drive : ChannelKind::Control;
    try {
      c.index = static_cast<std::uint32_t>(std::stoul(s.substr(1)));
    } catch (const std::exception&) {
      throw ValidationError("bad channel name '" + s + "'");
    }
    return c;
  }

  friend bool operator==(const Channel&, const Channel&) = default;
  friend auto operator<=>(const Channel&, const Channel&) = default;
};

enum class PulseShape { Gaussian, GaussianSquare, Drag, VirtualZ };

inline std::string_view to_string(PulseShape s) {
  switch (s) {
    case PulseShape::Gaussian: return "Gaussian";
    case PulseShape::GaussianSquare: return "GaussianSquare";
    case PulseShape::Drag: return "Drag";
    case PulseShape::VirtualZ: return "VirtualZ";
  }
  return "?";
}

inline PulseShape pulse_shape_from_string(std::string_view s) {
  if (s == "Gaussian") return PulseShape::Gaussian;
  if (s == "GaussianSquare") return PulseShape::GaussianSquare;
  if (s == "Drag") return PulseShape::Drag;
  if (s == "VirtualZ") return PulseShape::VirtualZ;
  throw ValidationError("unknown pulse shape '" + std::string(s) + "'");
}

struct PulseInstruction {
  Channel channel;
  std::int64_t t0 = 0;        // samples
  std::int64_t duration = 0;  // samples
  cplx amplitude{0.0, 0.0};
  double phase = 0.0;  // radians; for VirtualZ this is the frame rotation
  PulseShape shape = PulseShape::Gaussian;
  Primitive primitive;

  bool is_virtual() const { return shape == PulseShape::VirtualZ; }
};

struct PulseSchedule {
  std::vector<PulseInstruction> instructions;
  Gate gate_ref;

  std::int64_t duration() const {
    std::int64_t end = 0;
    for (const auto& in : instructions) end = std::max(end, in.t0 + in.duration);
    return end;
  }
};

/// A template pulse. `role` names the channel relative to the gate's operands:
/// "D" (the qubit of a one-qubit gate), "D_control", "D_target" or "U" (the
/// control channel bound to the operand pair).
struct TemplateInstruction {
  std::string role;
  std::int64_t t0 = 0;
  std::int64_t duration = 0;
  cplx amplitude{0.0, 0.0};
  double phase = 0.0;
  PulseShape shape = PulseShape::Gaussian;
  Axis axis = Axis::X;
};

struct ControlBinding {
  std::uint32_t index = 0;
  QubitId control = 0;
  QubitId target = 0;
};

struct CalibrationConfig {
  double dt = 0.0;
  std::size_t n_qubits = 0;
  std::map<std::string, double> kappa;
  std::vector<ControlBinding> control_channels;
  std::map<std::string, std::vector<TemplateInstruction>> templates;

  double kappa_for(const Channel& ch) const {
    if (auto it = kappa.find(ch.name()); it != kappa.end()) return it->second;
    if (auto it = kappa.find(ch.kind == ChannelKind::Drive ? "D" : "U"); it != kappa.end()) return it->second;
    throw CalibrationError("no kappa for channel " + ch.name());
  }

  std::optional<ControlBinding> binding_for(QubitId control, QubitId target) const {
    for (const auto& b : control_channels)
      if (b.control == control && b.target == target) return b;
    return std::nullopt;
  }

  std::optional<ControlBinding> binding_by_index(std::uint32_t index) const {
    for (const auto& b : control_channels)
      if (b.index == index) return b;
    return std::nullopt;
  }
};

namespace detail {

inline double wrap_angle(double a) { return std::remainder(a, 2.0 * kPi); }

/// Rotation angle of a (non-virtual) pulse.
inline double pulse_angle(double kappa, cplx amplitude, double phase, std::int64_t duration) {
  return kappa * std::real(amplitude * std::exp(kI * phase)) * static_cast<double>(duration);
}

/// Keeps phase in [-pi/2, pi/2] by trading a pi shift for an amplitude sign.
inline void normalize_phase(cplx& amplitude, double& phase) {
  phase = wrap_angle(phase);
  if (phase > kPi / 2) {
    phase -= kPi;
    amplitude = -amplitude;
  } else if (phase < -kPi / 2) {
    phase += kPi;
    amplitude = -amplitude;
  }
}

inline std::int64_t schedule_end(const std::vector<PulseInstruction>& ins) {
  std::int64_t end = 0;
  for (const auto& in : ins) end = std::max(end, in.t0 + in.duration);
  return end;
}

}  // namespace detail

/// Checks timing and amplitude invariants of a schedule.
inline void validate_schedule(const PulseSchedule& s) {
  std::map<Channel, std::vector<std::pair<std::int64_t, std::int64_t>>> busy;
  for (const auto& in : s.instructions) {
    if (in.duration < 0 || in.t0 < 0) throw ValidationError("pulse with negative timing on " + in.channel.name());
    if (in.is_virtual() && in.duration != 0) throw ValidationError("VirtualZ pulses have zero duration");
    if (std::abs(in.amplitude) > 1.0 + 1e-12) throw ValidationError("pulse amplitude exceeds 1 on " + in.channel.name());
    if (in.duration > 0) busy[in.channel].emplace_back(in.t0, in.t0 + in.duration);
  }
  for (auto& [ch, spans] : busy) {
    std::sort(spans.begin(), spans.end());
    for (std::size_t i = 1; i < spans.size(); ++i)
      if (spans[i].first < spans[i - 1].second) throw ValidationError("overlapping pulses on channel " + ch.name());
  }
}

/// Instantiates a template on concrete operands. `scale` multiplies every
/// amplitude (used to derive RX(theta) from the pi-pulse template).
inline PulseSchedule instantiate_template(const CalibrationConfig& cal, const std::string& gate_name,
                                          const Gate& gate, double scale = 1.0) {
  auto it = cal.templates.find(gate_name);
  if (it == cal.templates.end() || it->second.empty())
    throw CalibrationError("calibration has no template for '" + gate_name + "'");
  PulseSchedule s;
  s.gate_ref = gate;
  for (const auto& ti : it->second) {
    PulseInstruction in;
    in.t0 = ti.t0;
    in.duration = ti.duration;
    in.shape = ti.shape;
    in.amplitude = ti.amplitude * scale;
    in.phase = ti.phase;
    in.primitive.axis = ti.axis;
    const bool two_qubit = gate.qubits.size() == 2;
    if (ti.role == "U") {
      if (!two_qubit) throw CalibrationError("template role U needs a two-qubit gate");
      const auto b = cal.binding_for(gate.qubits[0], gate.qubits[1]);
      if (!b)
        throw CalibrationError("missing control channel binding for qubits (" + std::to_string(gate.qubits[0]) + ", " +
                               std::to_string(gate.qubits[1]) + ")");
      in.channel = {ChannelKind::Control, b->index};
      in.primitive.qubits = {b->control, b->target};
    } else {
      QubitId q = 0;
      if (ti.role == "D" && !two_qubit)
        q = gate.qubits[0];
      else if (ti.role == "D_control" && two_qubit)
        q = gate.qubits[0];
      else if (ti.role == "D_target" && two_qubit)
        q = gate.qubits[1];
      else
        throw CalibrationError("template role '" + ti.role + "' does not fit gate " + std::string(to_string(gate.kind)));
      if (q >= cal.n_qubits) throw CalibrationError("no drive channel for qubit " + std::to_string(q));
      in.channel = {ChannelKind::Drive, q};
      in.primitive.qubits = {q};
    }
    if (in.primitive.qubits.size() != axis_arity(in.primitive.axis))
      throw CalibrationError("template '" + gate_name + "': axis " + std::string(to_string(in.primitive.axis)) +
                             " does not match channel " + in.channel.name());
    in.primitive.angle = in.is_virtual()
                             ? in.phase
                             : detail::pulse_angle(cal.kappa_for(in.channel), in.amplitude, in.phase, in.duration);
    if (in.is_virtual()) in.amplitude = 0.0;
    s.instructions.push_back(std::move(in));
  }
  validate_schedule(s);
  return s;
}

/// Reverses the instruction sequence, re-times it from t0 = 0 and negates every
/// amplitude and frame angle. Total duration is preserved.
inline PulseSchedule invert_schedule(const PulseSchedule& s) {
  PulseSchedule out;
  const std::int64_t end = s.duration();
  out.gate_ref = s.gate_ref;
  if (is_self_adjoint(s.gate_ref))
    out.gate_ref.variant = s.gate_ref.is_inverse() ? Variant::Standard : Variant::Inverse;
  else
    out.gate_ref = adjoint_gate(s.gate_ref);
  for (auto it = s.instructions.rbegin(); it != s.instructions.rend(); ++it) {
    PulseInstruction in = *it;
    in.t0 = end - (it->t0 + it->duration);
    if (in.is_virtual())
      in.phase = -in.phase;
    else
      in.amplitude = -in.amplitude;
    in.primitive.angle = -in.primitive.angle;
    out.instructions.push_back(std::move(in));
  }
  return out;
}

/// Primitive rotations in application order.
inline std::vector<Primitive> schedule_to_primitives(const PulseSchedule& s) {
  std::vector<Primitive> out;
  out.reserve(s.instructions.size());
  for (const auto& in : s.instructions) {
    if (in.channel.kind == ChannelKind::Control && in.primitive.qubits.size() != 2)
      throw CalibrationError("unbound control channel " + in.channel.name());
    out.push_back(in.primitive);
  }
  return out;
}

/// Schedule for one basis gate. Inverse variants get the inverted schedule.
inline PulseSchedule schedule_for_gate(const Gate& g, const CalibrationConfig& cal) {
  switch (g.kind) {
    case GateKind::RZ: {
      const QubitId q = g.qubits.at(0);
      if (q >= cal.n_qubits) throw CalibrationError("no drive channel for qubit " + std::to_string(q));
      PulseInstruction in;
      in.channel = {ChannelKind::Drive, q};
      in.shape = PulseShape::VirtualZ;
      in.phase = g.angle();
      in.primitive = {Axis::Z, {q}, g.angle()};
      PulseSchedule s{{in}, g};
      return s;
    }
    case GateKind::RX: {
      Gate standard = g;
      standard.variant = Variant::Standard;
      const PulseSchedule ref = instantiate_template(cal, "x", standard);
      double nominal = 0.0;
      for (const auto& in : ref.instructions) nominal += in.primitive.angle;
      return instantiate_template(cal, "x", g, detail::wrap_angle(g.angle()) / nominal);
    }
    case GateKind::SX:
    case GateKind::X:
    case GateKind::CX: {
      Gate standard = g;
      standard.variant = Variant::Standard;
      standard.pair_id.reset();
      PulseSchedule s = instantiate_template(cal, std::string(to_string(g.kind)), standard);
      s.gate_ref = g;
      if (!g.is_inverse()) return s;
      PulseSchedule inv = invert_schedule(s);
      inv.gate_ref = g;
      return inv;
    }
    default:
      throw UnsupportedGateError("no pulse schedule for non-basis gate '" + std::string(to_string(g.kind)) + "'");
  }
}

inline std::vector<PulseSchedule> circuit_to_schedule(const Circuit& c, const CalibrationConfig& cal) {
  validate(c);
  if (c.n_qubits > cal.n_qubits)
    throw CalibrationError("calibration covers " + std::to_string(cal.n_qubits) + " qubits, circuit needs " +
                           std::to_string(c.n_qubits));
  std::vector<PulseSchedule> out;
  out.reserve(c.gates.size());
  for (const Gate& g : c.gates) out.push_back(schedule_for_gate(g, cal));
  return out;
}

inline std::vector<Primitive> schedules_to_primitives(const std::vector<PulseSchedule>& ss) {
  std::vector<Primitive> out;
  for (const auto& s : ss) {
    auto p = schedule_to_primitives(s);
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

namespace detail {

inline Matrix gate_reference_unitary(const std::string& name) {
  if (name == "x") return mat2::pauli_x();
  if (name == "sx") return mat2::sx();
  if (name == "cx") return local_matrix(gates::cx(0, 1));
  throw CalibrationError("unknown template gate '" + name + "'");
}

}  // namespace detail

/// Instantiates every template on every qubit / bound pair and compares the
/// noise-free product to the gate's unitary (up to global phase, 1e-8).
inline void check_calibration_templates(const CalibrationConfig& cal, double tol = 1e-8) {
  for (const char* required : {"x", "sx", "cx"}) {
    auto it = cal.templates.find(required);
    if (it == cal.templates.end() || it->second.empty())
      throw CalibrationError(std::string("calibration template for '") + required + "' is missing or empty");
  }
  for (const auto& ti : cal.templates.at("x"))
    if (ti.axis != Axis::X || ti.shape == PulseShape::VirtualZ)
      throw CalibrationError("template 'x' may only contain X-axis drive pulses");

  const auto check = [&](const std::string& name, const Gate& g) {
    const PulseSchedule s = instantiate_template(cal, name, g);
    const auto prims = schedule_to_primitives(s);
    std::vector<Primitive> local = prims;
    for (auto& p : local)
      for (auto& q : p.qubits) q = (q == g.qubits[0]) ? 0 : 1;
    const Matrix got = primitives_unitary(local, g.qubits.size());
    const Matrix want = detail::gate_reference_unitary(name);
    const double dev = global_phase_distance(got, want);
    if (dev > tol)
      throw CalibrationError("template '" + name + "' on qubits " + std::to_string(g.qubits[0]) +
                             (g.qubits.size() > 1 ? "," + std::to_string(g.qubits[1]) : std::string()) +
                             " deviates from its gate by " + std::to_string(dev));
  };
  for (QubitId q = 0; q < cal.n_qubits; ++q) {
    check("x", gates::x(q));
    check("sx", gates::sx(q));
  }
  for (const auto& b : cal.control_channels) {
    if (b.control >= cal.n_qubits || b.target >= cal.n_qubits || b.control == b.target)
      throw CalibrationError("control channel U" + std::to_string(b.index) + " is bound to an invalid qubit pair");
    check("cx", gates::cx(b.control, b.target));
  }
}

inline json template_instruction_to_json(const TemplateInstruction& t) {
  json j;
  j["channel"] = t.role;
  j["t0"] = t.t0;
  j["duration"] = t.duration;
  j["amplitude"] = complex_to_json(t.amplitude);
  j["phase"] = t.phase;
  j["shape"] = std::string(to_string(t.shape));
  j["axis"] = std::string(to_string(t.axis));
  return j;
}

inline CalibrationConfig calibration_from_json(const json& j) {
  CalibrationConfig cal;
  try {
    cal.dt = j.at("dt").get<double>();
    cal.n_qubits = j.at("n_qubits").get<std::size_t>();
    if (cal.n_qubits == 0 || cal.n_qubits > kMaxQubits) throw CalibrationError("calibration n_qubits out of range");
    for (const auto& [k, v] : j.at("kappa").items()) cal.kappa[k] = v.get<double>();
    std::uint32_t next_index = 0;
    if (j.contains("control_channels"))
      for (const json& b : j.at("control_channels")) {
        ControlBinding cb{b.at("index").get<std::uint32_t>(), b.at("control").get<QubitId>(),
                          b.at("target").get<QubitId>()};
        if (cal.binding_by_index(cb.index)) throw CalibrationError("duplicate control channel U" + std::to_string(cb.index));
        cal.control_channels.push_back(cb);
        next_index = std::max(next_index, cb.index + 1);
      }
    if (j.value("all_to_all", false)) {
      for (QubitId c = 0; c < cal.n_qubits; ++c)
        for (QubitId t = 0; t < cal.n_qubits; ++t)
          if (c != t && !cal.binding_for(c, t)) cal.control_channels.push_back({next_index++, c, t});
    }
    for (const auto& [name, list] : j.at("templates").items()) {
      std::vector<TemplateInstruction> tis;
      for (const json& in : list) {
        TemplateInstruction t;
        t.role = in.at("channel").get<std::string>();
        t.t0 = in.value("t0", std::int64_t{0});
        t.duration = in.value("duration", std::int64_t{0});
        t.shape = pulse_shape_from_string(in.value("shape", std::string("Gaussian")));
        t.phase = in.value("phase", 0.0);
        if (t.shape == PulseShape::VirtualZ) {
          t.axis = Axis::Z;
          t.duration = 0;
        } else {
          t.amplitude = complex_from_json(in.at("amplitude"));
          t.axis = axis_from_string(in.at("axis").get<std::string>());
          detail::normalize_phase(t.amplitude, t.phase);
        }
        if (std::abs(t.amplitude) > 1.0 + 1e-12) throw CalibrationError("template '" + name + "': |amplitude| > 1");
        tis.push_back(t);
      }
      cal.templates[name] = std::move(tis);
    }
  } catch (const json::exception& e) {
    throw CalibrationError(std::string("malformed calibration: ") + e.what());
  }
  check_calibration_templates(cal);
  return cal;
}

inline CalibrationConfig load_calibration(const std::string& path) { return calibration_from_json(read_json_file(path)); }

/// Synthetic, self-consistent calibration: kappa_D = 0.04 and kappa_U = 0.0025
/// per sample; 160-sample DRAG drive pulses; an echoed cross-resonance CX
/// ZX(pi/4) . X_c(pi) . ZX(-pi/4) . X_c(pi) closed by RZ_c(-pi/2) and RX_t(-pi/2).
inline const char* default_calibration_json() {
  return R"JSON({
  "dt": 2.2222222222222221e-10,
  "n_qubits": 24,
  "kappa": {"D": 0.04, "U": 0.0025},
  "control_channels": [],
  "all_to_all": true,
  "templates": {
    "x": [
      {"channel": "D", "t0": 0, "duration": 160, "amplitude": [0.4908738521234052, 0.0], "phase": 0.0, "shape": "Drag", "axis": "X"}
    ],
    "sx": [
      {"channel": "D", "t0": 0, "duration": 160, "amplitude": [0.2454369260617026, 0.0], "phase": 0.0, "shape": "Drag", "axis": "X"}
    ],
    "cx": [
      {"channel": "U", "t0": 0, "duration": 560, "amplitude": [0.5609986881410345, 0.0], "phase": 0.0, "shape": "GaussianSquare", "axis": "ZX"},
      {"channel": "D_control", "t0": 560, "duration": 160, "amplitude": [0.4908738521234052, 0.0], "phase": 0.0, "shape": "Drag", "axis": "X"},
      {"channel": "U", "t0": 720, "duration": 560, "amplitude": [-0.5609986881410345, 0.0], "phase": 0.0, "shape": "GaussianSquare", "axis": "ZX"},
      {"channel": "D_control", "t0": 1280, "duration": 160, "amplitude": [0.4908738521234052, 0.0], "phase": 0.0, "shape": "Drag", "axis": "X"},
      {"channel": "D_control", "t0": 1440, "duration": 0, "phase": -1.5707963267948966, "shape": "VirtualZ"},
      {"channel": "D_target", "t0": 1440, "duration": 160, "amplitude": [-0.2454369260617026, 0.0], "phase": 0.0, "shape": "Drag", "axis": "X"}
    ]
  }
}
)JSON";
}

inline const CalibrationConfig& default_calibration() {
  static const CalibrationConfig cal = calibration_from_json(json::parse(default_calibration_json()));
  return cal;
}

/// Calibration named by INVFORGE_CAL, or the built-in one.
inline CalibrationConfig calibration_from_env_or_default() {
  if (const char* path = std::getenv("INVFORGE_CAL"); path != nullptr && *path != '\0') return load_calibration(path);
  return default_calibration();
}

inline json instruction_to_json(const PulseInstruction& in) {
  json j;
  j["channel"] = in.channel.name();
  j["t0"] = in.t0;
  j["duration"] = in.duration;
  j["amplitude"] = complex_to_json(in.amplitude);
  j["phase"] = in.phase;
  j["shape"] = std::string(to_string(in.shape));
  j["primitive"] = {{"axis", std::string(to_string(in.primitive.axis))},
                    {"qubits", in.primitive.qubits},
                    {"angle", in.primitive.angle}};
  return j;
}

inline PulseInstruction instruction_from_json(const json& j) {
  PulseInstruction in;
  in.channel = Channel::parse(j.at("channel").get<std::string>());
  in.t0 = j.at("t0").get<std::int64_t>();
  in.duration = j.at("duration").get<std::int64_t>();
  in.amplitude = complex_from_json(j.at("amplitude"));
  in.phase = j.at("phase").get<double>();
  in.shape = pulse_shape_from_string(j.at("shape").get<std::string>());
  const json& p = j.at("primitive");
  in.primitive.axis = axis_from_string(p.at("axis").get<std::string>());
  in.primitive.qubits = p.at("qubits").get<std::vector<QubitId>>();
  in.primitive.angle = p.at("angle").get<double>();
  return in;
}

inline json schedule_to_json(const PulseSchedule& s) {
  json j;
  j["gate"] = gate_to_json(s.gate_ref);
  j["duration"] = s.duration();
  json ins = json::array();
  for (const auto& in : s.instructions) ins.push_back(instruction_to_json(in));
  j["instructions"] = ins;
  return j;
}

inline PulseSchedule schedule_from_json(const json& j) {
  PulseSchedule s;
  try {
    s.gate_ref = gate_from_json(j.at("gate"));
    for (const json& in : j.at("instructions")) s.instructions.push_back(instruction_from_json(in));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed schedule: ") + e.what());
  }
  validate_schedule(s);
  return s;
}

}  // namespace invforge

#endif  // INVFORGE_PULSE_HPP
