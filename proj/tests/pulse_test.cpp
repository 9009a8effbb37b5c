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

#include "invforge/pulse.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "gtest/gtest.h"

#include "invforge/decompose.hpp"
#include "invforge/unitary.hpp"
#include "oracles.hpp"

using namespace invforge;

namespace {

const CalibrationConfig& cal() { return default_calibration(); }

json default_cal_json() { return json::parse(default_calibration_json()); }

// Dense product of primitives built from the closed-form rotation exponentials
// of the oracle, independent of the library's primitive matrices.
Matrix oracle_product(const std::vector<Primitive>& prims, std::size_t n) {
  Matrix acc = Matrix::identity(std::size_t{1} << n);
  for (const Primitive& p : prims) {
    std::string label(n, 'I');
    if (p.axis == Axis::X) label[p.qubits[0]] = 'X';
    if (p.axis == Axis::Z) label[p.qubits[0]] = 'Z';
    if (p.axis == Axis::ZX) {
      label[p.qubits[0]] = 'Z';
      label[p.qubits[1]] = 'X';
    }
    acc = oracle::mul(oracle::pauli_exponential(label, p.angle), acc);
  }
  return acc;
}

std::vector<std::pair<std::int64_t, std::int64_t>> spans_on(const PulseSchedule& s, const Channel& ch) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (const auto& in : s.instructions)
    if (in.channel == ch && in.duration > 0) out.emplace_back(in.t0, in.t0 + in.duration);
  std::sort(out.begin(), out.end());
  return out;
}

void expect_no_overlap(const PulseSchedule& s) {
  for (const auto& in : s.instructions) {
    auto spans = spans_on(s, in.channel);
    for (std::size_t i = 1; i < spans.size(); ++i) EXPECT_GE(spans[i].first, spans[i - 1].second);
  }
}

}  // namespace

TEST(calibration, bundled_default_loads_and_passes_template_check) {
  EXPECT_EQ(cal().n_qubits, 24U);
  EXPECT_NO_THROW(check_calibration_templates(cal()));
  EXPECT_DOUBLE_EQ(cal().kappa_for(Channel{ChannelKind::Drive, 5}), 0.04);
  EXPECT_DOUBLE_EQ(cal().kappa_for(Channel{ChannelKind::Control, 3}), 0.0025);
}

TEST(calibration, data_file_matches_builtin) {
  const CalibrationConfig from_file = load_calibration(std::string(INVFORGE_DATA_DIR) + "/calibration_default.json");
  EXPECT_EQ(template_instruction_to_json(from_file.templates.at("cx")[0]),
            template_instruction_to_json(cal().templates.at("cx")[0]));
  EXPECT_EQ(from_file.control_channels.size(), cal().control_channels.size());
}

TEST(calibration, doubled_kappa_fails_with_deviation_report) {
  json j = default_cal_json();
  j["kappa"]["D"] = 0.08;
  try {
    calibration_from_json(j);
    FAIL() << "expected a calibration error";
  } catch (const CalibrationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("deviates"), std::string::npos) << msg;
    EXPECT_NE(msg.find("'x'"), std::string::npos) << msg;
  }
}

TEST(calibration, empty_cx_template_is_rejected) {
  json j = default_cal_json();
  j["templates"]["cx"] = json::array();
  EXPECT_THROW(calibration_from_json(j), ValidationError);
}

TEST(calibration, missing_binding_is_rejected) {
  json j = default_cal_json();
  j["all_to_all"] = false;
  j["n_qubits"] = 3;
  j["control_channels"] = json::array({json{{"index", 0}, {"control", 0}, {"target", 1}}});
  const CalibrationConfig sparse = calibration_from_json(j);
  EXPECT_NO_THROW(schedule_for_gate(gates::cx(0, 1), sparse));
  EXPECT_THROW(schedule_for_gate(gates::cx(1, 2), sparse), CalibrationError);
  EXPECT_THROW(load_calibration("/nonexistent/cal.json"), IoError);
}

TEST(schedule, rz_is_a_single_virtual_z) {
  const PulseSchedule s = schedule_for_gate(gates::rz(2, 0.37), cal());
  ASSERT_EQ(s.instructions.size(), 1U);
  EXPECT_EQ(s.instructions[0].shape, PulseShape::VirtualZ);
  EXPECT_EQ(s.instructions[0].duration, 0);
  EXPECT_EQ(s.instructions[0].amplitude, cplx(0.0));
  EXPECT_EQ(s.duration(), 0);
  const auto prims = schedule_to_primitives(s);
  ASSERT_EQ(prims.size(), 1U);
  EXPECT_EQ(prims[0], (Primitive{Axis::Z, {2}, 0.37}));
}

TEST(schedule, standard_cx_instantiates_template_channels) {
  const PulseSchedule s = schedule_for_gate(gates::cx(0, 1), cal());
  const auto& tpl = cal().templates.at("cx");
  ASSERT_EQ(s.instructions.size(), tpl.size());
  const auto binding = cal().binding_for(0, 1);
  ASSERT_TRUE(binding.has_value());
  for (std::size_t i = 0; i < tpl.size(); ++i) {
    const auto& in = s.instructions[i];
    Channel want{ChannelKind::Drive, 1};
    if (tpl[i].role == "U") want = {ChannelKind::Control, binding->index};
    if (tpl[i].role == "D_control") want = {ChannelKind::Drive, 0};
    EXPECT_EQ(in.channel, want) << tpl[i].role;
    EXPECT_EQ(in.t0, tpl[i].t0);
  }
  expect_no_overlap(s);
}

TEST(schedule, nominal_angle_follows_linear_amplitude_map) {
  const PulseSchedule s = schedule_for_gate(gates::cx(3, 1), cal());
  for (const auto& in : s.instructions) {
    if (in.is_virtual()) continue;
    const double expected = cal().kappa_for(in.channel) * std::real(in.amplitude * std::exp(kI * in.phase)) *
                            static_cast<double>(in.duration);
    EXPECT_NEAR(in.primitive.angle, expected, 1e-12);
    EXPECT_LE(std::abs(in.amplitude), 1.0);
  }
}

TEST(schedule, templates_realize_their_gates) {
  for (const Gate& g : {gates::x(0), gates::sx(1), gates::cx(0, 1), gates::cx(1, 0)}) {
    const auto prims = schedule_to_primitives(schedule_for_gate(g, cal()));
    EXPECT_LT(oracle::phase_distance(oracle_product(prims, 2), unitary_of_gate(g, 2)), 1e-8) << to_string(g.kind);
  }
}

TEST(schedule, rx_scales_the_pi_pulse) {
  for (double t : {-3.0, -kPi / 2, 0.2, 1.0, kPi, 5.5}) {
    const auto prims = schedule_to_primitives(schedule_for_gate(gates::rx(0, t), cal()));
    EXPECT_LT(oracle::phase_distance(oracle_product(prims, 1), oracle::pauli_exponential("X", t)), 1e-10) << t;
  }
}

TEST(schedule, inverse_cx_is_reversed_and_negated) {
  const PulseSchedule s = schedule_for_gate(gates::cx(0, 1), cal());
  const PulseSchedule inv = schedule_for_gate(gates::inverse(gates::cx(0, 1)), cal());
  ASSERT_EQ(inv.instructions.size(), s.instructions.size());
  const std::size_t n = s.instructions.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = s.instructions[n - 1 - i];
    const auto& b = inv.instructions[i];
    EXPECT_EQ(a.channel, b.channel);
    EXPECT_EQ(b.amplitude, -a.amplitude);
    EXPECT_EQ(b.primitive.angle, -a.primitive.angle);
    EXPECT_EQ(b.t0, s.duration() - (a.t0 + a.duration));
  }
  EXPECT_EQ(inv.duration(), s.duration());
  expect_no_overlap(inv);
  EXPECT_LT(oracle::phase_distance(oracle_product(schedule_to_primitives(inv), 2), unitary_of_gate(gates::cx(0, 1), 2)),
            1e-8);
}

TEST(invert, double_inversion_restores_primitives) {
  for (const Gate& g : {gates::x(2), gates::sx(0), gates::cx(2, 0), gates::rx(1, 0.3), gates::rz(0, -1.0)}) {
    const PulseSchedule s = schedule_for_gate(g, cal());
    const PulseSchedule twice = invert_schedule(invert_schedule(s));
    EXPECT_EQ(schedule_to_primitives(twice), schedule_to_primitives(s));
    EXPECT_EQ(twice.duration(), s.duration());
    for (std::size_t i = 0; i < s.instructions.size(); ++i) EXPECT_EQ(twice.instructions[i].t0, s.instructions[i].t0);
  }
}

TEST(invert, x_pulse_inverse_cancels) {
  const PulseSchedule s = schedule_for_gate(gates::x(0), cal());
  const PulseSchedule inv = invert_schedule(s);
  ASSERT_EQ(inv.instructions.size(), 1U);
  EXPECT_EQ(inv.instructions[0].amplitude, -s.instructions[0].amplitude);
  EXPECT_NEAR(inv.instructions[0].primitive.angle, -kPi, 1e-12);
  std::vector<Primitive> both = schedule_to_primitives(s);
  for (const auto& p : schedule_to_primitives(inv)) both.push_back(p);
  EXPECT_LT(max_abs_diff(oracle_product(both, 1), Matrix::identity(2)), 1e-12);
}

TEST(invert, product_is_adjoint_for_templates_and_random_drives) {
  for (const Gate& g : {gates::x(0), gates::sx(1), gates::cx(0, 1), gates::cx(1, 0)}) {
    const PulseSchedule s = schedule_for_gate(g, cal());
    const Matrix fwd = primitives_unitary(schedule_to_primitives(s), 2);
    const Matrix back = primitives_unitary(schedule_to_primitives(invert_schedule(s)), 2);
    EXPECT_LT(max_abs_diff(back, fwd.adjoint()), 1e-10);
  }
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> amp(-1.0, 1.0), ph(-kPi, kPi);
  std::uniform_int_distribution<int> dur(1, 200), q(0, 2);
  for (int trial = 0; trial < 50; ++trial) {
    PulseSchedule s;
    std::map<std::uint32_t, std::int64_t> clock;
    for (int k = 0; k < 8; ++k) {
      PulseInstruction in;
      const auto qubit = static_cast<std::uint32_t>(q(gen));
      in.channel = {ChannelKind::Drive, qubit};
      in.t0 = clock[qubit];
      if (k % 3 == 2) {
        in.shape = PulseShape::VirtualZ;
        in.phase = ph(gen);
        in.primitive = {Axis::Z, {qubit}, in.phase};
      } else {
        in.duration = dur(gen);
        in.amplitude = amp(gen);
        in.shape = PulseShape::Gaussian;
        in.primitive = {Axis::X, {qubit}, 0.04 * in.amplitude.real() * static_cast<double>(in.duration)};
      }
      clock[qubit] += in.duration;
      s.instructions.push_back(in);
    }
    validate_schedule(s);
    const Matrix fwd = primitives_unitary(schedule_to_primitives(s), 3);
    const Matrix back = primitives_unitary(schedule_to_primitives(invert_schedule(s)), 3);
    EXPECT_LT(max_abs_diff(back, fwd.adjoint()), 1e-10);
    expect_no_overlap(invert_schedule(s));
  }
}

TEST(circuit_to_schedule, empty_circuit) { EXPECT_TRUE(circuit_to_schedule(Circuit(2), cal()).empty()); }

TEST(circuit_to_schedule, hidden_pair_gives_schedule_and_its_inverse) {
  Circuit c(2);
  c.add(gates::paired(gates::cx(0, 1), 0)).add(gates::inverse(gates::cx(0, 1), 0));
  const auto ss = circuit_to_schedule(c, cal());
  ASSERT_EQ(ss.size(), 2U);
  EXPECT_EQ(schedule_to_primitives(ss[1]), schedule_to_primitives(invert_schedule(ss[0])));
}

TEST(circuit_to_schedule, hidden_inverse_crz_trace) {
  PassConfig cfg;
  Circuit c(2);
  c.append(decompose_crz(gates::crz(0, 1, 0.9), cfg));
  const auto ss = circuit_to_schedule(c, cal());
  ASSERT_EQ(ss.size(), 4U);
  EXPECT_EQ(ss[0].instructions.size(), 1U);
  EXPECT_EQ(ss[0].instructions[0].shape, PulseShape::VirtualZ);
  EXPECT_EQ(ss[2].instructions[0].shape, PulseShape::VirtualZ);
  const PulseSchedule plain = schedule_for_gate(gates::cx(0, 1), cal());
  EXPECT_EQ(schedule_to_primitives(ss[1]), schedule_to_primitives(plain));
  EXPECT_EQ(schedule_to_primitives(ss[3]), schedule_to_primitives(invert_schedule(plain)));
}

TEST(circuit_to_schedule, rejects_non_basis_gates) {
  Circuit c(2);
  c.add(gates::h(0));
  EXPECT_THROW(circuit_to_schedule(c, cal()), UnsupportedGateError);
  EXPECT_THROW(schedule_for_gate(gates::crz(0, 1, 0.3), cal()), UnsupportedGateError);
}

TEST(schedule_json, round_trip) {
  const PulseSchedule s = schedule_for_gate(gates::inverse(gates::cx(1, 2)), cal());
  const PulseSchedule back = schedule_from_json(json::parse(schedule_to_json(s).dump()));
  EXPECT_EQ(back.gate_ref, s.gate_ref);
  EXPECT_EQ(schedule_to_primitives(back), schedule_to_primitives(s));
  ASSERT_EQ(back.instructions.size(), s.instructions.size());
  for (std::size_t i = 0; i < s.instructions.size(); ++i) {
    EXPECT_EQ(back.instructions[i].channel, s.instructions[i].channel);
    EXPECT_EQ(back.instructions[i].amplitude, s.instructions[i].amplitude);
  }
}

TEST(validate_schedule, rejects_overlap_and_large_amplitude) {
  PulseSchedule s;
  PulseInstruction a;
  a.channel = {ChannelKind::Drive, 0};
  a.duration = 100;
  a.amplitude = 0.5;
  a.primitive = {Axis::X, {0}, 1.0};
  PulseInstruction b = a;
  b.t0 = 50;
  s.instructions = {a, b};
  EXPECT_THROW(validate_schedule(s), ValidationError);
  a.amplitude = 1.5;
  s.instructions = {a};
  EXPECT_THROW(validate_schedule(s), ValidationError);
}
