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

#include "invforge/circuit.hpp"

#include <random>

#include "gtest/gtest.h"

#include "invforge/circuit_json.hpp"
#include "invforge/unitary.hpp"
#include "oracles.hpp"

using namespace invforge;

TEST(circuit, cx_is_little_endian_permutation) {
  const Matrix u = unitary_of_gate(gates::cx(0, 1), 2);
  Matrix expected(4, 4);
  expected(0, 0) = 1.0;
  expected(3, 1) = 1.0;
  expected(2, 2) = 1.0;
  expected(1, 3) = 1.0;
  EXPECT_LT(max_abs_diff(u, expected), 1e-15);
}

TEST(circuit, zero_angle_rz_is_identity) {
  EXPECT_LT(max_abs_diff(unitary_of_gate(gates::rz(0, 0.0), 1), Matrix::identity(2)), 1e-15);
}

TEST(circuit, crz_pi_matches_diagonal) {
  const Matrix u = unitary_of_gate(gates::crz(0, 1, kPi), 2);
  Matrix expected(4, 4);
  expected(0, 0) = 1.0;
  expected(1, 1) = std::exp(-kI * (kPi / 2));
  expected(2, 2) = 1.0;
  expected(3, 3) = std::exp(kI * (kPi / 2));
  EXPECT_LT(max_abs_diff(u, expected), 1e-12);
}

TEST(circuit, controlled_gates_match_entrywise_oracle) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> angle(-4.0, 4.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double t = angle(gen);
    EXPECT_LT(max_abs_diff(unitary_of_gate(gates::crz(2, 0, t), 3), oracle::controlled({2}, 0, oracle::rz(t), 3)),
              1e-12);
    Matrix ph(2, 2);
    ph(0, 0) = 1.0;
    ph(1, 1) = std::polar(1.0, t);
    EXPECT_LT(max_abs_diff(unitary_of_gate(gates::cphase(1, 2, t), 3), oracle::controlled({1}, 2, ph, 3)), 1e-12);
    EXPECT_LT(max_abs_diff(unitary_of_gate(gates::rzx(0, 1, t), 2), oracle::pauli_exponential("ZX", t)), 1e-12);
    const Matrix w = oracle::random_unitary(2, gen);
    EXPECT_LT(max_abs_diff(unitary_of_gate(gates::mcu({3, 0}, 1, w), 4), oracle::controlled({3, 0}, 1, w, 4)),
              1e-12);
  }
}

TEST(circuit, single_qubit_rotations_match_exponentials) {
  for (double t : {-2.5, -0.3, 0.0, 0.9, 3.1}) {
    EXPECT_LT(max_abs_diff(unitary_of_gate(gates::rx(0, t), 1), oracle::pauli_exponential("X", t)), 1e-12);
    EXPECT_LT(max_abs_diff(unitary_of_gate(gates::ry(0, t), 1), oracle::pauli_exponential("Y", t)), 1e-12);
    EXPECT_LT(max_abs_diff(unitary_of_gate(gates::rz(0, t), 1), oracle::pauli_exponential("Z", t)), 1e-12);
  }
}

TEST(circuit, every_kind_is_unitary) {
  std::mt19937_64 gen(3);
  const std::vector<Gate> all = {gates::x(0),        gates::sx(1),         gates::h(2),
                                 gates::rx(0, 0.3),  gates::ry(1, -1.2),   gates::rz(2, 2.2),
                                 gates::phase(0, 1), gates::cx(2, 0),      gates::crz(0, 2, 0.4),
                                 gates::cphase(1, 0, 2.0), gates::rzx(2, 1, -0.7),
                                 gates::mcu({0, 1}, 2, oracle::random_unitary(2, gen)), gates::barrier({0, 1, 2})};
  for (const Gate& g : all) EXPECT_TRUE(is_unitary(unitary_of_gate(g, 3), 1e-10)) << to_string(g.kind);
}

TEST(circuit, empty_circuit_is_identity) {
  EXPECT_LT(max_abs_diff(unitary_of_circuit(Circuit(3)), Matrix::identity(8)), 1e-15);
}

TEST(circuit, cx_pair_cancels) {
  Circuit c(2);
  c.add(gates::cx(0, 1)).add(gates::cx(0, 1));
  EXPECT_LT(max_abs_diff(unitary_of_circuit(c), Matrix::identity(4)), 1e-15);
}

TEST(circuit, composition_multiplies_right_to_left) {
  Circuit a(3), b(3);
  a.add(gates::h(0)).add(gates::cx(0, 2)).add(gates::ry(1, 0.4));
  b.add(gates::crz(2, 1, 1.3)).add(gates::sx(0)).add(gates::rzx(1, 0, 0.2));
  Circuit ab = a;
  ab.append(b.gates);
  const Matrix expected = oracle::mul(unitary_of_circuit(b), unitary_of_circuit(a));
  EXPECT_LT(max_abs_diff(unitary_of_circuit(ab), expected), 1e-10);
}

TEST(circuit, variant_flags_do_not_change_semantics) {
  Circuit c(3);
  c.add(gates::h(0)).add(gates::cx(0, 1)).add(gates::rz(1, 0.5)).add(gates::cx(0, 1)).add(gates::x(2)).add(gates::h(0));
  Circuit flipped = c;
  flipped.gates[3] = gates::inverse(flipped.gates[3], 0);
  flipped.gates[1].pair_id = 0;
  flipped.gates[5] = gates::inverse(flipped.gates[5]);
  flipped.gates[4] = gates::inverse(flipped.gates[4]);
  EXPECT_EQ(unitary_of_circuit(c).data(), unitary_of_circuit(flipped).data());
}

TEST(circuit, global_phase_equivalence) {
  std::mt19937_64 gen(5);
  const Matrix u = oracle::random_unitary(4, gen);
  EXPECT_TRUE(equal_up_to_global_phase(u, std::exp(kI * (kPi / 7)) * u, 1e-9));
  EXPECT_FALSE(equal_up_to_global_phase(Matrix::identity(2), mat2::pauli_x(), 1e-9));
  for (double t : {0.1, 1.7, -2.9}) EXPECT_TRUE(equal_up_to_global_phase(mat2::rz(t), mat2::phase(t), 1e-9));
  EXPECT_THROW(equal_up_to_global_phase(Matrix::identity(2), Matrix::identity(4), 1e-9), std::invalid_argument);
}

TEST(circuit, validation_rejects_bad_gates) {
  Circuit c(2);
  c.add(gates::cx(0, 2));
  EXPECT_THROW(validate(c), ValidationError);

  Circuit rep(2);
  rep.add(gates::cx(1, 1));
  EXPECT_THROW(validate(rep), ValidationError);

  Circuit inv(1);
  inv.add(gates::inverse(gates::rz(0, 0.3)));
  EXPECT_THROW(validate(inv), ValidationError);

  Circuit nan(1);
  nan.add(gates::rx(0, std::nan("")));
  EXPECT_THROW(validate(nan), ValidationError);

  Matrix bad = Matrix::identity(2);
  bad(0, 1) = 0.5;
  Circuit m(2);
  m.add(gates::mcu({0}, 1, bad));
  EXPECT_THROW(validate(m), ValidationError);

  EXPECT_THROW(validate(Circuit(25)), SimulationBoundError);
  EXPECT_THROW(unitary_of_circuit(Circuit(13)), SimulationBoundError);
}

TEST(circuit, pair_members_must_match) {
  Circuit c(3);
  c.add(gates::paired(gates::cx(0, 1), 4)).add(gates::inverse(gates::cx(0, 2), 4));
  EXPECT_THROW(validate(c), ValidationError);

  Circuit three(2);
  three.add(gates::paired(gates::x(0), 1)).add(gates::inverse(gates::x(0), 1)).add(gates::paired(gates::x(0), 1));
  EXPECT_THROW(validate(three), ValidationError);
}

TEST(circuit, self_adjoint_kinds) {
  EXPECT_TRUE(is_self_adjoint(gates::x(0)));
  EXPECT_TRUE(is_self_adjoint(gates::h(0)));
  EXPECT_TRUE(is_self_adjoint(gates::cx(0, 1)));
  EXPECT_TRUE(is_self_adjoint(gates::mcu({0, 1}, 2, mat2::pauli_x())));
  EXPECT_FALSE(is_self_adjoint(gates::sx(0)));
  EXPECT_FALSE(is_self_adjoint(gates::rz(0, 0.1)));
  EXPECT_FALSE(is_self_adjoint(gates::mcu({0}, 1, mat2::sx())));
}

TEST(circuit_json, round_trip_preserves_everything) {
  std::mt19937_64 gen(8);
  Circuit c(4);
  c.add(gates::h(0))
      .add(gates::paired(gates::cx(0, 1), 3))
      .add(gates::rz(1, 0.123456789012345))
      .add(gates::inverse(gates::cx(0, 1), 3))
      .add(gates::mcu({0, 1, 2}, 3, oracle::random_unitary(2, gen)))
      .add(gates::barrier({0, 3}));
  const Circuit back = circuit_from_json(json::parse(circuit_to_json(c).dump()));
  EXPECT_EQ(back, c);
}

TEST(circuit_json, rejects_malformed_documents) {
  EXPECT_THROW(circuit_from_json(json::parse(R"({"gates": []})")), ValidationError);
  EXPECT_THROW(circuit_from_json(json::parse(R"({"n_qubits": 2, "gates": [{"kind": "foo", "qubits": [0]}]})")),
               ValidationError);
  EXPECT_THROW(circuit_from_json(json::parse(R"({"n_qubits": 2, "gates": [{"kind": "cx", "qubits": [0, 5]}]})")),
               ValidationError);
  EXPECT_THROW(read_json_file("/nonexistent/circuit.json"), IoError);
}
