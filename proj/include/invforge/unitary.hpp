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

// Dense matrix semantics of circuits. This is the correctness oracle for every
// pass and for the kernel simulator; it favours obviousness over speed.

#ifndef INVFORGE_UNITARY_HPP
#define INVFORGE_UNITARY_HPP

#include <cstddef>
#include <span>

#include "invforge/circuit.hpp"
#include "invforge/errors.hpp"
#include "invforge/linalg.hpp"

namespace invforge {

inline constexpr std::size_t kMaxOracleQubits = 12;

namespace detail {

/// Gathers the bits of `index` at `qubits` into a local index (qubits[k] -> bit k).
inline std::size_t gather_bits(std::size_t index, std::span<const QubitId> qubits) {
  std::size_t local = 0;
  for (std::size_t k = 0; k < qubits.size(); ++k) local |= ((index >> qubits[k]) & 1U) << k;
  return local;
}

inline std::size_t scatter_bits(std::size_t base, std::size_t local, std::span<const QubitId> qubits) {
  for (std::size_t k = 0; k < qubits.size(); ++k) {
    const std::size_t bit = std::size_t{1} << qubits[k];
    base = ((local >> k) & 1U) ? (base | bit) : (base & ~bit);
  }
  return base;
}

}  // namespace detail

/// Embeds a local operator acting on `qubits` into the full 2^n space.
inline Matrix embed(const Matrix& local, std::span<const QubitId> qubits, std::size_t n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  Matrix out(dim, dim);
  const std::size_t local_dim = local.rows();
  for (std::size_t col = 0; col < dim; ++col) {
    const std::size_t lc = detail::gather_bits(col, qubits);
    for (std::size_t lr = 0; lr < local_dim; ++lr) {
      const cplx v = local(lr, lc);
      if (v == cplx{}) continue;
      out(detail::scatter_bits(col, lr, qubits), col) = v;
    }
  }
  return out;
}

inline Matrix unitary_of_gate(const Gate& g, std::size_t n_qubits) {
  if (n_qubits > kMaxOracleQubits)
    throw SimulationBoundError("matrix oracle is limited to " + std::to_string(kMaxOracleQubits) + " qubits");
  validate_gate(g, n_qubits);
  return embed(local_matrix(g), g.qubits, n_qubits);
}

/// Left-multiplies `acc` by the embedding of a local operator without forming it.
inline Matrix left_apply(const Matrix& local, std::span<const QubitId> qubits, const Matrix& acc) {
  const std::size_t dim = acc.rows();
  const std::size_t local_dim = local.rows();
  Matrix out(dim, acc.cols());
  for (std::size_t row = 0; row < dim; ++row) {
    const std::size_t lr = detail::gather_bits(row, qubits);
    for (std::size_t lc = 0; lc < local_dim; ++lc) {
      const cplx v = local(lr, lc);
      if (v == cplx{}) continue;
      const std::size_t k = detail::scatter_bits(row, lc, qubits);
      for (std::size_t col = 0; col < acc.cols(); ++col) out(row, col) += v * acc(k, col);
    }
  }
  return out;
}

/// Product of gate unitaries, earliest gate applied first. Barriers are identity.
inline Matrix unitary_of_circuit(const Circuit& c) {
  if (c.n_qubits > kMaxOracleQubits)
    throw SimulationBoundError("matrix oracle is limited to " + std::to_string(kMaxOracleQubits) + " qubits");
  validate(c);
  Matrix acc = Matrix::identity(std::size_t{1} << c.n_qubits);
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::Barrier) continue;
    acc = left_apply(local_matrix(g), g.qubits, acc);
  }
  return acc;
}

}  // namespace invforge

#endif  // INVFORGE_UNITARY_HPP
