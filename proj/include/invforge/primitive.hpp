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

#ifndef INVFORGE_PRIMITIVE_HPP
#define INVFORGE_PRIMITIVE_HPP

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "invforge/circuit.hpp"
#include "invforge/errors.hpp"
#include "invforge/linalg.hpp"
#include "invforge/unitary.hpp"

namespace invforge {

/// Rotation generator of a physical pulse: X on one qubit (drive), Z_c X_t on
/// a pair (cross resonance), or Z on one qubit (frame change).
enum class Axis { X, ZX, Z };

inline std::string_view to_string(Axis a) {
  switch (a) {
    case Axis::X: return "X";
    case Axis::ZX: return "ZX";
    case Axis::Z: return "Z";
  }
  return "?";
}

inline Axis axis_from_string(std::string_view s) {
  if (s == "X") return Axis::X;
  if (s == "ZX") return Axis::ZX;
  if (s == "Z") return Axis::Z;
  throw ValidationError("unknown primitive axis '" + std::string(s) + "'");
}

inline std::size_t axis_arity(Axis a) { return a == Axis::ZX ? 2 : 1; }

/// exp(-i angle/2 * generator). ZX qubits are ordered (control, target).
struct Primitive {
  Axis axis = Axis::X;
  std::vector<QubitId> qubits;
  double angle = 0.0;

  friend bool operator==(const Primitive&, const Primitive&) = default;
};

/// Local matrix of exp(-i a/2 G). For drive axes, `phase` tilts the rotation
/// axis in the XY plane: X -> cos(phase) X + sin(phase) Y.
inline Matrix rotation_local_matrix(Axis axis, double a, double phase = 0.0) {
  const double c = std::cos(a / 2), s = std::sin(a / 2);
  const auto tilted = [&](double sign) {
    return Matrix(2, 2, {c, -kI * (sign * s) * std::exp(-kI * phase), -kI * (sign * s) * std::exp(kI * phase), c});
  };
  switch (axis) {
    case Axis::X: return tilted(1.0);
    case Axis::Z: return mat2::rz(a);
    case Axis::ZX: {
      const Matrix plus = tilted(1.0);
      const Matrix minus = tilted(-1.0);
      Matrix m(4, 4);
      for (int r = 0; r < 2; ++r)
        for (int k = 0; k < 2; ++k) {
          m(2 * r, 2 * k) = plus(r, k);
          m(2 * r + 1, 2 * k + 1) = minus(r, k);
        }
      return m;
    }
  }
  throw ValidationError("unknown primitive axis");
}

inline void validate_primitive(const Primitive& p, std::size_t n_qubits) {
  if (p.qubits.size() != axis_arity(p.axis))
    throw ValidationError("primitive " + std::string(to_string(p.axis)) + " has the wrong number of qubits");
  for (QubitId q : p.qubits)
    if (q >= n_qubits) throw SimulationBoundError("primitive qubit " + std::to_string(q) + " out of range");
  if (p.qubits.size() == 2 && p.qubits[0] == p.qubits[1]) throw ValidationError("primitive qubits must differ");
  if (!std::isfinite(p.angle)) throw ValidationError("primitive angle is not finite");
}

/// Noise-free dense product of a primitive sequence (earliest applied first).
inline Matrix primitives_unitary(std::span<const Primitive> prims, std::size_t n_qubits) {
  if (n_qubits > kMaxOracleQubits) throw SimulationBoundError("primitive product limited to the oracle size");
  Matrix acc = Matrix::identity(std::size_t{1} << n_qubits);
  for (const Primitive& p : prims) {
    validate_primitive(p, n_qubits);
    acc = left_apply(rotation_local_matrix(p.axis, p.angle), p.qubits, acc);
  }
  return acc;
}

}  // namespace invforge

#endif  // INVFORGE_PRIMITIVE_HPP
