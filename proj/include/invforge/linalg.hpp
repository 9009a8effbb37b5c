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

#ifndef INVFORGE_LINALG_HPP
#define INVFORGE_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace invforge {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Dense row-major complex matrix. Used for 2x2 gate blocks as well as the
/// full 2^n x 2^n unitaries of the matrix oracle.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::initializer_list<cplx> values)
      : rows_(rows), cols_(cols), data_(values) {
    if (data_.size() != rows * cols) throw std::invalid_argument("Matrix: wrong number of entries");
  }

  static Matrix identity(std::size_t dim) {
    Matrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

  Matrix adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  Matrix& operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: dimension mismatch in product");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend Matrix operator*(cplx s, Matrix m) { return m *= s; }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("Matrix: dimension mismatch in sum");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend Matrix operator-(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("Matrix: dimension mismatch in difference");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Largest elementwise modulus of a - b.
inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("max_abs_diff: dimension mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

/// Kronecker product a (x) b; b occupies the low-order index bits.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline bool is_unitary(const Matrix& u, double tol = 1e-10) {
  if (!u.square()) return false;
  return max_abs_diff(u.adjoint() * u, Matrix::identity(u.rows())) <= tol;
}

/// Phase-insensitive comparison: aligns b to a with phi = arg(tr(b^dagger a)) and
/// compares elementwise.
inline bool equal_up_to_global_phase(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("equal_up_to_global_phase: dimension mismatch");
  cplx overlap = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) overlap += std::conj(b.data()[i]) * a.data()[i];
  const cplx phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx{1.0};
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - phase * b.data()[i]));
  return worst <= tol;
}

/// Same alignment as equal_up_to_global_phase, returning the residual.
inline double global_phase_distance(const Matrix& a, const Matrix& b) {
  cplx overlap = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) overlap += std::conj(b.data()[i]) * a.data()[i];
  const cplx phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx{1.0};
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - phase * b.data()[i]));
  return worst;
}

namespace mat2 {

inline Matrix identity() { return Matrix::identity(2); }
inline Matrix pauli_x() { return Matrix(2, 2, {0.0, 1.0, 1.0, 0.0}); }
inline Matrix pauli_y() { return Matrix(2, 2, {0.0, -kI, kI, 0.0}); }
inline Matrix pauli_z() { return Matrix(2, 2, {1.0, 0.0, 0.0, -1.0}); }
inline Matrix hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return Matrix(2, 2, {s, s, s, -s});
}
inline Matrix rx(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return Matrix(2, 2, {c, -kI * s, -kI * s, c});
}
inline Matrix ry(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return Matrix(2, 2, {c, -s, s, c});
}
inline Matrix rz(double theta) { return Matrix(2, 2, {std::exp(-kI * (theta / 2)), 0.0, 0.0, std::exp(kI * (theta / 2))}); }
inline Matrix phase(double theta) { return Matrix(2, 2, {1.0, 0.0, 0.0, std::exp(kI * theta)}); }
inline Matrix sx() { return Matrix(2, 2, {cplx{0.5, 0.5}, cplx{0.5, -0.5}, cplx{0.5, -0.5}, cplx{0.5, 0.5}}); }

/// Principal square root of a 2x2 unitary: eigenvalue square roots taken with
/// arg in (-pi/2, pi/2]. Uses V = (U + s1 s2 I) / (s1 + s2), which is exact for
/// any 2x2 matrix whose root eigenvalues do not cancel; unitary inputs never
/// hit that case.
inline Matrix principal_sqrt(const Matrix& u) {
  if (u.rows() != 2 || u.cols() != 2) throw std::invalid_argument("principal_sqrt: expected a 2x2 matrix");
  const cplx tr = u.trace();
  const cplx det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  const cplx disc = std::sqrt(tr * tr / 4.0 - det);
  const cplx l1 = tr / 2.0 + disc;
  const cplx l2 = tr / 2.0 - disc;
  const cplx s1 = std::sqrt(l1);
  const cplx s2 = std::sqrt(l2);
  const cplx denom = s1 + s2;
  if (std::abs(denom) < 1e-12) throw std::domain_error("principal_sqrt: defective or ill-conditioned input");
  Matrix v = u + (s1 * s2) * Matrix::identity(2);
  v *= 1.0 / denom;
  return v;
}

}  // namespace mat2

}  // namespace invforge

#endif  // INVFORGE_LINALG_HPP
