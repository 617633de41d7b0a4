// Copyright 2026 The Sordor Authors
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

#ifndef SORDOR_PAULI_HPP
#define SORDOR_PAULI_HPP

#include <cmath>

#include "sordor/types.hpp"

namespace sordor {

// Pauli matrices in the computational basis.
inline Matrix2c pauli_x() {
  Matrix2c m;
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix2c pauli_y() {
  Matrix2c m;
  m << 0, -kImag, kImag, 0;
  return m;
}

inline Matrix2c pauli_z() {
  Matrix2c m;
  m << 1, 0, 0, -1;
  return m;
}

inline bool is_hermitian(const Matrix2c& h, double rel_tol = 1e-12) {
  const double scale = std::max(h.cwiseAbs().maxCoeff(), 1e-300);
  return (h - h.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

// Single-member Hamiltonian in Pauli form:
//   H = offset * sigma_z + amplitude * (cos(phase) sigma_x + sin(phase) sigma_y)
// All inputs in rad/s (phase in rad).
inline Matrix2c member_hamiltonian(double phase, double amplitude, double offset) {
  require(std::isfinite(phase) && std::isfinite(amplitude) && std::isfinite(offset),
          "member_hamiltonian: non-finite input");
  const double cx = amplitude * std::cos(phase);
  const double cy = amplitude * std::sin(phase);
  Matrix2c h;
  h << cplx(offset, 0.0), cplx(cx, -cy),
       cplx(cx, cy), cplx(-offset, 0.0);
  return h;
}

// Kronecker product of two 2x2 matrices, column-stacking convention.
inline Matrix4c kron2(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

// Commutation superoperator under column stacking: L vec(rho) = vec(H rho - rho H),
// i.e. L = I (x) H - H^T (x) I.
inline Matrix4c commutation_superoperator(const Matrix2c& h) {
  require(is_hermitian(h, 1e-9), "commutation_superoperator: H not Hermitian");
  return kron2(Matrix2c::Identity(), h) - kron2(h.transpose(), Matrix2c::Identity());
}

// Column-stacked vectorisation of a 2x2 matrix.
inline Vector4c vec2(const Matrix2c& m) {
  Vector4c v;
  v << m(0, 0), m(1, 0), m(0, 1), m(1, 1);
  return v;
}

inline Matrix2c unvec2(const Vector4c& v) {
  Matrix2c m;
  m << v(0), v(2), v(1), v(3);
  return m;
}

// Conjugation map rho -> u rho u^dagger as a 4x4 superoperator: conj(u) (x) u.
// Insensitive to the global phase of u.
inline Matrix4c superop_from_unitary(const Matrix2c& u) {
  return kron2(u.conjugate(), u);
}

}  // namespace sordor

#endif  // SORDOR_PAULI_HPP
