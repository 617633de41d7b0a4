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

#ifndef SORDOR_STEP_HPP
#define SORDOR_STEP_HPP

#include "sordor/expm.hpp"
#include "sordor/types.hpp"

namespace sordor {

// Slice propagator P = exp(-i L dt).
inline Matrix4c step_propagator(const Matrix4c& liouvillian, double dt) {
  require(dt >= 0.0, "step_propagator: negative dt");
  return expm<Matrix4c>(-kImag * dt * liouvillian);
}

// Propagator and its directional derivative from one exponentiation of the
// block-triangular matrix
//     exp(-i [[L, D], [0, L]] dt) = [[P, dP/dD], [0, P]].
// The (1,2) block is d/de exp(-i (L + e D) dt) at e = 0.
struct StepWithDerivative {
  Matrix4c propagator;
  Matrix4c derivative;
};

inline StepWithDerivative van_loan_derivative(const Matrix4c& liouvillian,
                                              const Matrix4c& direction,
                                              double dt) {
  require(dt >= 0.0, "van_loan_derivative: negative dt");
  Matrix8c block = Matrix8c::Zero();
  block.block<4, 4>(0, 0) = liouvillian;
  block.block<4, 4>(4, 4) = liouvillian;
  block.block<4, 4>(0, 4) = direction;
  const Matrix8c e = expm<Matrix8c>(-kImag * dt * block);
  return {e.block<4, 4>(0, 0), e.block<4, 4>(0, 4)};
}

// Slice propagator with derivatives in two directions (typically the
// commutation superoperators of sigma_x and sigma_y).
struct StepDerivatives {
  Matrix4c propagator;
  Matrix4c d_dx;
  Matrix4c d_dy;
};

inline StepDerivatives step_with_derivatives(const Matrix4c& liouvillian,
                                             const Matrix4c& dx,
                                             const Matrix4c& dy,
                                             double dt) {
  require(dt >= 0.0, "step_with_derivatives: negative dt");
  const StepWithDerivative ax = van_loan_derivative(liouvillian, dx, dt);
  const StepWithDerivative ay = van_loan_derivative(liouvillian, dy, dt);
  return {ax.propagator, ax.derivative, ay.derivative};
}

}  // namespace sordor

#endif  // SORDOR_STEP_HPP
