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

#ifndef SORDOR_TARGETS_HPP
#define SORDOR_TARGETS_HPP

#include <cmath>
#include <vector>

#include "sordor/ensemble.hpp"
#include "sordor/expm.hpp"
#include "sordor/pauli.hpp"
#include "sordor/types.hpp"

namespace sordor {

// Quadratic phase dispersion: alpha = pi b Q (1 - u^2) with the normalised
// offset u = omega / (pi Omega). Vanishes at the band edges, peaks at
// pi b Q on resonance.
inline double phase_dispersion(double offset, double bandwidth_hz, double b, double q) {
  const double edge = kPi * bandwidth_hz;
  if (std::abs(offset) > edge * (1.0 + 1e-12)) {
    throw std::domain_error("phase_dispersion: offset outside the band");
  }
  const double u = offset / edge;
  return kPi * b * q * (1.0 - u * u);
}

// Universal-rotation target for rotation angle beta about the transverse axis
// n = cos(alpha) sigma_x + sin(alpha) sigma_y. Returned as the conjugation
// superoperator exp(-i L(n) beta / 2), i.e. rho -> u rho u^dag with
// u = exp(-i n beta / 2); beta is the Bloch-sphere rotation angle.
inline Matrix4c target_rotation(double alpha, double beta) {
  const Matrix2c axis = std::cos(alpha) * pauli_x() + std::sin(alpha) * pauli_y();
  const Matrix4c gen = commutation_superoperator(axis);
  return expm<Matrix4c>(-kImag * (0.5 * beta) * gen);
}

// Per-offset rotation targets for one (Q, beta) cell.
struct TargetSet {
  double q = 0.0;
  double rotation_angle = 0.0;            // beta, rad
  std::vector<double> alphas;             // rad, one per member
  std::vector<Matrix4c> rotations;        // unitary superoperators

  int member_count() const { return static_cast<int>(rotations.size()); }
};

// Axis shift rotates every target axis by the same transverse angle; used to
// realise phase-shifted pulses (e.g. a y-axis pulse from an x-axis one).
inline TargetSet build_targets(const EnsembleSpec& ensemble, double q, double beta,
                               double axis_shift = 0.0) {
  require(q >= 0.0 && q <= 1.0, "build_targets: Q must lie in [0, 1]");
  TargetSet t;
  t.q = q;
  t.rotation_angle = beta;
  t.alphas.reserve(ensemble.offsets.size());
  t.rotations.reserve(ensemble.offsets.size());
  for (double omega : ensemble.offsets) {
    const double alpha =
        phase_dispersion(omega, ensemble.bandwidth_hz, ensemble.bandwidth_factor, q);
    t.alphas.push_back(alpha);
    t.rotations.push_back(target_rotation(alpha + axis_shift, beta));
  }
  return t;
}

}  // namespace sordor

#endif  // SORDOR_TARGETS_HPP
