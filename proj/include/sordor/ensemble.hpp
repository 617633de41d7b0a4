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

#ifndef SORDOR_ENSEMBLE_HPP
#define SORDOR_ENSEMBLE_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "sordor/types.hpp"

namespace sordor {

// Discrete ensemble of two-level systems: resonance offsets linearly spaced
// over [-pi*Omega, +pi*Omega] rad/s for a bandwidth Omega in Hz.
struct EnsembleSpec {
  double bandwidth_hz = 0.0;        // Omega
  double bandwidth_factor = 0.0;    // b = Omega * T
  std::vector<double> offsets;      // omega_k, rad/s

  int member_count() const { return static_cast<int>(offsets.size()); }
};

// Default member count for a bandwidth factor b.
inline int default_member_count(double b) {
  return 1 + static_cast<int>(std::ceil(10.0 * b));
}

inline EnsembleSpec build_ensemble(double b, double bandwidth_hz,
                                   std::optional<int> k_override = std::nullopt) {
  require(b > 0.0 && std::isfinite(b), "build_ensemble: b must be positive");
  require(bandwidth_hz > 0.0 && std::isfinite(bandwidth_hz),
          "build_ensemble: bandwidth must be positive");
  const int k = k_override ? *k_override : default_member_count(b);
  require(k >= 2, "build_ensemble: member count must be at least 2");

  EnsembleSpec spec;
  spec.bandwidth_hz = bandwidth_hz;
  spec.bandwidth_factor = b;
  spec.offsets.resize(k);
  const double edge = kPi * bandwidth_hz;
  for (int i = 0; i < k; ++i) {
    // Symmetric form keeps omega_{K-1-i} == -omega_i exactly.
    spec.offsets[i] = edge * (2.0 * i - (k - 1)) / (k - 1);
  }
  return spec;
}

// Degenerate single-member ensemble (used for on-resonance checks).
inline EnsembleSpec single_member_ensemble(double offset, double b, double bandwidth_hz) {
  EnsembleSpec spec;
  spec.bandwidth_hz = bandwidth_hz;
  spec.bandwidth_factor = b;
  spec.offsets = {offset};
  return spec;
}

// Dimensionless pulse parametrisation. The bandwidth factor b = Omega*T and
// scaling factor s = beta/(A*T) characterise a pulse independently of the
// system-specific bandwidth, amplitude and duration.
struct ScalingParams {
  double rotation_angle = 0.0;   // beta, rad
  double duration = 0.0;         // T, s
  double amplitude = 0.0;        // A, rad/s
  int slice_count = 0;           // N
  double dt = 0.0;               // T / N, s
  double scaling_factor = 0.0;   // s = beta / (A T)
  double bandwidth_factor = 0.0; // b
  double bandwidth_hz = 0.0;     // Omega
  bool slice_count_rounded = false;  // true when 50 b was not integral
};

// Fixes s = 2 beta / (pi b), which makes the amplitude A = pi Omega / 2
// independent of both b and beta. N = 50 b slices, rounded to nearest.
inline ScalingParams scaling_from_bandwidth(double b, double beta, double bandwidth_hz) {
  require(b > 0.0 && beta > 0.0 && bandwidth_hz > 0.0,
          "scaling_from_bandwidth: b, beta, bandwidth must be positive");
  ScalingParams p;
  p.bandwidth_factor = b;
  p.bandwidth_hz = bandwidth_hz;
  p.rotation_angle = beta;
  p.duration = b / bandwidth_hz;
  p.scaling_factor = 2.0 * beta / (kPi * b);
  p.amplitude = beta / (p.scaling_factor * p.duration);
  const double n_raw = 50.0 * b;
  p.slice_count = static_cast<int>(std::lround(n_raw));
  require(p.slice_count >= 1, "scaling_from_bandwidth: b too small for any slice");
  p.slice_count_rounded = std::abs(n_raw - p.slice_count) > 1e-9;
  p.dt = p.duration / p.slice_count;
  return p;
}

}  // namespace sordor

#endif  // SORDOR_ENSEMBLE_HPP
