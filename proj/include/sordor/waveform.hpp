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

#ifndef SORDOR_WAVEFORM_HPP
#define SORDOR_WAVEFORM_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sordor/ensemble.hpp"
#include "sordor/types.hpp"

namespace sordor {

// Constant-amplitude, phase-modulated control pulse. Phases are unbounded
// reals; wrapping is a display concern only.
struct PulseWaveform {
  std::vector<double> phases;     // rad, one per slice
  double amplitude = 0.0;         // A, rad/s
  double dt = 0.0;                // slice length, s
  // Problem metadata carried for reporting and target reconstruction.
  double bandwidth_factor = 0.0;  // b
  double q = 0.0;                 // Q
  double rotation_angle = 0.0;    // beta, rad
  double bandwidth_hz = 0.0;      // Omega

  int slice_count() const { return static_cast<int>(phases.size()); }
  double duration() const { return dt * slice_count(); }
};

inline PulseWaveform make_waveform(const ScalingParams& scaling, double q,
                                   std::vector<double> phases) {
  require(static_cast<int>(phases.size()) == scaling.slice_count,
          "make_waveform: phase count does not match slice count");
  PulseWaveform w;
  w.phases = std::move(phases);
  w.amplitude = scaling.amplitude;
  w.dt = scaling.dt;
  w.bandwidth_factor = scaling.bandwidth_factor;
  w.q = q;
  w.rotation_angle = scaling.rotation_angle;
  w.bandwidth_hz = scaling.bandwidth_hz;
  return w;
}

// Uniform double in [-1, 1), bit-reproducible across platforms (the raw
// engine output is mapped directly, avoiding std::uniform_real_distribution).
inline double uniform_pm1(std::mt19937_64& rng) {
  return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
}

// Reference chirp phase at time t measured from the pulse start:
//   phi(t) = pi * Omega_c * T * (t/T - 1/2)^2,  Omega_c = A / (2 pi).
// The amplitude expressed in Hz fixes the chirp bandwidth; see README for the
// units convention.
inline double chirp_omega_c_hz(double amplitude) { return amplitude / (2.0 * kPi); }

inline double chirp_reference_phase(double t, double duration, double amplitude) {
  const double u = t / duration - 0.5;
  return kPi * chirp_omega_c_hz(amplitude) * duration * u * u;
}

// Quadratic (chirp-like) initial guess with an optional small uniform random
// perturbation. Phases are evaluated at slice midpoints.
inline PulseWaveform initial_waveform(const ScalingParams& scaling, double q,
                                      std::uint64_t seed, double perturbation = 0.1) {
  std::vector<double> phases(scaling.slice_count);
  std::mt19937_64 rng(seed);
  for (int n = 0; n < scaling.slice_count; ++n) {
    const double t = (n + 0.5) * scaling.dt;
    phases[n] = chirp_reference_phase(t, scaling.duration, scaling.amplitude);
    if (perturbation > 0.0) phases[n] += perturbation * uniform_pm1(rng);
  }
  return make_waveform(scaling, q, std::move(phases));
}

// Remove 2 pi jumps so successive differences lie in (-pi, pi].
inline std::vector<double> unwrap_phases(const std::vector<double>& phases) {
  std::vector<double> out(phases.size());
  if (phases.empty()) return out;
  out[0] = phases[0];
  double shift = 0.0;
  for (size_t i = 1; i < phases.size(); ++i) {
    double d = phases[i] - phases[i - 1];
    shift -= 2.0 * kPi * std::floor((d + kPi) / (2.0 * kPi));
    out[i] = phases[i] + shift;
  }
  return out;
}

// Linear interpolation of the unwrapped phases onto a new slice grid; sample
// positions are slice midpoints mapped proportionally. Amplitude and timing
// come from the destination scaling.
inline PulseWaveform resample_waveform(const PulseWaveform& w, int n_new,
                                       const ScalingParams& scaling_new) {
  require(n_new >= 2, "resample_waveform: need at least 2 slices");
  require(n_new == scaling_new.slice_count,
          "resample_waveform: slice count disagrees with scaling");
  const std::vector<double> src = unwrap_phases(w.phases);
  const int n_src = static_cast<int>(src.size());
  std::vector<double> phases(n_new);
  for (int m = 0; m < n_new; ++m) {
    // Midpoint (m + 1/2)/n_new expressed in source sample coordinates.
    const double x = (m + 0.5) * static_cast<double>(n_src) / n_new - 0.5;
    if (x <= 0.0) {
      phases[m] = src.front();
    } else if (x >= n_src - 1) {
      phases[m] = src.back();
    } else {
      const int i = static_cast<int>(std::floor(x));
      const double f = x - i;
      phases[m] = (1.0 - f) * src[i] + f * src[i + 1];
    }
  }
  PulseWaveform out = make_waveform(scaling_new, w.q, std::move(phases));
  return out;
}

// Shift every phase sample; the realised rotation axis rotates by the same
// angle in the transverse plane.
inline PulseWaveform phase_shift_pulse(const PulseWaveform& w, double shift) {
  PulseWaveform out = w;
  for (double& p : out.phases) p += shift;
  return out;
}

// Unwrapped pulse phase minus the reference chirp parabola, per slice
// (evaluated at slice midpoints).
inline std::vector<double> chirp_residual(const PulseWaveform& w) {
  std::vector<double> res = unwrap_phases(w.phases);
  const double duration = w.duration();
  for (int n = 0; n < w.slice_count(); ++n) {
    const double t = (n + 0.5) * w.dt;
    res[n] -= chirp_reference_phase(t, duration, w.amplitude);
  }
  return res;
}

}  // namespace sordor

#endif  // SORDOR_WAVEFORM_HPP
