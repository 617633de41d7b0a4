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

#ifndef SORDOR_SEQUENCE_HPP
#define SORDOR_SEQUENCE_HPP

#include <cmath>
#include <string>
#include <vector>

#include "sordor/grape.hpp"
#include "sordor/pauli.hpp"
#include "sordor/targets.hpp"
#include "sordor/types.hpp"
#include "sordor/waveform.hpp"

namespace sordor {

struct BlochState {
  double x = 0.0, y = 0.0, z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline BlochState bloch_x() { return {1.0, 0.0, 0.0}; }
inline BlochState bloch_y() { return {0.0, 1.0, 0.0}; }
inline BlochState bloch_z() { return {0.0, 0.0, 1.0}; }

// One entry of a pulse sequence: a pulse, an axis phase shift applied
// uniformly to all its phase samples, and a flag selecting the pulse's ideal
// rotation target instead of the optimised waveform.
struct SequencePulse {
  PulseWaveform pulse;
  double axis_shift = 0.0;  // rad
  bool ideal = false;
};

struct SequenceSpec {
  std::vector<SequencePulse> pulses;
};

struct SequencePropagators {
  std::vector<Matrix4c> per_offset;   // composed over the whole sequence
  std::vector<std::string> warnings;
};

// Full-pulse superoperator per ensemble member, concatenated over the
// sequence in time order. Inter-pulse delays are zero.
inline SequencePropagators sequence_propagators(const SequenceSpec& sequence,
                                                const EnsembleSpec& ensemble) {
  require(!sequence.pulses.empty(), "sequence_propagators: empty sequence");
  SequencePropagators out;
  out.per_offset.assign(ensemble.member_count(), Matrix4c::Identity());
  for (const SequencePulse& entry : sequence.pulses) {
    const PulseWaveform& p = entry.pulse;
    if (std::abs(p.bandwidth_hz - ensemble.bandwidth_hz) >
        1e-9 * std::max(p.bandwidth_hz, ensemble.bandwidth_hz)) {
      out.warnings.push_back("pulse bandwidth " + std::to_string(p.bandwidth_hz) +
                             " Hz does not match ensemble bandwidth " +
                             std::to_string(ensemble.bandwidth_hz) + " Hz");
    }
    if (entry.ideal) {
      // Ideal rotation targets at the pulse's own (Q, beta), axis-shifted.
      EnsembleSpec shifted = ensemble;
      shifted.bandwidth_factor = p.bandwidth_factor;
      const TargetSet targets =
          build_targets(shifted, p.q, p.rotation_angle, entry.axis_shift);
      for (int k = 0; k < ensemble.member_count(); ++k) {
        out.per_offset[k] = targets.rotations[k] * out.per_offset[k];
      }
    } else {
      const PulseWaveform shifted = phase_shift_pulse(p, entry.axis_shift);
      parallel_for(ensemble.member_count(), [&](int k) {
        Matrix4c u = Matrix4c::Identity();
        for (int j = 0; j < shifted.slice_count(); ++j) {
          const Matrix4c liou = slice_liouvillian(shifted.phases[j], shifted.amplitude,
                                                  ensemble.offsets[k]);
          u = step_propagator(liou, shifted.dt) * u;
        }
        out.per_offset[k] = u * out.per_offset[k];
      });
    }
  }
  return out;
}

inline Vector4c bloch_to_density_vec(const BlochState& s) {
  const Matrix2c rho = 0.5 * (Matrix2c::Identity() + s.x * pauli_x() +
                              s.y * pauli_y() + s.z * pauli_z());
  return vec2(rho);
}

inline BlochState density_vec_to_bloch(const Vector4c& v) {
  const Matrix2c rho = unvec2(v);
  BlochState s;
  s.x = (pauli_x() * rho).trace().real();
  s.y = (pauli_y() * rho).trace().real();
  s.z = (pauli_z() * rho).trace().real();
  return s;
}

struct BlochTrajectory {
  std::vector<BlochState> final_states;  // one per offset
  std::vector<std::string> warnings;
};

inline BlochTrajectory bloch_trajectory(const SequenceSpec& sequence,
                                        const BlochState& initial,
                                        const EnsembleSpec& ensemble) {
  const SequencePropagators props = sequence_propagators(sequence, ensemble);
  BlochTrajectory out;
  out.warnings = props.warnings;
  out.final_states.resize(ensemble.member_count());
  const Vector4c rho0 = bloch_to_density_vec(initial);
  for (int k = 0; k < ensemble.member_count(); ++k) {
    out.final_states[k] = density_vec_to_bloch(props.per_offset[k] * rho0);
  }
  return out;
}

// Full time-resolved Bloch path: one sample per slice of every non-ideal
// pulse (ideal targets act as a single instantaneous map over the pulse
// duration), plus the initial state at t = 0.
struct TimeResolvedTrajectory {
  std::vector<double> times;                     // s, shared across offsets
  std::vector<std::vector<BlochState>> states;   // [offset][time sample]
  std::vector<std::string> warnings;
};

inline TimeResolvedTrajectory bloch_path(const SequenceSpec& sequence,
                                         const BlochState& initial,
                                         const EnsembleSpec& ensemble) {
  require(!sequence.pulses.empty(), "bloch_path: empty sequence");
  TimeResolvedTrajectory out;
  out.times.push_back(0.0);
  for (const SequencePulse& entry : sequence.pulses) {
    if (entry.ideal) {
      out.times.push_back(out.times.back() + entry.pulse.duration());
    } else {
      for (int j = 0; j < entry.pulse.slice_count(); ++j) {
        out.times.push_back(out.times.back() + entry.pulse.dt);
      }
    }
  }
  const int k_count = ensemble.member_count();
  out.states.assign(k_count, {});
  std::vector<std::string> warnings;
  parallel_for(k_count, [&](int k) {
    std::vector<BlochState>& path = out.states[k];
    path.reserve(out.times.size());
    Vector4c rho = bloch_to_density_vec(initial);
    path.push_back(density_vec_to_bloch(rho));
    for (const SequencePulse& entry : sequence.pulses) {
      if (entry.ideal) {
        EnsembleSpec shifted = ensemble;
        shifted.bandwidth_factor = entry.pulse.bandwidth_factor;
        const TargetSet targets = build_targets(shifted, entry.pulse.q,
                                                entry.pulse.rotation_angle, entry.axis_shift);
        rho = targets.rotations[k] * rho;
        path.push_back(density_vec_to_bloch(rho));
      } else {
        const PulseWaveform shifted = phase_shift_pulse(entry.pulse, entry.axis_shift);
        for (int j = 0; j < shifted.slice_count(); ++j) {
          const Matrix4c liou = slice_liouvillian(shifted.phases[j], shifted.amplitude,
                                                  ensemble.offsets[k]);
          rho = step_propagator(liou, shifted.dt) * rho;
          path.push_back(density_vec_to_bloch(rho));
        }
      }
    }
  });
  // Same mismatch policy as sequence_propagators: warn, never fail.
  for (const SequencePulse& entry : sequence.pulses) {
    const PulseWaveform& p = entry.pulse;
    if (std::abs(p.bandwidth_hz - ensemble.bandwidth_hz) >
        1e-9 * std::max(p.bandwidth_hz, ensemble.bandwidth_hz)) {
      out.warnings.push_back("pulse bandwidth " + std::to_string(p.bandwidth_hz) +
                             " Hz does not match ensemble bandwidth " +
                             std::to_string(ensemble.bandwidth_hz) + " Hz");
    }
  }
  return out;
}

struct SequenceFidelity {
  double total = 0.0;
  std::vector<double> per_member;
};

// Scores the composed actual sequence against the composed ideal sequence
// with the same per-member overlap normalisation as single-pulse fidelity.
inline SequenceFidelity sequence_fidelity(const SequenceSpec& actual,
                                          const SequenceSpec& ideal,
                                          const EnsembleSpec& ensemble) {
  require(actual.pulses.size() == ideal.pulses.size(),
          "sequence_fidelity: sequences differ in length");
  const SequencePropagators ua = sequence_propagators(actual, ensemble);
  const SequencePropagators ur = sequence_propagators(ideal, ensemble);
  SequenceFidelity out;
  out.per_member.resize(ensemble.member_count());
  for (int k = 0; k < ensemble.member_count(); ++k) {
    out.per_member[k] = member_fidelity(ur.per_offset[k], ua.per_offset[k]);
    out.total += out.per_member[k];
  }
  out.total /= static_cast<double>(ensemble.member_count());
  return out;
}

}  // namespace sordor

#endif  // SORDOR_SEQUENCE_HPP
