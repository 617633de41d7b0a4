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

#ifndef SORDOR_GRAPE_HPP
#define SORDOR_GRAPE_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "sordor/ensemble.hpp"
#include "sordor/parallel.hpp"
#include "sordor/pauli.hpp"
#include "sordor/step.hpp"
#include "sordor/targets.hpp"
#include "sordor/types.hpp"
#include "sordor/waveform.hpp"

namespace sordor {

// Slice generator of the Bloch rotation. The spin operators carry half the
// Pauli matrices, so a constant pulse nutates through the Bloch angle A*T.
inline Matrix4c slice_liouvillian(double phase, double amplitude, double offset) {
  return 0.5 * commutation_superoperator(member_hamiltonian(phase, amplitude, offset));
}

// Derivative of the slice generator with respect to its phase.
inline Matrix4c slice_liouvillian_dphase(double phase, double amplitude) {
  static const Matrix4c cx = commutation_superoperator(pauli_x());
  static const Matrix4c cy = commutation_superoperator(pauli_y());
  return 0.5 * amplitude * (std::cos(phase) * cy - std::sin(phase) * cx);
}

// Per-member step propagators and effective propagators:
//   forward[n] = P_n ... P_1          (forward[0] = identity)
//   backward[n] = P_{n+1}^dag ... P_N^dag R   (backward[N] = R)
// forward[N] is the full-pulse propagator.
struct MemberChain {
  std::vector<Matrix4c> steps;     // P_1 .. P_N (0-indexed)
  std::vector<Matrix4c> forward;   // U_0 .. U_N
  std::vector<Matrix4c> backward;  // V_0 .. V_N
};

struct PropagatorCache {
  std::vector<MemberChain> members;

  const Matrix4c& final_propagator(int k) const { return members[k].forward.back(); }
};

inline void check_dimensions(const EnsembleSpec& ensemble, const TargetSet& targets,
                             const PulseWaveform& waveform) {
  require(waveform.slice_count() >= 1, "waveform must have at least one slice");
  require(ensemble.member_count() == targets.member_count(),
          "ensemble and target member counts disagree");
}

inline PropagatorCache propagate(const PulseWaveform& waveform,
                                 const EnsembleSpec& ensemble,
                                 const TargetSet& targets) {
  check_dimensions(ensemble, targets, waveform);
  const int n = waveform.slice_count();
  const int k_count = ensemble.member_count();

  PropagatorCache cache;
  cache.members.resize(k_count);
  parallel_for(k_count, [&](int k) {
    MemberChain& chain = cache.members[k];
    chain.steps.resize(n);
    chain.forward.resize(n + 1);
    chain.backward.resize(n + 1);
    chain.forward[0] = Matrix4c::Identity();
    for (int j = 0; j < n; ++j) {
      const Matrix4c liou =
          slice_liouvillian(waveform.phases[j], waveform.amplitude, ensemble.offsets[k]);
      chain.steps[j] = step_propagator(liou, waveform.dt);
      chain.forward[j + 1] = chain.steps[j] * chain.forward[j];
    }
    chain.backward[n] = targets.rotations[k];
    for (int j = n; j-- > 0;) {
      chain.backward[j] = chain.steps[j].adjoint() * chain.backward[j + 1];
    }
  });
  return cache;
}

// Per-member overlap Re<R|U>/4 = |tr(u^dag r)|^2 / 4 for conjugation
// superoperators; insensitive to global phase, in [0, 1] up to roundoff.
// Returned unclamped: the optimizer needs the smooth value near F = 1.
inline double member_fidelity(const Matrix4c& target, const Matrix4c& achieved) {
  return 0.25 * (target.adjoint() * achieved).trace().real();
}

struct FidelityReport {
  double total = 0.0;                    // ensemble mean
  std::vector<double> per_member;        // f_k
  std::optional<double> gradient_norm;   // set when a gradient was evaluated
};

inline FidelityReport fidelity(const PropagatorCache& cache, const TargetSet& targets) {
  require(static_cast<int>(cache.members.size()) == targets.member_count(),
          "cache and target member counts disagree");
  FidelityReport report;
  report.per_member.resize(cache.members.size());
  for (size_t k = 0; k < cache.members.size(); ++k) {
    report.per_member[k] = member_fidelity(targets.rotations[k], cache.final_propagator(k));
  }
  for (double f : report.per_member) report.total += f;
  report.total /= static_cast<double>(cache.members.size());
  return report;
}

// Fidelity and its exact gradient in one pass. Element n of the gradient is
//   (1/K) sum_k Re< V_n | dP_n/dphi_n U_{n-1} > / 4
// with the slice derivative from one block-triangular exponentiation per
// slice. Member contributions are accumulated in fixed member order so the
// result is independent of the worker count.
struct FidelityGradient {
  FidelityReport report;
  std::vector<double> gradient;
};

inline FidelityGradient fidelity_and_gradient(const PulseWaveform& waveform,
                                              const EnsembleSpec& ensemble,
                                              const TargetSet& targets) {
  check_dimensions(ensemble, targets, waveform);
  const int n = waveform.slice_count();
  const int k_count = ensemble.member_count();

  std::vector<double> member_f(k_count);
  std::vector<std::vector<double>> member_grad(k_count);

  parallel_for(k_count, [&](int k) {
    const double offset = ensemble.offsets[k];
    std::vector<Matrix4c> steps(n);
    std::vector<Matrix4c> deriv_fwd(n);  // dP_j/dphi_j * U_j
    Matrix4c u = Matrix4c::Identity();
    for (int j = 0; j < n; ++j) {
      const Matrix4c liou = slice_liouvillian(waveform.phases[j], waveform.amplitude, offset);
      const Matrix4c dir = slice_liouvillian_dphase(waveform.phases[j], waveform.amplitude);
      const StepWithDerivative step = van_loan_derivative(liou, dir, waveform.dt);
      steps[j] = step.propagator;
      deriv_fwd[j] = step.derivative * u;
      u = step.propagator * u;
    }
    member_f[k] = member_fidelity(targets.rotations[k], u);

    std::vector<double>& grad = member_grad[k];
    grad.resize(n);
    Matrix4c v = targets.rotations[k];  // V_N
    for (int j = n; j-- > 0;) {
      grad[j] = 0.25 * (v.adjoint() * deriv_fwd[j]).trace().real();
      v = steps[j].adjoint() * v;
    }
  });

  FidelityGradient out;
  out.report.per_member = member_f;
  out.gradient.assign(n, 0.0);
  for (int k = 0; k < k_count; ++k) {
    out.report.total += member_f[k];
    for (int j = 0; j < n; ++j) out.gradient[j] += member_grad[k][j];
  }
  out.report.total /= static_cast<double>(k_count);
  double norm_sq = 0.0;
  for (int j = 0; j < n; ++j) {
    out.gradient[j] /= static_cast<double>(k_count);
    norm_sq += out.gradient[j] * out.gradient[j];
  }
  out.report.gradient_norm = std::sqrt(norm_sq);
  return out;
}

inline std::vector<double> gradient(const PulseWaveform& waveform,
                                    const EnsembleSpec& ensemble,
                                    const TargetSet& targets) {
  return fidelity_and_gradient(waveform, ensemble, targets).gradient;
}

}  // namespace sordor

#endif  // SORDOR_GRAPE_HPP
