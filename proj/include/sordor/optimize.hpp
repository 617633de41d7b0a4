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

#ifndef SORDOR_OPTIMIZE_HPP
#define SORDOR_OPTIMIZE_HPP

#include <cmath>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "sordor/grape.hpp"
#include "sordor/types.hpp"

namespace sordor {

// Gradient-norm acceptance threshold as a function of the bandwidth factor:
// min(1e-4, 10^(-5 (210/583 + b/36))). The second branch takes over near
// b = 15.83.
inline double convergence_tolerance(double b) {
  require(b > 0.0, "convergence_tolerance: b must be positive");
  return std::min(1e-4, std::pow(10.0, -5.0 * (210.0 / 583.0 + b / 36.0)));
}

struct OptimizerSettings {
  int memory = 20;                    // stored gradient pairs
  int max_iterations = 2000;
  std::optional<double> tolerance;    // default: convergence_tolerance(b)
  double wolfe_c1 = 1e-4;             // sufficient-increase constant
  double wolfe_c2 = 0.9;              // curvature constant
  int max_line_search_evals = 30;
};

enum class OptimizeStatus { converged, iteration_cap, line_search_failure };

inline std::string to_string(OptimizeStatus s) {
  switch (s) {
    case OptimizeStatus::converged: return "converged";
    case OptimizeStatus::iteration_cap: return "iteration_cap";
    default: return "line_search_failure";
  }
}

inline OptimizeStatus optimize_status_from_string(const std::string& s) {
  if (s == "converged") return OptimizeStatus::converged;
  if (s == "iteration_cap") return OptimizeStatus::iteration_cap;
  if (s == "line_search_failure") return OptimizeStatus::line_search_failure;
  throw std::invalid_argument("unknown optimizer status: " + s);
}

struct IterationRecord {
  double fidelity = 0.0;
  double gradient_norm = 0.0;
};

struct OptimizeResult {
  PulseWaveform waveform;
  FidelityReport report;                 // at the returned waveform
  std::vector<IterationRecord> trace;    // accepted iterates, initial included
  long gradient_evaluations = 0;
  int iterations = 0;
  OptimizeStatus status = OptimizeStatus::converged;
  double tolerance_used = 0.0;
};

namespace detail {

// State for one objective evaluation of the internal minimisation of -F.
struct Eval {
  double f = 0.0;                // -fidelity
  Eigen::VectorXd grad;          // of -fidelity
  FidelityReport report;
};

class NegativeFidelity {
 public:
  NegativeFidelity(const PulseWaveform& prototype, const EnsembleSpec& ensemble,
                   const TargetSet& targets)
      : waveform_(prototype), ensemble_(ensemble), targets_(targets) {}

  Eval operator()(const Eigen::VectorXd& x) {
    for (int i = 0; i < x.size(); ++i) waveform_.phases[i] = x[i];
    FidelityGradient fg = fidelity_and_gradient(waveform_, ensemble_, targets_);
    ++count_;
    Eval e;
    e.f = -fg.report.total;
    e.grad = -Eigen::Map<const Eigen::VectorXd>(fg.gradient.data(), fg.gradient.size());
    e.report = std::move(fg.report);
    return e;
  }

  long count() const { return count_; }

 private:
  PulseWaveform waveform_;
  const EnsembleSpec& ensemble_;
  const TargetSet& targets_;
  long count_ = 0;
};

// Cubic minimiser of the interpolant through (a, fa, ga) and (b, fb, gb),
// safeguarded into the interior of [a, b].
inline double cubic_step(double a, double fa, double ga, double b, double fb, double gb) {
  const double d1 = ga + gb - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - ga * gb;
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    double step = b - (b - a) * (gb + d2 - d1) / (gb - ga + 2.0 * d2);
    const double lo = std::min(a, b), hi = std::max(a, b);
    const double margin = 0.1 * (hi - lo);
    if (std::isfinite(step) && step > lo + margin && step < hi - margin) return step;
  }
  return 0.5 * (a + b);
}

}  // namespace detail

// Limited-memory quasi-Newton ascent on the fidelity with a strong-Wolfe
// line search. The line search enforces monotone fidelity along accepted
// iterates; on failure the best-so-far point is returned with a status flag.
inline OptimizeResult optimize(const PulseWaveform& initial, const EnsembleSpec& ensemble,
                               const TargetSet& targets,
                               const OptimizerSettings& settings = {}) {
  require(settings.memory >= 1 && settings.max_iterations >= 0,
          "optimize: invalid settings");
  const double tol =
      settings.tolerance ? *settings.tolerance
                         : convergence_tolerance(initial.bandwidth_factor);

  detail::NegativeFidelity objective(initial, ensemble, targets);
  const int n = initial.slice_count();
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(initial.phases.data(), n);

  detail::Eval cur = objective(x);
  OptimizeResult result;
  result.tolerance_used = tol;
  result.trace.push_back({-cur.f, cur.grad.norm()});
  result.status = OptimizeStatus::iteration_cap;

  struct Pair {
    Eigen::VectorXd s, y;
    double rho;
  };
  std::deque<Pair> pairs;

  auto finish = [&](OptimizeStatus status) {
    result.status = status;
    result.gradient_evaluations = objective.count();
    PulseWaveform w = initial;
    w.phases.assign(x.data(), x.data() + n);
    result.waveform = std::move(w);
    result.report = cur.report;
    result.report.gradient_norm = cur.grad.norm();
    return result;
  };

  if (cur.grad.norm() <= tol) return finish(OptimizeStatus::converged);

  for (int iter = 0; iter < settings.max_iterations; ++iter) {
    // Two-loop recursion for the search direction.
    Eigen::VectorXd d = -cur.grad;
    std::vector<double> alpha_store(pairs.size());
    for (int i = static_cast<int>(pairs.size()) - 1; i >= 0; --i) {
      alpha_store[i] = pairs[i].rho * pairs[i].s.dot(d);
      d -= alpha_store[i] * pairs[i].y;
    }
    if (!pairs.empty()) {
      const Pair& last = pairs.back();
      d *= last.s.dot(last.y) / last.y.squaredNorm();
    }
    for (size_t i = 0; i < pairs.size(); ++i) {
      const double beta = pairs[i].rho * pairs[i].y.dot(d);
      d += (alpha_store[i] - beta) * pairs[i].s;
    }
    double dg = d.dot(cur.grad);
    if (!(dg < 0.0)) {  // not a descent direction; restart from steepest descent
      pairs.clear();
      d = -cur.grad;
      dg = d.dot(cur.grad);
    }

    // Strong-Wolfe line search (bracket then zoom, cubic interpolation).
    const double phi0 = cur.f;
    const double dphi0 = dg;
    const double c1 = settings.wolfe_c1, c2 = settings.wolfe_c2;
    double alpha = pairs.empty() ? std::min(1.0, 1.0 / std::max(1e-12, cur.grad.norm()))
                                 : 1.0;
    double alpha_prev = 0.0, phi_prev = phi0, dphi_prev = dphi0;
    int evals = 0;
    bool accepted = false;
    detail::Eval trial;
    double lo = 0.0, hi = 0.0, phi_lo = phi0, dphi_lo = dphi0, phi_hi = 0.0, dphi_hi = 0.0;
    bool bracketed = false;

    while (evals < settings.max_line_search_evals) {
      trial = objective(x + alpha * d);
      ++evals;
      const double phi = trial.f;
      const double dphi = trial.grad.dot(d);
      if (phi > phi0 + c1 * alpha * dphi0 || (evals > 1 && phi >= phi_prev)) {
        lo = alpha_prev; phi_lo = phi_prev; dphi_lo = dphi_prev;
        hi = alpha; phi_hi = phi; dphi_hi = dphi;
        bracketed = true;
        break;
      }
      if (std::abs(dphi) <= -c2 * dphi0) {
        accepted = true;
        break;
      }
      if (dphi >= 0.0) {
        lo = alpha; phi_lo = phi; dphi_lo = dphi;
        hi = alpha_prev; phi_hi = phi_prev; dphi_hi = dphi_prev;
        bracketed = true;
        break;
      }
      alpha_prev = alpha; phi_prev = phi; dphi_prev = dphi;
      alpha *= 2.0;
      if (alpha > 1e8) break;
    }

    if (bracketed && !accepted) {
      while (evals < settings.max_line_search_evals) {
        alpha = detail::cubic_step(lo, phi_lo, dphi_lo, hi, phi_hi, dphi_hi);
        trial = objective(x + alpha * d);
        ++evals;
        const double phi = trial.f;
        const double dphi = trial.grad.dot(d);
        if (phi > phi0 + c1 * alpha * dphi0 || phi >= phi_lo) {
          hi = alpha; phi_hi = phi; dphi_hi = dphi;
        } else {
          if (std::abs(dphi) <= -c2 * dphi0) {
            accepted = true;
            break;
          }
          if (dphi * (hi - lo) >= 0.0) {
            hi = lo; phi_hi = phi_lo; dphi_hi = dphi_lo;
          }
          lo = alpha; phi_lo = phi; dphi_lo = dphi;
        }
        if (std::abs(hi - lo) <= 1e-16 * std::max(1.0, std::abs(lo))) break;
      }
      // Fall back to the best sufficient-increase point found in the bracket.
      if (!accepted && lo > 0.0 && phi_lo < phi0 + c1 * lo * dphi0) {
        alpha = lo;
        trial = objective(x + alpha * d);
        accepted = true;
      }
    }

    if (!accepted || !(trial.f < phi0)) {
      return finish(OptimizeStatus::line_search_failure);
    }

    // Curvature update; skip the pair when s.y is not safely positive.
    Eigen::VectorXd s = alpha * d;
    Eigen::VectorXd y = trial.grad - cur.grad;
    const double sy = s.dot(y);
    if (sy > 1e-10 * s.norm() * y.norm()) {
      pairs.push_back({std::move(s), std::move(y), 1.0 / sy});
      if (static_cast<int>(pairs.size()) > settings.memory) pairs.pop_front();
    }

    x += alpha * d;
    cur = std::move(trial);
    result.iterations = iter + 1;
    result.trace.push_back({-cur.f, cur.grad.norm()});
    if (cur.grad.norm() <= tol) return finish(OptimizeStatus::converged);
  }

  return finish(OptimizeStatus::iteration_cap);
}

}  // namespace sordor

#endif  // SORDOR_OPTIMIZE_HPP
