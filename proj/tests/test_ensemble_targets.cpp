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

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sordor/ensemble.hpp"
#include "sordor/targets.hpp"
#include "test_util.hpp"

using namespace sordor;
using namespace sordor::testutil;

TEST_CASE("build_ensemble produces symmetric linearly spaced offsets", "[ensemble]") {
  SECTION("default member count 1 + ceil(10 b)") {
    const EnsembleSpec e = build_ensemble(18.0, 40000.0);
    REQUIRE(e.member_count() == 181);
    REQUIRE(e.offsets.front() == Catch::Approx(-kPi * 40000.0).epsilon(1e-14));
    REQUIRE(e.offsets.back() == Catch::Approx(kPi * 40000.0).epsilon(1e-14));

    REQUIRE(build_ensemble(0.1, 40000.0).member_count() == 2);
  }

  SECTION("override to the dense validation grid") {
    const EnsembleSpec e = build_ensemble(18.0, 40000.0, 451);
    REQUIRE(e.member_count() == 451);
    REQUIRE(e.offsets[225] == 0.0);  // odd count includes resonance
    const double step = e.offsets[1] - e.offsets[0];
    for (int k = 1; k < e.member_count(); ++k) {
      REQUIRE(e.offsets[k] - e.offsets[k - 1] == Catch::Approx(step).epsilon(1e-12));
    }
  }

  SECTION("offsets mirror exactly about zero") {
    const EnsembleSpec e = build_ensemble(2.0, 40000.0);
    const int k = e.member_count();
    for (int i = 0; i < k; ++i) {
      REQUIRE(e.offsets[i] == -e.offsets[k - 1 - i]);
    }
  }

  SECTION("invalid arguments") {
    REQUIRE_THROWS_AS(build_ensemble(2.0, 40000.0, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(build_ensemble(-1.0, 40000.0), std::invalid_argument);
    REQUIRE_THROWS_AS(build_ensemble(2.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("scaling relations reproduce the reference parameters", "[ensemble]") {
  SECTION("b = 18, beta = pi, 40 kHz") {
    const ScalingParams p = scaling_from_bandwidth(18.0, kPi, 40000.0);
    REQUIRE(p.duration == Catch::Approx(450e-6).epsilon(1e-12));
    REQUIRE(p.slice_count == 900);
    REQUIRE(p.dt == Catch::Approx(0.5e-6).epsilon(1e-12));
    REQUIRE(p.amplitude == Catch::Approx(2.0 * kPi * 1e4).epsilon(1e-12));
    REQUIRE(p.scaling_factor == Catch::Approx(1.0 / 9.0).epsilon(1e-12));
    REQUIRE_FALSE(p.slice_count_rounded);
  }

  SECTION("amplitude is independent of the rotation angle") {
    const ScalingParams p1 = scaling_from_bandwidth(18.0, kPi, 40000.0);
    const ScalingParams p2 = scaling_from_bandwidth(18.0, kPi / 2.0, 40000.0);
    REQUIRE(p2.duration == p1.duration);
    REQUIRE(p2.slice_count == p1.slice_count);
    REQUIRE(p2.amplitude == Catch::Approx(p1.amplitude).epsilon(1e-14));
  }

  SECTION("b = 9 halves duration and slice count") {
    const ScalingParams p = scaling_from_bandwidth(9.0, kPi, 40000.0);
    REQUIRE(p.duration == Catch::Approx(225e-6).epsilon(1e-12));
    REQUIRE(p.slice_count == 450);
  }

  SECTION("non-integral 50 b rounds to nearest and records it") {
    const ScalingParams p = scaling_from_bandwidth(0.41, kPi, 40000.0);
    REQUIRE(p.slice_count == 21);  // 20.5 rounds away from zero
    REQUIRE(p.slice_count_rounded);
    REQUIRE(p.dt * p.slice_count == Catch::Approx(p.duration).epsilon(1e-14));
  }
}

TEST_CASE("phase dispersion is quadratic in the normalised offset", "[targets]") {
  const double omega_band = 40000.0;
  REQUIRE(phase_dispersion(0.3 * kPi * omega_band, omega_band, 18.0, 0.0) == 0.0);
  REQUIRE(phase_dispersion(0.0, omega_band, 18.0, 0.7) ==
          Catch::Approx(kPi * 18.0 * 0.7).epsilon(1e-14));
  REQUIRE(phase_dispersion(kPi * omega_band, omega_band, 18.0, 0.7) ==
          Catch::Approx(0.0).margin(1e-10));
  REQUIRE(phase_dispersion(-kPi * omega_band, omega_band, 18.0, 0.7) ==
          Catch::Approx(0.0).margin(1e-10));

  SECTION("even in the offset") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 30; ++i) {
      const double w = runif(rng, -1.0, 1.0) * kPi * omega_band;
      REQUIRE(phase_dispersion(w, omega_band, 3.0, 0.4) ==
              phase_dispersion(-w, omega_band, 3.0, 0.4));
    }
  }

  SECTION("out-of-band offset rejected") {
    REQUIRE_THROWS_AS(phase_dispersion(1.01 * kPi * omega_band, omega_band, 2.0, 0.5),
                      std::domain_error);
  }
}

TEST_CASE("target rotations are conjugation superoperators", "[targets]") {
  SECTION("beta = 0 gives the identity") {
    REQUIRE(max_abs_diff<Matrix4c>(target_rotation(0.7, 0.0), Matrix4c::Identity()) < 1e-14);
  }

  SECTION("pi rotation about x flips y and z") {
    const Matrix4c r = target_rotation(0.0, kPi);
    REQUIRE((r * vec2(pauli_x()) - vec2(pauli_x())).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE((r * vec2(pauli_y()) + vec2(pauli_y())).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE((r * vec2(pauli_z()) + vec2(pauli_z())).cwiseAbs().maxCoeff() < 1e-12);
  }

  SECTION("2 pi rotation is the identity map (global phase cancels)") {
    REQUIRE(max_abs_diff<Matrix4c>(target_rotation(0.0, 2.0 * kPi), Matrix4c::Identity()) <
            1e-12);
  }

  SECTION("conjugation oracle: R vec(rho) = vec(u rho u^dag)") {
    std::mt19937_64 rng(37);
    for (int i = 0; i < 30; ++i) {
      const double alpha = runif(rng, -60.0, 60.0);
      const double beta = runif(rng, 0.0, 2.0 * kPi);
      const Matrix4c r = target_rotation(alpha, beta);
      const Matrix2c u = rotation2(alpha, beta);
      const Matrix2c rho = random_complex2(rng);
      const Vector4c lhs = r * vec2(rho);
      const Vector4c rhs = vec2((u * rho * u.adjoint()).eval());
      REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-11);
    }
  }

  SECTION("unitarity of every target in a set") {
    const EnsembleSpec e = build_ensemble(2.0, 40000.0);
    const TargetSet t = build_targets(e, 0.63, kPi / 2.0);
    for (const Matrix4c& r : t.rotations) {
      REQUIRE(max_abs_diff<Matrix4c>(r.adjoint() * r, Matrix4c::Identity()) < 1e-10);
    }
    REQUIRE(t.alphas.front() == Catch::Approx(0.0).margin(1e-10));
    REQUIRE(t.alphas[t.alphas.size() / 2] ==
            Catch::Approx(kPi * 2.0 * 0.63).epsilon(1e-12));
  }

  SECTION("global-phase invariance of the conjugation map") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 20; ++i) {
      const Matrix2c u = rotation2(runif(rng, -3, 3), runif(rng, 0, 6));
      const cplx phase = std::exp(kImag * runif(rng, -3.0, 3.0));
      const Matrix4c a = superop_from_unitary(u);
      const Matrix4c b = superop_from_unitary((phase * u).eval());
      REQUIRE(max_abs_diff<Matrix4c>(a, b) < 1e-14);
    }
  }
}
