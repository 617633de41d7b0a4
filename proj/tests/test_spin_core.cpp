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

#include <limits>
#include <random>

#include "sordor/expm.hpp"
#include "sordor/pauli.hpp"
#include "sordor/step.hpp"
#include "test_util.hpp"

using namespace sordor;
using namespace sordor::testutil;

TEST_CASE("member_hamiltonian matches its defining form", "[spin-core]") {
  REQUIRE(max_abs_diff<Matrix2c>(member_hamiltonian(0.0, 0.0, 0.0), Matrix2c::Zero()) == 0.0);

  const Matrix2c h = member_hamiltonian(0.0, 1.0, 2.0);
  REQUIRE(max_abs_diff<Matrix2c>(h, 2.0 * pauli_z() + pauli_x()) < 1e-15);

  const Matrix2c hy = member_hamiltonian(kPi / 2.0, 1.0, 0.0);
  REQUIRE(max_abs_diff<Matrix2c>(hy, pauli_y()) < 1e-15);

  SECTION("Hermitian for random arguments") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
      const Matrix2c m =
          member_hamiltonian(runif(rng, -10, 10), runif(rng, 0, 1e5), runif(rng, -1e5, 1e5));
      REQUIRE(is_hermitian(m));
    }
  }

  SECTION("non-finite input rejected") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    REQUIRE_THROWS_AS(member_hamiltonian(nan, 1.0, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(member_hamiltonian(0.0, inf, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(member_hamiltonian(0.0, 1.0, -inf), std::invalid_argument);
  }
}

TEST_CASE("commutation superoperator realises vec(H rho - rho H)", "[spin-core]") {
  REQUIRE(max_abs_diff<Matrix4c>(commutation_superoperator(Matrix2c::Zero()),
                                 Matrix4c::Zero()) == 0.0);

  SECTION("sigma_z acting on sigma_x gives 2i sigma_y") {
    const Matrix4c l = commutation_superoperator(pauli_z());
    const Vector4c lhs = l * vec2(pauli_x());
    const Vector4c rhs = vec2((2.0 * kImag * pauli_y()).eval());
    REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }

  SECTION("commutator oracle on 100 random pairs") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
      const Matrix2c h = random_hermitian2(rng);
      const Matrix2c rho = random_complex2(rng);
      const Matrix4c l = commutation_superoperator(h);
      const Vector4c lhs = l * vec2(rho);
      const Vector4c rhs = vec2((h * rho - rho * h).eval());
      REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SECTION("Hermitian H gives Hermitian L") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 20; ++i) {
      const Matrix4c l = commutation_superoperator(random_hermitian2(rng));
      REQUIRE((l - l.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SECTION("non-Hermitian input rejected") {
    Matrix2c bad;
    bad << 0, 1, 0, 0;
    REQUIRE_THROWS_AS(commutation_superoperator(bad), std::invalid_argument);
  }
}

TEST_CASE("expm handles the closed-form cases", "[spin-core]") {
  REQUIRE(max_abs_diff<Matrix4c>(expm<Matrix4c>(Matrix4c::Zero()), Matrix4c::Identity()) <
          1e-15);

  SECTION("diagonal matrices exponentiate entrywise") {
    Matrix4c d = Matrix4c::Zero();
    d(0, 0) = cplx(0.3, -1.2);
    d(1, 1) = cplx(-2.0, 0.4);
    d(2, 2) = cplx(1.5, 2.0);
    d(3, 3) = cplx(0.0, -3.0);
    const Matrix4c e = expm<Matrix4c>(d);
    for (int i = 0; i < 4; ++i) {
      REQUIRE(std::abs(e(i, i) - std::exp(d(i, i))) < 1e-12 * std::abs(std::exp(d(i, i))));
      for (int j = 0; j < 4; ++j)
        if (i != j) REQUIRE(std::abs(e(i, j)) < 1e-14);
    }
  }

  SECTION("nilpotent with M^2 = 0 truncates to I + M") {
    Matrix4c m = Matrix4c::Zero();
    m(0, 2) = cplx(1.5, -0.5);
    m(0, 3) = cplx(-2.0, 1.0);
    m(1, 2) = cplx(0.25, 0.75);
    m(1, 3) = cplx(3.0, 0.0);
    REQUIRE((m * m).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(max_abs_diff<Matrix4c>(expm<Matrix4c>(m), Matrix4c::Identity() + m) < 1e-14);
  }

  SECTION("large-norm argument still accurate through scaling") {
    // Anti-Hermitian with norm ~1e3: result must stay unitary to 1e-10.
    std::mt19937_64 rng(17);
    const Matrix4c l = random_hermitian4(rng, 250.0);
    const Matrix4c p = expm<Matrix4c>((-kImag * l).eval());
    REQUIRE(max_abs_diff<Matrix4c>(p.adjoint() * p, Matrix4c::Identity()) < 1e-10);
  }

  SECTION("non-finite entries rejected") {
    Matrix4c m = Matrix4c::Zero();
    m(1, 2) = std::numeric_limits<double>::quiet_NaN();
    REQUIRE_THROWS_AS(expm<Matrix4c>(m), std::invalid_argument);
  }
}

TEST_CASE("propagators are unitary and compose", "[spin-core]") {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 25; ++i) {
    const Matrix4c l = commutation_superoperator(random_hermitian2(rng, 1e4));
    const double dt = std::pow(10.0, runif(rng, -6.0, -4.0));
    const Matrix4c p = step_propagator(l, dt);
    REQUIRE(max_abs_diff<Matrix4c>(p.adjoint() * p, Matrix4c::Identity()) < 1e-10);
    const Matrix4c p2 = step_propagator(l, 2.0 * dt);
    REQUIRE(max_abs_diff<Matrix4c>(p2, p * p) < 1e-10);
  }
}

TEST_CASE("block-triangular exponential yields directional derivatives", "[spin-core]") {
  SECTION("dt = 0 gives identity and zero derivatives") {
    const Matrix4c d = commutation_superoperator(pauli_x());
    const StepDerivatives s = step_with_derivatives(Matrix4c::Zero(), d, d, 0.0);
    REQUIRE(max_abs_diff<Matrix4c>(s.propagator, Matrix4c::Identity()) < 1e-15);
    REQUIRE(s.d_dx.cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE(s.d_dy.cwiseAbs().maxCoeff() < 1e-15);
  }

  SECTION("L = 0 truncates the series: derivative = -i dt D") {
    const Matrix4c dx = commutation_superoperator(pauli_x());
    const Matrix4c dy = commutation_superoperator(pauli_y());
    const double dt = 0.37;
    const StepDerivatives s = step_with_derivatives(Matrix4c::Zero(), dx, dy, dt);
    REQUIRE(max_abs_diff<Matrix4c>(s.d_dx, (-kImag * dt * dx).eval()) < 1e-13);
    REQUIRE(max_abs_diff<Matrix4c>(s.d_dy, (-kImag * dt * dy).eval()) < 1e-13);
    REQUIRE(max_abs_diff<Matrix4c>(s.propagator, Matrix4c::Identity()) < 1e-13);
  }

  SECTION("matches central finite differences on random instances") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 50; ++i) {
      const Matrix4c l = commutation_superoperator(random_hermitian2(rng, 1e4));
      const Matrix4c d = commutation_superoperator(random_hermitian2(rng, 1e4));
      const double dt = (i % 3 == 0) ? 1e-6 : std::pow(10.0, runif(rng, -6.0, -4.5));
      const StepWithDerivative s = van_loan_derivative(l, d, dt);
      const double eps = 1e-5;
      const Matrix4c plus = step_propagator((l + eps * d).eval(), dt);
      const Matrix4c minus = step_propagator((l - eps * d).eval(), dt);
      const Matrix4c fd = (plus - minus) / (2.0 * eps);
      const double scale = std::max(fd.cwiseAbs().maxCoeff(), 1e-300);
      REQUIRE(max_abs_diff<Matrix4c>(s.derivative, fd) / scale < 1e-6);
    }
  }

  SECTION("propagator block agrees with the direct exponential") {
    std::mt19937_64 rng(29);
    const Matrix4c l = commutation_superoperator(random_hermitian2(rng, 1e3));
    const Matrix4c d = commutation_superoperator(pauli_y());
    const StepWithDerivative s = van_loan_derivative(l, d, 1e-4);
    REQUIRE(max_abs_diff<Matrix4c>(s.propagator, step_propagator(l, 1e-4)) < 1e-12);
  }

  SECTION("negative dt rejected") {
    const Matrix4c d = commutation_superoperator(pauli_x());
    REQUIRE_THROWS_AS(step_with_derivatives(Matrix4c::Zero(), d, d, -1.0),
                      std::invalid_argument);
  }
}
