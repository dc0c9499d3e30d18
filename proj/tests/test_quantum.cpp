// Copyright 2026 The usdkit Authors
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

#include <doctest.h>

#include <cmath>

#include "usdkit/ensemble.hpp"
#include "usdkit/measurement.hpp"
#include "usdkit/rng.hpp"

using namespace usdkit;

namespace {

Matrix diag2(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

EnsembleParams sample_params() {
    EnsembleParams p;
    p.r1 = 0.5;
    p.r2 = 0.5;
    p.s = 0.5;
    p.s_tilde = 0.5;
    p.s_prime = 0.5;
    p.s_tilde_prime = 0.5;
    return p;
}

} // namespace

TEST_CASE("kron of identities and basis projectors") {
    Matrix i2 = Matrix::Identity(2, 2);
    CHECK((kron(i2, i2) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

    Matrix p = kron(diag2(1, 0), diag2(0, 1));
    Matrix expected = Matrix::Zero(4, 4);
    expected(1, 1) = 1.0;
    CHECK((p - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tensor of rank-1 projectors stays a rank-1 projector") {
    EnsembleParams p = sample_params();
    p.s = 0.4;
    EnsemblePair ens = build_mixed_pair(p);
    Matrix proj = kron(Matrix(ens.r1 * ens.r1.adjoint()), Matrix(ens.r1p * ens.r1p.adjoint()));
    CHECK(std::abs(proj.trace().real() - 1.0) < 1e-14);
    CHECK((proj * proj - proj).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("tensor properties: associativity and trace multiplicativity") {
    SplitMix64 rng(99);
    for (int it = 0; it < 20; ++it) {
        Matrix a = Matrix::Random(2, 2), b = Matrix::Random(2, 2), c = Matrix::Random(2, 2);
        Matrix left = kron(kron(a, b), c);
        Matrix right = kron(a, kron(b, c));
        CHECK((left - right).cwiseAbs().maxCoeff() < 1e-14);
        Complex t1 = kron(a, b).trace();
        Complex t2 = a.trace() * b.trace();
        CHECK(std::abs(t1 - t2) < 1e-13);
    }
}

TEST_CASE("kron rejects dimensions above the cap") {
    Matrix big = Matrix::Identity(32, 32);
    CHECK_THROWS_AS(kron(kron(big, Matrix::Identity(4, 4)), Matrix::Identity(4, 4)),
                    ValidationError);
}

TEST_CASE("fidelity of identical states is 1") {
    EnsemblePair ens = build_mixed_pair(sample_params());
    CHECK(fidelity(ens.rho1, ens.rho1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fidelity matches the weighted-overlap form") {
    // r1 = r2 = 0.5 and all overlaps 0.5 gives sqrt(.25)*.25 + sqrt(.25)*.25.
    EnsemblePair ens = build_mixed_pair(sample_params());
    CHECK(fidelity(ens.rho1, ens.rho2) == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("fidelity of orthogonal-support states is 0") {
    Matrix a = Matrix::Zero(4, 4), b = Matrix::Zero(4, 4);
    a(0, 0) = 1.0;
    b(2, 2) = 1.0;
    CHECK(fidelity(QuantumOperator::state(a), QuantumOperator::state(b)) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fidelity rejects non-state input") {
    Matrix id = Matrix::Identity(2, 2);
    QuantumOperator st = QuantumOperator::state(Matrix(id / 2.0));
    QuantumOperator gen = QuantumOperator::generic(id);
    CHECK_THROWS_AS(fidelity(st, gen), ValidationError);
}

TEST_CASE("fidelity equals the weighted-overlap form on random ensembles") {
    SplitMix64 rng(2024);
    for (int it = 0; it < 50; ++it) {
        EnsembleParams p;
        p.p1 = rng.uniform(0.1, 0.9);
        p.r1 = rng.uniform(0.05, 0.95);
        p.r2 = rng.uniform(0.05, 0.95);
        p.s = rng.uniform(0.1, 0.9);
        p.s_tilde = rng.uniform(0.1, 0.9);
        p.s_prime = rng.uniform(0.1, 0.9);
        p.s_tilde_prime = rng.uniform(0.1, 0.9);
        EnsemblePair ens = build_mixed_pair(p);
        double closed = std::sqrt(p.r1 * p.r2) * p.s * p.s_prime +
                        std::sqrt(p.r1_tilde() * p.r2_tilde()) * p.s_tilde * p.s_tilde_prime;
        CHECK(fidelity(ens.rho1, ens.rho2) == doctest::Approx(closed).epsilon(1e-10));
    }
}

TEST_CASE("fidelity is symmetric") {
    SplitMix64 rng(7);
    EnsembleParams p = sample_params();
    p.r1 = 0.3;
    p.r2 = 0.8;
    p.s = 0.6;
    EnsemblePair ens = build_mixed_pair(p);
    CHECK(std::abs(fidelity(ens.rho1, ens.rho2) - fidelity(ens.rho2, ens.rho1)) < 1e-12);
}

TEST_CASE("negativity: product state, balanced and r = 0.2") {
    EnsembleParams p = sample_params();

    p.r1 = p.r2 = 0.5;
    PurePair balanced = build_pure_pair(p);
    CHECK(negativity_pure(balanced.rho1, 4, 4) == doctest::Approx(1.0).epsilon(1e-10));

    p.r1 = p.r2 = 0.2;
    PurePair tilted = build_pure_pair(p);
    CHECK(negativity_pure(tilted.rho1, 4, 4) == doctest::Approx(0.8).epsilon(1e-10));

    // Product limit via an explicit separable projector.
    EnsemblePair ens = build_mixed_pair(p);
    QuantumOperator prod =
        QuantumOperator::state(kron(Matrix(ens.r1 * ens.r1.adjoint()), Matrix(ens.r1p * ens.r1p.adjoint())));
    CHECK(negativity_pure(prod, 4, 4) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("negativity matches 2 sqrt(r(1-r)) on a grid") {
    EnsembleParams p = sample_params();
    for (int k = 1; k < 100; ++k) {
        double r = k / 100.0;
        p.r1 = p.r2 = r;
        PurePair pure = build_pure_pair(p);
        CHECK(negativity_pure(pure.rho1, 4, 4) ==
              doctest::Approx(2.0 * std::sqrt(r * (1.0 - r))).epsilon(1e-10));
    }
}

TEST_CASE("negativity rejects mixed input") {
    EnsemblePair ens = build_mixed_pair(sample_params());
    CHECK_THROWS_AS(negativity_pure(ens.rho1, 4, 4), ValidationError);
}

TEST_CASE("is_psd basics") {
    CHECK(is_psd(Matrix::Identity(3, 3), 1e-10));
    CHECK_FALSE(is_psd(diag2(1.0, -1e-6), 1e-10));
    Matrix nh = Matrix::Zero(2, 2);
    nh(0, 1) = 1.0;
    CHECK_THROWS_AS(is_psd(nh, 1e-10), ValidationError);
}

TEST_CASE("is_psd on a boundary-saturating inconclusive element") {
    // q1 q2 = s^2 exactly puts the element on the PSD boundary.
    EnsembleParams p = sample_params();
    EnsemblePair ens = build_mixed_pair(p);
    MeasurementSchedule sched = MeasurementSchedule::symmetric(p.s, p.s_tilde);
    PovmSet set = alice_povm(ens, sched);
    CHECK(is_psd(set.m0, 1e-10));
    CHECK(std::abs(min_eigenvalue(set.m0)) < 1e-12);
}

TEST_CASE("state validation rejects bad inputs") {
    CHECK_THROWS_AS(QuantumOperator::state(diag2(0.7, 0.7)), ValidationError); // trace 1.4
    CHECK_THROWS_AS(QuantumOperator::state(diag2(1.5, -0.5)), ValidationError); // not PSD
    Matrix nan = diag2(1, 0);
    nan(0, 0) = std::nan("");
    CHECK_THROWS_AS(QuantumOperator::state(nan), ValidationError);
}

TEST_CASE("fidelity of pure states equals the overlap magnitude") {
    SplitMix64 rng(314);
    for (int it = 0; it < 30; ++it) {
        EnsembleParams p;
        p.r1 = rng.uniform(0.1, 0.9);
        p.r2 = rng.uniform(0.1, 0.9);
        p.s = rng.uniform(0.1, 0.9);
        p.s_tilde = rng.uniform(0.1, 0.9);
        p.s_prime = rng.uniform(0.1, 0.9);
        p.s_tilde_prime = rng.uniform(0.1, 0.9);
        p.phi1 = rng.uniform(0.0, 6.28);
        p.phi2 = rng.uniform(0.0, 6.28);
        PurePair pure = build_pure_pair(p);
        CHECK(fidelity(pure.rho1, pure.rho2) ==
              doctest::Approx(std::abs(pure.overlap)).epsilon(1e-10));
    }
}
