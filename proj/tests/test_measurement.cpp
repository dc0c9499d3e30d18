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

#include "usdkit/measurement.hpp"
#include "usdkit/montecarlo.hpp"

using namespace usdkit;

namespace {

EnsembleParams base_params() {
    EnsembleParams p;
    p.r1 = 0.6;
    p.r2 = 0.7;
    p.s = 0.5;
    p.s_tilde = 0.4;
    p.s_prime = 0.45;
    p.s_tilde_prime = 0.35;
    return p;
}

double kraus_residual(const ObserverMeasurement &m) {
    double r = 0.0;
    r = std::max(r, (m.k1.adjoint() * m.k1 - m.povm.m1).cwiseAbs().maxCoeff());
    r = std::max(r, (m.k2.adjoint() * m.k2 - m.povm.m2).cwiseAbs().maxCoeff());
    r = std::max(r, (m.k0.adjoint() * m.k0 - m.povm.m0).cwiseAbs().maxCoeff());
    return r;
}

} // namespace

TEST_CASE("schedule constraint validation") {
    MeasurementSchedule bad;
    bad.q1 = 0.5;
    bad.q2 = 0.3; // product 0.15 != 0.25
    bad.q1_tilde = bad.q2_tilde = 0.4;
    CHECK_THROWS_AS(bad.validate_for(0.5, 0.4), ConstraintError);

    // q below the floor (product would need a partner above 1).
    CHECK_THROWS_AS(MeasurementSchedule::from_q1(0.5, 0.4, 0.2, 0.4).validate_for(0.5, 0.4),
                    ConstraintError);

    CHECK_NOTHROW(MeasurementSchedule::symmetric(0.5, 0.4).validate_for(0.5, 0.4));
    CHECK_NOTHROW(MeasurementSchedule::from_q1(0.5, 0.4, 0.7, 0.9).validate_for(0.5, 0.4));
}

TEST_CASE("optimal symmetric first-side measurement saturates the PSD boundary") {
    EnsembleParams p = base_params();
    EnsemblePair ens = build_mixed_pair(p);
    ObserverMeasurement m = alice_measurement(ens, MeasurementSchedule::symmetric(p.s, p.s_tilde));
    CHECK_NOTHROW(check_povm(m.povm));
    // The inconclusive element touches zero on both blocks.
    CHECK(std::abs(min_eigenvalue(m.povm.m0)) < 1e-12);
    CHECK(kraus_residual(m) < 1e-12);
}

TEST_CASE("no-measurement limit: q = 1 gives M1 = M2 = 0") {
    EnsembleParams p = base_params();
    EnsemblePair ens = build_mixed_pair(p);
    MeasurementSchedule sched;
    sched.q1 = sched.q2 = 1.0;
    sched.q1_tilde = sched.q2_tilde = 1.0;
    sched.t = p.s;
    sched.t_tilde = p.s_tilde;
    ObserverMeasurement m = alice_measurement(ens, sched);
    CHECK(m.povm.m1.cwiseAbs().maxCoeff() < 1e-14);
    CHECK(m.povm.m2.cwiseAbs().maxCoeff() < 1e-14);
    CHECK((m.povm.m0 - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("infeasible q-product is rejected") {
    EnsembleParams p = base_params();
    EnsemblePair ens = build_mixed_pair(p);
    MeasurementSchedule sched;
    sched.q1 = 0.3;
    sched.q2 = 0.3; // 0.09 < s^2 = 0.25
    sched.q1_tilde = sched.q2_tilde = 0.4;
    CHECK_THROWS_AS(alice_measurement(ens, sched), ConstraintError);
}

TEST_CASE("povm and kraus invariants hold over random schedules") {
    SplitMix64 rng(41);
    for (int it = 0; it < 100; ++it) {
        EnsembleParams p = random_valid_params(rng);
        EnsemblePair ens = build_mixed_pair(p);
        double t = rng.uniform(p.s + 1e-3, 1.0);
        double tt = rng.uniform(p.s_tilde + 1e-3, 1.0);
        MeasurementSchedule sched = random_schedule(rng, p.s, p.s_tilde, t, tt);
        ObserverMeasurement m = alice_measurement(ens, sched);
        CHECK_NOTHROW(check_povm(m.povm));
        CHECK(kraus_residual(m) < 1e-12);
    }
}

TEST_CASE("post-measurement pair reproduces the spectral weights and overlaps") {
    EnsembleParams p = base_params();
    EnsemblePair ens = build_mixed_pair(p);
    double t = 0.8, tt = 0.9;
    MeasurementSchedule sched = MeasurementSchedule::symmetric(p.s, p.s_tilde, t, tt);
    ObserverMeasurement m = alice_measurement(ens, sched);
    PostMeasurePair post = apply_alice_failure(ens, m);

    double q = p.s / t, qt = p.s_tilde / tt;
    double expected_v1 = q * p.r1 / (q * p.r1 + qt * p.r1_tilde());
    CHECK(post.v1 == doctest::Approx(expected_v1).epsilon(1e-12));
    CHECK(std::abs(post.w1.dot(post.w2).real() - t) < 1e-12);
    CHECK(std::abs(post.wt1.dot(post.wt2).real() - tt) < 1e-12);
    CHECK(std::abs(post.w1.dot(post.wt2)) < 1e-13);

    // sigma_i decomposes over the post basis with the stated weights.
    Matrix direct = expected_v1 * kron(Matrix(post.w1 * post.w1.adjoint()), Matrix(ens.r1p * ens.r1p.adjoint())) +
                    (1.0 - expected_v1) * kron(Matrix(post.wt1 * post.wt1.adjoint()),
                                               Matrix(ens.rt1p * ens.rt1p.adjoint()));
    CHECK((post.sigma1.matrix() - direct).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("pure limit post state has v = 1") {
    EnsembleParams p = base_params();
    p.r1 = p.r2 = 1.0;
    EnsemblePair ens = build_mixed_pair(p);
    MeasurementSchedule sched = MeasurementSchedule::symmetric(p.s, p.s_tilde, 0.9, 0.9);
    PostMeasurePair post = apply_alice_failure(ens, alice_measurement(ens, sched));
    CHECK(post.v1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(post.v2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(purity(post.sigma1.matrix()) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("t = 1 gives identical post-measurement support vectors") {
    EnsembleParams p = base_params();
    EnsemblePair ens = build_mixed_pair(p);
    MeasurementSchedule sched = MeasurementSchedule::symmetric(p.s, p.s_tilde);
    PostMeasurePair post = apply_alice_failure(ens, alice_measurement(ens, sched));
    CHECK((post.w1 - post.w2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("second-side measurement invariants against the post-failure states") {
    EnsembleParams p = base_params();
    EnsemblePair ens = build_mixed_pair(p);
    MeasurementSchedule a = MeasurementSchedule::symmetric(p.s, p.s_tilde, 0.85, 0.8);
    PostMeasurePair post = apply_alice_failure(ens, alice_measurement(ens, a));

    SUBCASE("symmetric schedule") {
        MeasurementSchedule b = MeasurementSchedule::symmetric(p.s_prime, p.s_tilde_prime);
        ObserverMeasurement m = bob_measurement(ens, b, &post);
        CHECK_NOTHROW(check_povm(m.povm));
        CHECK(kraus_residual(m) < 1e-12);
    }
    SUBCASE("one-state branch: q1 = 1 removes the main-block conclusive-1 component") {
        MeasurementSchedule b = MeasurementSchedule::from_q1(p.s_prime, p.s_tilde_prime, 1.0, 0.9);
        ObserverMeasurement m = bob_measurement(ens, b, &post);
        CHECK_NOTHROW(check_povm(m.povm));
        // The conclusive-1 element annihilates the main block entirely.
        CHECK(std::abs(ens.r1p.dot(m.povm.m1 * ens.r1p)) < 1e-13);
        CHECK(std::abs(ens.r2p.dot(m.povm.m1 * ens.r2p)) < 1e-13);
    }
    SUBCASE("product mismatch is rejected") {
        MeasurementSchedule b;
        b.q1 = 0.9;
        b.q2 = 0.9; // != s'^2
        b.q1_tilde = b.q2_tilde = p.s_tilde_prime;
        CHECK_THROWS_AS(bob_measurement(ens, b, &post), ConstraintError);
    }
}

TEST_CASE("same-particle follow-up measurement") {
    EnsembleParams p = base_params();
    EnsemblePair ens = build_mixed_pair(p);
    double t = 0.8, tt = 0.75;
    MeasurementSchedule a = MeasurementSchedule::symmetric(p.s, p.s_tilde, t, tt);
    PostMeasurePair post = apply_alice_failure(ens, alice_measurement(ens, a));

    SUBCASE("optimal symmetric choice saturates the boundary") {
        MeasurementSchedule c = MeasurementSchedule::symmetric(t, tt);
        ObserverMeasurement m = charlie_measurement(post, c);
        CHECK_NOTHROW(check_povm(m.povm));
        CHECK(std::abs(min_eigenvalue(m.povm.m0)) < 1e-12);
        CHECK(kraus_residual(m) < 1e-12);
    }
    SUBCASE("q1 = 1 leaves only the tilde block in the conclusive-1 element") {
        MeasurementSchedule c = MeasurementSchedule::from_q1(t, tt, 1.0, 0.9);
        ObserverMeasurement m = charlie_measurement(post, c);
        CHECK(std::abs(post.w1.dot(m.povm.m1 * post.w1)) < 1e-13);
        CHECK(post.wt1.dot(m.povm.m1 * post.wt1).real() > 1e-6);
    }
    SUBCASE("degenerate at t = 1") {
        MeasurementSchedule a1 = MeasurementSchedule::symmetric(p.s, p.s_tilde);
        PostMeasurePair post1 = apply_alice_failure(ens, alice_measurement(ens, a1));
        CHECK_THROWS_AS(charlie_measurement(post1, MeasurementSchedule::symmetric(1.0, 1.0)),
                        ConstraintError);
    }
}

TEST_CASE("gram-inverse construction reduces to the orthogonal one at eps -> 0") {
    EnsembleParams p;
    p.s = 0.5;
    p.s_tilde = 0.5;
    p.s_prime = 0.5;
    p.s_tilde_prime = 0.5;
    p.r1 = p.r2 = 0.6;

    EnsemblePair plain = build_mixed_pair(p);
    // c values matching a valid (non-boundary) schedule.
    double c_main = 0.45, c_tilde = 0.45;
    std::array<double, 4> c{c_main, c_tilde, c_main, c_tilde};
    PovmSet general = bob_povm_general(gram_matrix(bob_vector_order(plain)),
                                       bob_vector_order(plain), c);

    // Equivalent direct construction: q = 1 - c (1 - ov^2), and for the
    // symmetric q the product constraint fixes t = ov/q1.
    MeasurementSchedule direct;
    direct.q1 = direct.q2 = 1.0 - c_main * (1.0 - p.s_prime * p.s_prime);
    direct.q1_tilde = direct.q2_tilde = 1.0 - c_tilde * (1.0 - p.s_tilde_prime * p.s_tilde_prime);
    direct.t = p.s_prime / direct.q1;
    direct.t_tilde = p.s_tilde_prime / direct.q1_tilde;
    PovmSet reference = bob_povm(plain, direct);

    CHECK((general.m1 - reference.m1).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((general.m2 - reference.m2).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((general.m0 - reference.m0).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("gram-inverse construction is unambiguous at eps > 0") {
    EnsembleParams p;
    p.s = 0.5;
    p.s_tilde = 0.5;
    p.s_prime = 0.5;
    p.s_tilde_prime = 0.5;
    p.r1 = p.r2 = 0.6;
    p.epsilon = 0.3;
    EnsemblePair ens = build_epsilon_pair(p);
    std::array<double, 4> c{0.45, 0.45, 0.45, 0.45};
    PovmSet set = bob_povm_general(gram_matrix(bob_vector_order(ens)), bob_vector_order(ens), c);

    // Misidentification amplitudes vanish on the opposing support vectors.
    CHECK(std::abs(ens.r2p.dot(set.m1 * ens.r2p)) < 1e-10);
    CHECK(std::abs(ens.rt2p.dot(set.m1 * ens.rt2p)) < 1e-10);
    CHECK(std::abs(ens.r1p.dot(set.m2 * ens.r1p)) < 1e-10);
    CHECK(std::abs(ens.rt1p.dot(set.m2 * ens.rt1p)) < 1e-10);
    CHECK(is_psd(set.m0));
}

TEST_CASE("gram-inverse construction rejects bad inputs") {
    EnsembleParams p;
    p.epsilon = 0.3;
    EnsemblePair ens = build_epsilon_pair(p);
    std::vector<Vector> dup = bob_vector_order(ens);
    dup[2] = dup[0]; // duplicate vector: singular Gram
    CHECK_THROWS_AS(bob_povm_general(gram_matrix(dup), dup, {0.4, 0.4, 0.4, 0.4}),
                    ConstraintError);

    // Boundary-exceeding c: inconclusive element dips negative.
    std::vector<Vector> ok = bob_vector_order(ens);
    CHECK_THROWS_AS(bob_povm_general(gram_matrix(ok), ok, {0.9, 0.9, 0.9, 0.9}), ConstraintError);
}
