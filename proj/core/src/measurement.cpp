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

#include "usdkit/measurement.hpp"

#include <cmath>
#include <sstream>

namespace usdkit {

namespace {

// First component with magnitude above threshold is rotated to the positive
// real axis; fixes the global phase of subspace vectors reproducibly.
Vector sign_convention(Vector v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-12) {
            Complex phase = v(i) / std::abs(v(i));
            v /= phase;
            break;
        }
    }
    return v;
}

// Unit vector in span{a, b} orthogonal to `a` (Gram-Schmidt of b against a).
Vector perp_in_span(const Vector &a, const Vector &b) {
    Vector w = b - a.dot(b) * a;
    double n = w.norm();
    if (n < 1e-12) throw ConstraintError("degenerate subspace: vectors are parallel");
    return sign_convention(w / n);
}

// Phase factor aligning <v|target> onto the positive real axis.
Complex alignment_phase(const Vector &v, const Vector &target) {
    Complex ip = v.dot(target);
    if (std::abs(ip) < 1e-14) return Complex(1.0, 0.0);
    return ip / std::abs(ip);
}

struct PairPieces {
    Vector perp_of_first;  // in span, orthogonal to x1 (appears in element 2)
    Vector perp_of_second; // orthogonal to x2 (appears in element 1)
    Vector e1, e2;         // orthonormal basis of the span
};

PairPieces decompose(const SubspacePair &p) {
    PairPieces out;
    out.e1 = p.first / p.first.norm();
    out.e2 = perp_in_span(out.e1, p.second);
    out.perp_of_first = perp_in_span(p.first, p.second);
    out.perp_of_second = perp_in_span(p.second, p.first);
    return out;
}

void check_box(double q, double lo, const char *name) {
    if (q < lo - 1e-12 || q > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "schedule: " << name << " = " << q << " outside [" << lo << ", 1]";
        throw ConstraintError(os.str());
    }
}

} // namespace

MeasurementSchedule MeasurementSchedule::symmetric(double ov, double ov_tilde, double t,
                                                   double t_tilde) {
    MeasurementSchedule s;
    s.q1 = s.q2 = ov / t;
    s.q1_tilde = s.q2_tilde = ov_tilde / t_tilde;
    s.t = t;
    s.t_tilde = t_tilde;
    return s;
}

MeasurementSchedule MeasurementSchedule::from_q1(double ov, double ov_tilde, double q1,
                                                 double q1_tilde, double t, double t_tilde) {
    MeasurementSchedule s;
    s.q1 = q1;
    s.q2 = (ov * ov) / (t * t) / q1;
    s.q1_tilde = q1_tilde;
    s.q2_tilde = (ov_tilde * ov_tilde) / (t_tilde * t_tilde) / q1_tilde;
    s.t = t;
    s.t_tilde = t_tilde;
    return s;
}

void MeasurementSchedule::validate_for(double ov, double ov_tilde, double tol) const {
    if (!(t > 0.0 && t <= 1.0) || !(t_tilde > 0.0 && t_tilde <= 1.0))
        throw ConstraintError("schedule: post-measurement overlaps t, t_tilde must lie in (0,1]");
    double lo = ov * ov / (t * t);
    double lo_t = ov_tilde * ov_tilde / (t_tilde * t_tilde);
    if (lo > 1.0 + 1e-12 || lo_t > 1.0 + 1e-12)
        throw ConstraintError("schedule: t below the targeted overlap makes the q-interval empty");
    check_box(q1, lo, "q1");
    check_box(q2, lo, "q2");
    check_box(q1_tilde, lo_t, "q1_tilde");
    check_box(q2_tilde, lo_t, "q2_tilde");
    if (std::abs(q1 * q2 - lo) > tol) {
        std::ostringstream os;
        os << "schedule: q1*q2 = " << q1 * q2 << " must equal ov^2/t^2 = " << lo;
        throw ConstraintError(os.str());
    }
    if (std::abs(q1_tilde * q2_tilde - lo_t) > tol) {
        std::ostringstream os;
        os << "schedule: q1~*q2~ = " << q1_tilde * q2_tilde << " must equal ov~^2/t~^2 = " << lo_t;
        throw ConstraintError(os.str());
    }
}

ObserverMeasurement build_usd_measurement(const SubspacePair &main,
                                          const std::optional<SubspacePair> &tilde,
                                          const MeasurementSchedule &sched) {
    sched.validate_for(main.overlap, tilde ? tilde->overlap : sched.t_tilde);

    Eigen::Index dim = main.first.size();
    double ov = main.overlap;
    double c1 = (1.0 - sched.q1) / (1.0 - ov * ov);
    double c2 = (1.0 - sched.q2) / (1.0 - ov * ov);
    double a1 = sched.q1 / (1.0 - ov * ov);
    double a2 = sched.q2 / (1.0 - ov * ov);

    PairPieces mp = decompose(main);

    ObserverMeasurement out;
    out.schedule = sched;
    out.w1 = mp.e1;
    out.w2 = sched.t * mp.e1 + std::sqrt(1.0 - sched.t * sched.t) * mp.e2;

    // Dyad directions with phases aligned so the Kraus cross terms contract
    // to the inconclusive element (requires <u1|x1> > 0, <u2|x2> > 0).
    Vector u1 = alignment_phase(mp.perp_of_second, main.first) * mp.perp_of_second;
    Vector u2 = alignment_phase(mp.perp_of_first, main.second) * mp.perp_of_first;

    Matrix m1 = c1 * (mp.perp_of_second * mp.perp_of_second.adjoint());
    Matrix m2 = c2 * (mp.perp_of_first * mp.perp_of_first.adjoint());
    out.k1 = std::sqrt(c1) * (out.w1 * u1.adjoint());
    out.k2 = std::sqrt(c2) * (out.w2 * u2.adjoint());
    out.k0 = std::sqrt(a1) * (out.w1 * u1.adjoint()) + std::sqrt(a2) * (out.w2 * u2.adjoint());

    if (tilde) {
        double ovt = tilde->overlap;
        double c1t = (1.0 - sched.q1_tilde) / (1.0 - ovt * ovt);
        double c2t = (1.0 - sched.q2_tilde) / (1.0 - ovt * ovt);
        double a1t = sched.q1_tilde / (1.0 - ovt * ovt);
        double a2t = sched.q2_tilde / (1.0 - ovt * ovt);
        PairPieces tp = decompose(*tilde);
        out.wt1 = tp.e1;
        out.wt2 = sched.t_tilde * tp.e1 + std::sqrt(1.0 - sched.t_tilde * sched.t_tilde) * tp.e2;
        Vector ut1 = alignment_phase(tp.perp_of_second, tilde->first) * tp.perp_of_second;
        Vector ut2 = alignment_phase(tp.perp_of_first, tilde->second) * tp.perp_of_first;
        m1 += c1t * (tp.perp_of_second * tp.perp_of_second.adjoint());
        m2 += c2t * (tp.perp_of_first * tp.perp_of_first.adjoint());
        out.k1 += std::sqrt(c1t) * (out.wt1 * ut1.adjoint());
        out.k2 += std::sqrt(c2t) * (out.wt2 * ut2.adjoint());
        out.k0 += std::sqrt(a1t) * (out.wt1 * ut1.adjoint()) + std::sqrt(a2t) * (out.wt2 * ut2.adjoint());
    } else {
        out.wt1 = Vector::Zero(dim);
        out.wt2 = Vector::Zero(dim);
        // Keep the inconclusive element acting as identity outside the span.
    }

    out.povm.m1 = m1;
    out.povm.m2 = m2;
    out.povm.m0 = Matrix::Identity(dim, dim) - m1 - m2;
    return out;
}

ObserverMeasurement alice_measurement(const EnsemblePair &ens, const MeasurementSchedule &sched) {
    SubspacePair main{ens.r1, ens.r2, ens.params.s};
    SubspacePair tilde{ens.rt1, ens.rt2, ens.params.s_tilde};
    ObserverMeasurement m = build_usd_measurement(main, tilde, sched);
    m.povm.party = Party::First;
    m.povm.target1 = ens.rho1.matrix();
    m.povm.target2 = ens.rho2.matrix();
    return m;
}

PovmSet alice_povm(const EnsemblePair &ens, const MeasurementSchedule &sched) {
    return alice_measurement(ens, sched).povm;
}

std::array<Matrix, 3> alice_kraus(const EnsemblePair &ens, const MeasurementSchedule &sched) {
    ObserverMeasurement m = alice_measurement(ens, sched);
    return {m.k0, m.k1, m.k2};
}

Matrix embed(const Matrix &local, Party party, Eigen::Index dim_a, Eigen::Index dim_b) {
    switch (party) {
        case Party::First: return kron(local, Matrix::Identity(dim_b, dim_b));
        case Party::Second: return kron(Matrix::Identity(dim_a, dim_a), local);
        case Party::Joint: return local;
    }
    throw ValidationError("embed: unknown party");
}

PostMeasurePair apply_alice_failure(const EnsemblePair &ens, const ObserverMeasurement &alice) {
    Eigen::Index da = ens.dim_a, db = ens.dim_b;
    Matrix k0 = embed(alice.k0, Party::First, da, db);

    PostMeasurePair post;
    post.t = alice.schedule.t;
    post.t_tilde = alice.schedule.t_tilde;
    post.w1 = alice.w1;
    post.w2 = alice.w2;
    post.wt1 = alice.wt1;
    post.wt2 = alice.wt2;

    auto roll = [&](const Matrix &rho, double r, double q, double qt) {
        Matrix m = k0 * rho * k0.adjoint();
        double tr = m.trace().real();
        if (tr <= 1e-15) throw ConstraintError("apply_alice_failure: vanishing failure probability");
        return std::make_pair(QuantumOperator::state(Matrix(m / tr)), q * r / (q * r + qt * (1.0 - r)));
    };
    auto [s1, v1] = roll(ens.rho1.matrix(), ens.params.r1, alice.schedule.q1, alice.schedule.q1_tilde);
    auto [s2, v2] = roll(ens.rho2.matrix(), ens.params.r2, alice.schedule.q2, alice.schedule.q2_tilde);
    post.sigma1 = s1;
    post.sigma2 = s2;
    post.v1 = v1;
    post.v2 = v2;
    return post;
}

ObserverMeasurement bob_measurement(const EnsemblePair &ens, const MeasurementSchedule &sched,
                                    const PostMeasurePair *post) {
    if (ens.params.epsilon)
        throw ValidationError("bob_measurement: epsilon embedding requires the Gram-inverse construction");
    SubspacePair main{ens.r1p, ens.r2p, ens.params.s_prime};
    SubspacePair tilde{ens.rt1p, ens.rt2p, ens.params.s_tilde_prime};
    ObserverMeasurement m = build_usd_measurement(main, tilde, sched);
    m.povm.party = Party::Second;
    if (post) {
        m.povm.target1 = post->sigma1.matrix();
        m.povm.target2 = post->sigma2.matrix();
    } else {
        m.povm.target1 = ens.rho1.matrix();
        m.povm.target2 = ens.rho2.matrix();
    }
    return m;
}

PovmSet bob_povm(const EnsemblePair &ens, const MeasurementSchedule &sched,
                 const PostMeasurePair *post) {
    return bob_measurement(ens, sched, post).povm;
}

ObserverMeasurement charlie_measurement(const PostMeasurePair &post,
                                        const MeasurementSchedule &sched) {
    if (post.t >= 1.0 - 1e-14 || post.t_tilde >= 1.0 - 1e-14)
        throw ConstraintError("charlie_measurement: degenerate at t = 1 (no information left)");
    SubspacePair main{post.w1, post.w2, post.t};
    SubspacePair tilde{post.wt1, post.wt2, post.t_tilde};
    ObserverMeasurement m = build_usd_measurement(main, tilde, sched);
    m.povm.party = Party::First;
    m.povm.target1 = post.sigma1.matrix();
    m.povm.target2 = post.sigma2.matrix();
    return m;
}

PovmSet charlie_povm(const PostMeasurePair &post, const MeasurementSchedule &sched) {
    return charlie_measurement(post, sched).povm;
}

ObserverMeasurement global_measurement(const EnsemblePair &ens, const MeasurementSchedule &sched) {
    SubspacePair main{kron(ens.r1, ens.r1p), kron(ens.r2, ens.r2p), ens.params.s0()};
    SubspacePair tilde{kron(ens.rt1, ens.rt1p), kron(ens.rt2, ens.rt2p), ens.params.s0_tilde()};
    ObserverMeasurement m = build_usd_measurement(main, tilde, sched);
    m.povm.party = Party::Joint;
    m.povm.target1 = ens.rho1.matrix();
    m.povm.target2 = ens.rho2.matrix();
    return m;
}

ObserverMeasurement global_pure_measurement(const PurePair &pure, const MeasurementSchedule &sched) {
    double ov = std::abs(pure.overlap);
    // Align psi2's phase so the pair overlap is real positive.
    Vector psi2 = pure.psi2;
    Complex ip = pure.psi1.dot(psi2);
    if (std::abs(ip) > 1e-14) psi2 *= std::abs(ip) / ip;
    SubspacePair main{pure.psi1, psi2, ov};
    ObserverMeasurement m = build_usd_measurement(main, std::nullopt, sched);
    m.povm.party = Party::Joint;
    m.povm.target1 = pure.rho1.matrix();
    m.povm.target2 = pure.rho2.matrix();
    return m;
}

PovmSet bob_povm_general(const Matrix &gram, const std::vector<Vector> &bob_vectors,
                         const std::array<double, 4> &c_params) {
    if (bob_vectors.size() != 4)
        throw ValidationError("bob_povm_general: expected the four second-side vectors");
    if (gram.rows() != 4 || gram.cols() != 4)
        throw ValidationError("bob_povm_general: expected a 4x4 Gram matrix");
    for (double c : c_params)
        if (!(c > 0.0 && c < 1.0))
            throw ConstraintError("bob_povm_general: c parameters must lie strictly in (0,1)");
    if (min_eigenvalue(gram, 1e-9) <= 1e-12)
        throw ConstraintError("bob_povm_general: singular Gram matrix (vectors linearly dependent)");

    Matrix ginv = gram.inverse();
    Eigen::Index dim = bob_vectors.front().size();

    // Column k of G^{-1} contracted against the basis gives the dual vector
    // orthogonal to every basis vector but the k-th.
    auto dual = [&](Eigen::Index col) {
        Vector w = Vector::Zero(dim);
        for (Eigen::Index k = 0; k < 4; ++k) w += ginv(k, col) * bob_vectors[static_cast<size_t>(k)];
        double n = w.norm();
        if (n < 1e-12) throw ConstraintError("bob_povm_general: degenerate dual vector");
        return Vector(w / n);
    };
    Vector alpha1 = dual(0), alpha1t = dual(1), alpha2 = dual(2), alpha2t = dual(3);

    PovmSet set;
    set.party = Party::Second;
    set.m1 = c_params[0] * (alpha1 * alpha1.adjoint()) + c_params[1] * (alpha1t * alpha1t.adjoint());
    set.m2 = c_params[2] * (alpha2 * alpha2.adjoint()) + c_params[3] * (alpha2t * alpha2t.adjoint());
    set.m0 = Matrix::Identity(dim, dim) - set.m1 - set.m2;
    if (!is_psd(set.m0, kDefaultTol.psd))
        throw ConstraintError("bob_povm_general: inconclusive element not PSD for the given c parameters");
    return set;
}

void check_povm(const PovmSet &set, double psd_tol, double eq_tol) {
    Matrix sum = set.m1 + set.m2 + set.m0;
    Matrix id = Matrix::Identity(sum.rows(), sum.cols());
    if ((sum - id).cwiseAbs().maxCoeff() > eq_tol)
        throw ConstraintError("check_povm: elements do not sum to identity");
    for (const Matrix *m : {&set.m1, &set.m2, &set.m0})
        if (!is_psd(*m, psd_tol)) throw ConstraintError("check_povm: element not PSD");
    if (set.target1.size() > 0 && set.target2.size() > 0) {
        Eigen::Index joint = set.target1.rows();
        Eigen::Index local = set.m1.rows();
        Eigen::Index other = (set.party == Party::Joint) ? 1 : joint / local;
        Eigen::Index da = (set.party == Party::Second) ? other : local;
        Eigen::Index db = (set.party == Party::Second) ? local : other;
        Matrix m1 = embed(set.m1, set.party, da, db);
        Matrix m2 = embed(set.m2, set.party, da, db);
        double u12 = (set.target2 * m1).trace().real();
        double u21 = (set.target1 * m2).trace().real();
        if (std::abs(u12) > psd_tol || std::abs(u21) > psd_tol)
            throw ConstraintError("check_povm: nonzero misidentification trace");
    }
}

} // namespace usdkit
