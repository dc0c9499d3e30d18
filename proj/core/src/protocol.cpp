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

#include "usdkit/protocol.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace usdkit {

namespace {

constexpr double kProbSlack = 1e-12;

void check_probability(double p, const char *name, const ProtocolReport &report) {
    if (p < -kProbSlack || p > 1.0 + kProbSlack) {
        std::ostringstream os;
        os << "probability out of range: " << name << " = " << p
           << " (protocol = " << report.protocol << ", p_a_fail = " << report.p_a_fail
           << ", p_b_fail = " << report.p_b_fail << ", p_f1 = " << report.p_f1
           << ", total_fail = " << report.total_fail << ")";
        throw ConstraintError(os.str());
    }
}

void finalize(ProtocolReport &r) {
    check_probability(r.p_a_success, "p_a_success", r);
    check_probability(r.p_a_fail, "p_a_fail", r);
    check_probability(r.p_f1, "p_f1", r);
    check_probability(r.p_f2, "p_f2", r);
    check_probability(r.p_b_success, "p_b_success", r);
    check_probability(r.p_b_fail, "p_b_fail", r);
    check_probability(r.total_success, "total_success", r);
    check_probability(r.total_fail, "total_fail", r);
    if (r.joint_success) check_probability(*r.joint_success, "joint_success", r);
    if (r.at_least_one) check_probability(*r.at_least_one, "at_least_one", r);
    if (r.global_total_fail) check_probability(*r.global_total_fail, "global_total_fail", r);
}

void require_equal_prior_pure(const EnsembleParams &p, const char *who) {
    if (std::abs(p.p1 - 0.5) > 1e-12)
        throw ValidationError(std::string(who) + ": only equal priors are supported");
    if (std::abs(p.r1 - 1.0) > 1e-12 || std::abs(p.r2 - 1.0) > 1e-12)
        throw ValidationError(std::string(who) + ": requires the pure limit r1 = r2 = 1");
}

} // namespace

ProtocolReport run_locc(const EnsembleParams &params, const MeasurementSchedule &alice,
                        const MeasurementSchedule &bob) {
    params.validate();
    alice.validate_for(params.s, params.s_tilde);
    bob.validate_for(params.s_prime, params.s_tilde_prime);

    double p1 = params.p1, p2 = params.p2();
    double r1 = params.r1, rt1 = params.r1_tilde();
    double r2 = params.r2, rt2 = params.r2_tilde();

    ProtocolReport r;
    r.protocol = "locc";
    double qa1 = r1 * alice.q1 + rt1 * alice.q1_tilde; // failure weight of state 1 at stage 1
    double qa2 = r2 * alice.q2 + rt2 * alice.q2_tilde;
    r.p_a_fail = p1 * qa1 + p2 * qa2;
    r.p_a_success = 1.0 - r.p_a_fail;
    r.p_f1 = p1 * qa1 / r.p_a_fail;
    r.p_f2 = p2 * qa2 / r.p_a_fail;

    double v1 = alice.q1 * r1 / qa1, vt1 = alice.q1_tilde * rt1 / qa1;
    double v2 = alice.q2 * r2 / qa2, vt2 = alice.q2_tilde * rt2 / qa2;
    double qb1 = v1 * bob.q1 + vt1 * bob.q1_tilde;
    double qb2 = v2 * bob.q2 + vt2 * bob.q2_tilde;
    r.p_b_fail = r.p_f1 * qb1 + r.p_f2 * qb2;
    r.p_b_success = 1.0 - r.p_b_fail;

    r.total_fail = r.p_a_fail * r.p_b_fail;
    r.total_success = 1.0 - r.total_fail;
    finalize(r);
    return r;
}

ProtocolReport run_global(const EnsembleParams &params, const MeasurementSchedule &sched) {
    params.validate();
    sched.validate_for(params.s0(), params.s0_tilde());

    double p1 = params.p1, p2 = params.p2();
    ProtocolReport r;
    r.protocol = "global";
    double q1 = params.r1 * sched.q1 + params.r1_tilde() * sched.q1_tilde;
    double q2 = params.r2 * sched.q2 + params.r2_tilde() * sched.q2_tilde;
    r.p_a_fail = p1 * q1 + p2 * q2;
    r.p_a_success = 1.0 - r.p_a_fail;
    r.p_f1 = p1 * q1 / r.p_a_fail;
    r.p_f2 = p2 * q2 / r.p_a_fail;
    r.p_b_success = 0.0;
    r.p_b_fail = 1.0;
    r.total_fail = r.p_a_fail;
    r.total_success = r.p_a_success;
    finalize(r);
    return r;
}

ProtocolReport run_ssd(const EnsembleParams &params, const MeasurementSchedule &alice,
                       const MeasurementSchedule &charlie) {
    params.validate();
    if (alice.t >= 1.0 - 1e-14 || alice.t_tilde >= 1.0 - 1e-14)
        throw ConstraintError("run_ssd: the first observer must leave information (t, t~ < 1)");
    alice.validate_for(params.s, params.s_tilde);
    charlie.validate_for(alice.t, alice.t_tilde);

    double p1 = params.p1, p2 = params.p2();
    double r1 = params.r1, rt1 = params.r1_tilde();
    double r2 = params.r2, rt2 = params.r2_tilde();

    ProtocolReport r;
    r.protocol = "ssd";
    double qa1 = r1 * alice.q1 + rt1 * alice.q1_tilde;
    double qa2 = r2 * alice.q2 + rt2 * alice.q2_tilde;
    r.p_a_fail = p1 * qa1 + p2 * qa2;
    r.p_a_success = 1.0 - r.p_a_fail;

    // Second observer's marginal over the first observer's outcomes.
    double c1 = r1 * (1.0 - charlie.q1) + rt1 * (1.0 - charlie.q1_tilde);
    double c2 = r2 * (1.0 - charlie.q2) + rt2 * (1.0 - charlie.q2_tilde);
    r.p_b_success = p1 * c1 + p2 * c2;
    r.p_b_fail = 1.0 - r.p_b_success;

    double joint1 = r1 * (1.0 - alice.q1) * (1.0 - charlie.q1) +
                    rt1 * (1.0 - alice.q1_tilde) * (1.0 - charlie.q1_tilde);
    double joint2 = r2 * (1.0 - alice.q2) * (1.0 - charlie.q2) +
                    rt2 * (1.0 - alice.q2_tilde) * (1.0 - charlie.q2_tilde);
    r.joint_success = p1 * joint1 + p2 * joint2;

    double fail_both = p1 * (r1 * alice.q1 * charlie.q1 + rt1 * alice.q1_tilde * charlie.q1_tilde) +
                       p2 * (r2 * alice.q2 * charlie.q2 + rt2 * alice.q2_tilde * charlie.q2_tilde);
    r.at_least_one = 1.0 - fail_both;

    // Priors for a continuation stage (runs unless both observers succeeded).
    double cont1 = p1 * (1.0 - joint1);
    double cont2 = p2 * (1.0 - joint2);
    r.p_f1 = cont1 / (cont1 + cont2);
    r.p_f2 = cont2 / (cont1 + cont2);

    r.total_success = *r.at_least_one;
    r.total_fail = fail_both;
    finalize(r);
    return r;
}

ProtocolReport run_pure_local(const EnsembleParams &params, const MeasurementSchedule &alice,
                              const MeasurementSchedule &bob) {
    params.validate();
    if (!(params.r1 > 0.0 && params.r1 < 1.0 && params.r2 > 0.0 && params.r2 < 1.0))
        throw ValidationError("run_pure_local: r1 and r2 must lie strictly in (0,1)");
    alice.validate_for(params.s, params.s_tilde);
    bob.validate_for(params.s_prime, params.s_tilde_prime);

    // Stage expectation values of the coherent pair coincide with the mixed
    // ensemble: the inconclusive elements are diagonal across the orthogonal
    // second-side blocks, so interference terms drop out.
    ProtocolReport r = run_locc(params, alice, bob);
    r.protocol = "pure_local";
    double dphi = params.phi2.value_or(0.0) - params.phi1.value_or(0.0);
    double wrapped = std::remainder(dphi, 2.0 * std::numbers::pi);
    r.phase_condition_violated = std::abs(wrapped) > 1e-12;
    finalize(r);
    return r;
}

namespace {

// Shared two-stage composition of the communication hybrids. stage(s) is the
// joint success probability of one stage on states with overlap s.
ProtocolReport compose_hybrid(const char *tag, double stage1_success, double stage2_success,
                              double global_success) {
    ProtocolReport r;
    r.protocol = tag;
    r.p_a_success = stage1_success;
    r.p_a_fail = 1.0 - stage1_success;
    r.p_f1 = 0.5; // equal priors are preserved by both stage models
    r.p_f2 = 0.5;
    r.p_b_success = stage2_success;
    r.p_b_fail = 1.0 - stage2_success;
    r.total_fail = (1.0 - stage1_success) * (1.0 - stage2_success);
    r.total_success = 1.0 - r.total_fail;
    r.global_total_fail = 1.0 - global_success;
    r.delta_p = r.total_fail - *r.global_total_fail;
    finalize(r);
    return r;
}

} // namespace

ProtocolReport run_reproduce(const EnsembleParams &params) {
    params.validate();
    require_equal_prior_pure(params, "run_reproduce");
    double s = params.s, sp = params.s_prime;
    auto stage = [](double ov) { return (1.0 - ov) * (1.0 - ov); };
    return compose_hybrid("reproduce", stage(s), stage(sp), stage(s * sp));
}

ProtocolReport run_broadcast(const EnsembleParams &params) {
    params.validate();
    require_equal_prior_pure(params, "run_broadcast");
    double s = params.s, sp = params.s_prime;
    auto stage = [](double ov) { return (1.0 - ov) * (1.0 - ov) / (1.0 + ov); };
    return compose_hybrid("broadcast", stage(s), stage(sp), stage(s * sp));
}

const Matrix &Stage::kraus(int outcome) const {
    switch (outcome) {
        case 1: return k1;
        case 2: return k2;
        case 0: return k0;
    }
    throw ValidationError("Stage: outcome index must be 0, 1 or 2");
}

double operational_probability(const std::vector<Matrix> &states, const std::vector<double> &priors,
                               const std::vector<Stage> &stages, const std::vector<int> &pattern,
                               int which_state) {
    if (states.empty() || states.size() != priors.size())
        throw ValidationError("operational_probability: states and priors must align");
    if (pattern.size() != stages.size())
        throw ValidationError("operational_probability: pattern length must match stage count");

    Eigen::Index joint = states.front().rows();
    double total = 0.0;
    for (size_t i = 0; i < states.size(); ++i) {
        if (which_state >= 0 && static_cast<size_t>(which_state) != i) continue;
        Matrix current = states[i];
        for (size_t k = 0; k < stages.size(); ++k) {
            const Stage &st = stages[k];
            Eigen::Index local = st.k0.rows();
            Eigen::Index other = (st.party == Party::Joint) ? 1 : joint / local;
            Eigen::Index da = (st.party == Party::Second) ? other : local;
            Eigen::Index db = (st.party == Party::Second) ? local : other;
            Matrix op = embed(st.kraus(pattern[k]), st.party, da, db);
            current = op * current * op.adjoint();
        }
        total += priors[i] * current.trace().real();
    }
    return total;
}

ProtocolReport run_protocol(const ProtocolConfig &config) {
    const std::string &tag = config.protocol;
    auto need = [&](const std::optional<MeasurementSchedule> &s,
                    const char *name) -> const MeasurementSchedule & {
        if (!s) throw ValidationError("run_protocol: missing schedule '" + std::string(name) +
                                      "' for protocol '" + tag + "'");
        return *s;
    };
    if (tag == "locc") return run_locc(config.params, need(config.alice, "alice"), need(config.bob, "bob"));
    if (tag == "global") return run_global(config.params, need(config.global, "global"));
    if (tag == "ssd")
        return run_ssd(config.params, need(config.alice, "alice"), need(config.charlie, "charlie"));
    if (tag == "pure_local")
        return run_pure_local(config.params, need(config.alice, "alice"), need(config.bob, "bob"));
    if (tag == "reproduce") return run_reproduce(config.params);
    if (tag == "broadcast") return run_broadcast(config.params);
    throw ValidationError("run_protocol: unknown protocol '" + tag + "'");
}

} // namespace usdkit
