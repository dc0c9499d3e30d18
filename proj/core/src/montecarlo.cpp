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

#include "usdkit/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "usdkit/closedform.hpp"

namespace usdkit {

namespace {

struct PatternTable {
    std::vector<std::string> names;
    // cumulative[i][k]: cumulative probability of pattern k under hypothesis i
    std::array<std::vector<double>, 2> cumulative;
    // predicate per estimate name: which patterns count, per hypothesis
    std::map<std::string, std::array<std::vector<int>, 2>> numerators;
};

std::string outcome_name(const char *stage, int o) { return std::string(stage) + std::to_string(o); }

// Builds staged Kraus operators for the operator-backed protocols and
// evaluates every full outcome pattern with the trace rule.
PatternTable build_table(const ProtocolConfig &config) {
    const std::string &tag = config.protocol;
    PatternTable table;

    auto need = [&](const std::optional<MeasurementSchedule> &s, const char *name) {
        if (!s)
            throw ValidationError("sample_protocol: missing schedule '" + std::string(name) + "'");
        return *s;
    };

    auto add_pattern = [&](const std::string &name, double p1, double p2) {
        table.names.push_back(name);
        double last0 = table.cumulative[0].empty() ? 0.0 : table.cumulative[0].back();
        double last1 = table.cumulative[1].empty() ? 0.0 : table.cumulative[1].back();
        table.cumulative[0].push_back(last0 + p1);
        table.cumulative[1].push_back(last1 + p2);
    };

    if (tag == "locc" || tag == "pure_local" || tag == "ssd") {
        bool pure = tag == "pure_local";
        bool sequential = tag == "ssd";
        MeasurementSchedule alice = need(config.alice, "alice");
        MeasurementSchedule second =
            sequential ? need(config.charlie, "charlie") : need(config.bob, "bob");

        std::vector<Matrix> states;
        Stage stage_a, stage_b;
        EnsemblePair ens = build_mixed_pair([&] {
            EnsembleParams q = config.params;
            q.epsilon.reset();
            return q;
        }());
        ObserverMeasurement am = alice_measurement(ens, alice);
        if (pure) {
            PurePair pp = build_pure_pair(config.params);
            states = {pp.rho1.matrix(), pp.rho2.matrix()};
        } else {
            states = {ens.rho1.matrix(), ens.rho2.matrix()};
        }
        stage_a = Stage{am.k1, am.k2, am.k0, Party::First};
        if (sequential) {
            PostMeasurePair post = apply_alice_failure(ens, am);
            ObserverMeasurement cm = charlie_measurement(post, second);
            stage_b = Stage{cm.k1, cm.k2, cm.k0, Party::First};
        } else {
            ObserverMeasurement bm = bob_measurement(ens, second);
            stage_b = Stage{bm.k1, bm.k2, bm.k0, Party::Second};
        }

        std::vector<double> unit{1.0, 1.0};
        const char *first_tag = "A";
        const char *second_tag = sequential ? "C" : "B";
        if (sequential) {
            // Both observers always measure; patterns are full (a, c) pairs.
            for (int a : {1, 2, 0})
                for (int c : {1, 2, 0}) {
                    double p0 = operational_probability(states, unit, {stage_a, stage_b}, {a, c}, 0);
                    double p1 = operational_probability(states, unit, {stage_a, stage_b}, {a, c}, 1);
                    add_pattern(outcome_name(first_tag, a) + outcome_name(second_tag, c), p0, p1);
                }
            table.numerators["joint_success"] = {std::vector<int>{}, std::vector<int>{}};
            table.numerators["at_least_one"] = {std::vector<int>{}, std::vector<int>{}};
            for (size_t k = 0; k < table.names.size(); ++k) {
                const std::string &nm = table.names[k];
                for (int i = 0; i < 2; ++i) {
                    std::string mine = std::to_string(i + 1);
                    bool a_hit = nm.substr(1, 1) == mine;
                    bool c_hit = nm.substr(3, 1) == mine;
                    if (a_hit && c_hit)
                        table.numerators["joint_success"][i].push_back(static_cast<int>(k));
                    if (a_hit || c_hit)
                        table.numerators["at_least_one"][i].push_back(static_cast<int>(k));
                }
            }
            table.numerators["total_success"] = table.numerators["at_least_one"];
        } else {
            for (int a : {1, 2})
                add_pattern(outcome_name(first_tag, a),
                            operational_probability(states, unit, {stage_a}, {a}, 0),
                            operational_probability(states, unit, {stage_a}, {a}, 1));
            for (int b : {1, 2, 0})
                add_pattern(outcome_name(first_tag, 0) + outcome_name(second_tag, b),
                            operational_probability(states, unit, {stage_a, stage_b}, {0, b}, 0),
                            operational_probability(states, unit, {stage_a, stage_b}, {0, b}, 1));
            table.numerators["total_success"] = {std::vector<int>{}, std::vector<int>{}};
            for (size_t k = 0; k < table.names.size(); ++k) {
                const std::string &nm = table.names[k];
                for (int i = 0; i < 2; ++i) {
                    std::string mine = std::to_string(i + 1);
                    bool success = (nm.size() == 2 && nm.substr(1, 1) == mine) ||
                                   (nm.size() == 4 && nm.substr(3, 1) == mine);
                    if (success)
                        table.numerators["total_success"][i].push_back(static_cast<int>(k));
                }
            }
        }
    } else if (tag == "global") {
        MeasurementSchedule sched = need(config.global, "global");
        EnsemblePair ens = build_mixed_pair(config.params);
        ObserverMeasurement gm = global_measurement(ens, sched);
        Stage stage{gm.k1, gm.k2, gm.k0, Party::Joint};
        std::vector<Matrix> states{ens.rho1.matrix(), ens.rho2.matrix()};
        std::vector<double> unit{1.0, 1.0};
        for (int o : {1, 2, 0})
            add_pattern(outcome_name("G", o), operational_probability(states, unit, {stage}, {o}, 0),
                        operational_probability(states, unit, {stage}, {o}, 1));
        table.numerators["total_success"] = {std::vector<int>{0}, std::vector<int>{1}};
    } else if (tag == "reproduce" || tag == "broadcast") {
        // Scalar stage model: per stage, "both observers succeed" with the
        // composed stage probability, identical for either hypothesis.
        double s = config.params.s, sp = config.params.s_prime;
        bool bc = tag == "broadcast";
        auto stage = [&](double ov) {
            double p = (1.0 - ov) * (1.0 - ov);
            return bc ? p / (1.0 + ov) : p;
        };
        double st1 = stage(s), st2 = stage(sp);
        run_protocol(config); // validates priors and the pure limit
        add_pattern("S1", st1, st1);
        add_pattern("S2", (1.0 - st1) * st2, (1.0 - st1) * st2);
        add_pattern("F", (1.0 - st1) * (1.0 - st2), (1.0 - st1) * (1.0 - st2));
        table.numerators["total_success"] = {std::vector<int>{0, 1}, std::vector<int>{0, 1}};
    } else {
        throw ValidationError("sample_protocol: unknown protocol '" + tag + "'");
    }
    return table;
}

} // namespace

SampleReport sample_protocol(const ProtocolConfig &config, uint64_t n, uint64_t seed) {
    if (n < 1) throw ValidationError("sample_protocol: n must be >= 1");
    PatternTable table = build_table(config);

    // Pattern probabilities must exhaust each hypothesis before any draw.
    for (int i = 0; i < 2; ++i) {
        double total = table.cumulative[i].back();
        if (std::abs(total - 1.0) > 1e-9)
            throw ConstraintError("sample_protocol: pattern probabilities do not sum to 1");
    }

    SampleReport rep;
    rep.protocol = config.protocol;
    rep.n_samples = n;
    rep.seed = seed;
    for (const auto &nm : table.names) rep.counts[nm] = 0;

    double p1 = config.params.p1;
    std::vector<uint64_t> flat(table.names.size(), 0);
    for (uint64_t trial = 0; trial < n; ++trial) {
        SplitMix64 rng(derive_seed(seed, trial));
        int i = rng.next_double() < p1 ? 0 : 1;
        double u = rng.next_double();
        const std::vector<double> &cum = table.cumulative[static_cast<size_t>(i)];
        size_t k = static_cast<size_t>(
            std::lower_bound(cum.begin(), cum.end(), u * cum.back()) - cum.begin());
        if (k >= flat.size()) k = flat.size() - 1;
        ++flat[k];
    }
    for (size_t k = 0; k < table.names.size(); ++k) rep.counts[table.names[k]] = flat[k];

    auto estimate = [&](const std::string &name) {
        // Counts are hypothesis-summed; cross patterns carry zero probability,
        // so the union over hypotheses counts exactly the right trials.
        uint64_t hits = 0;
        std::vector<bool> in(table.names.size(), false);
        for (int i = 0; i < 2; ++i)
            for (int k : table.numerators.at(name)[static_cast<size_t>(i)]) in[static_cast<size_t>(k)] = true;
        for (size_t k = 0; k < flat.size(); ++k)
            if (in[k]) hits += flat[k];
        double p = static_cast<double>(hits) / static_cast<double>(n);
        rep.estimates[name] = p;
        rep.standard_errors[name] = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    };
    for (const auto &[name, _] : table.numerators) estimate(name);
    return rep;
}

CaseIiiSampleReport sample_case_iii_region(uint64_t n_points, uint64_t seed) {
    if (n_points < 1) throw ValidationError("sample_case_iii_region: n_points must be >= 1");
    double r = ssd_branch_threshold();

    CaseIiiSampleReport rep;
    rep.n_points = n_points;
    rep.seed = seed;
    rep.min_delta = std::numeric_limits<double>::infinity();

    uint64_t accepted = 0;
    uint64_t draw = 0;
    while (accepted < n_points) {
        SplitMix64 rng(derive_seed(seed, draw));
        ++draw;
        if (draw > 50 * n_points)
            throw ConstraintError("sample_case_iii_region: acceptance region appears empty");
        double s = r + (1.0 - r) * rng.next_double();
        double sp = r * rng.next_double();
        if (sp <= 0.0) continue;
        SsdDeltaResult d = ssd_delta(s, sp);
        if (d.region != "C-iii") continue; // outside the target region
        ++accepted;
        if (d.delta_p < rep.min_delta) {
            rep.min_delta = d.delta_p;
            rep.arg_s = s;
            rep.arg_s_prime = sp;
        }
    }
    rep.n_drawn = draw;
    return rep;
}

EnsembleParams random_valid_params(SplitMix64 &rng) {
    EnsembleParams p;
    p.p1 = rng.uniform(0.1, 0.9);
    p.r1 = rng.uniform(0.05, 0.95);
    p.r2 = rng.uniform(0.05, 0.95);
    p.s = rng.uniform(0.1, 0.9);
    p.s_tilde = rng.uniform(0.1, 0.9);
    p.s_prime = rng.uniform(0.1, 0.9);
    p.s_tilde_prime = rng.uniform(0.1, 0.9);
    return p;
}

MeasurementSchedule random_schedule(SplitMix64 &rng, double ov, double ov_tilde, double t,
                                    double t_tilde) {
    double lo = ov * ov / (t * t);
    double lo_t = ov_tilde * ov_tilde / (t_tilde * t_tilde);
    double q1 = rng.uniform(lo, 1.0);
    double q1t = rng.uniform(lo_t, 1.0);
    return MeasurementSchedule::from_q1(ov, ov_tilde, q1, q1t, t, t_tilde);
}

} // namespace usdkit
