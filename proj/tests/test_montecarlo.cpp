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

#include "usdkit/closedform.hpp"
#include "usdkit/montecarlo.hpp"

using namespace usdkit;

namespace {

ProtocolConfig locc_config() {
    ProtocolConfig cfg;
    cfg.protocol = "locc";
    cfg.params = EnsembleParams{};
    cfg.params.r1 = 0.6;
    cfg.params.r2 = 0.7;
    cfg.alice = MeasurementSchedule::symmetric(cfg.params.s, cfg.params.s_tilde);
    cfg.bob = MeasurementSchedule::symmetric(cfg.params.s_prime, cfg.params.s_tilde_prime);
    return cfg;
}

bool within_sigma(double estimate, double truth, double se, double k) {
    return std::abs(estimate - truth) <= k * std::max(se, 1e-12) + 1e-9;
}

} // namespace

TEST_CASE("deterministic single-element measurement estimates exactly 1") {
    ProtocolConfig cfg = locc_config();
    // "No measurement" schedules: every trial lands in the fail-fail pattern.
    MeasurementSchedule none;
    none.q1 = none.q2 = none.q1_tilde = none.q2_tilde = 1.0;
    none.t = cfg.params.s;
    none.t_tilde = cfg.params.s_tilde;
    cfg.alice = none;
    MeasurementSchedule none_b = none;
    none_b.t = cfg.params.s_prime;
    none_b.t_tilde = cfg.params.s_tilde_prime;
    cfg.bob = none_b;
    SampleReport rep = sample_protocol(cfg, 5000, 3);
    CHECK(rep.counts.at("A0B0") == 5000);
    CHECK(rep.estimates.at("total_success") == doctest::Approx(0.0));
}

TEST_CASE("two-stage estimate converges to the formula value") {
    ProtocolConfig cfg = locc_config();
    SampleReport rep = sample_protocol(cfg, 1000000, 42);
    ProtocolReport truth = run_protocol(cfg);
    CHECK(within_sigma(rep.estimates.at("total_success"), truth.total_success,
                       rep.standard_errors.at("total_success"), 4.0));
}

TEST_CASE("sequential joint estimate at the symmetric reference point") {
    double s = 0.16;
    ProtocolConfig cfg;
    cfg.protocol = "ssd";
    cfg.params.r1 = cfg.params.r2 = 1.0;
    cfg.params.s = s;
    cfg.params.s_tilde = s;
    double rs = std::sqrt(s);
    cfg.alice = MeasurementSchedule::symmetric(s, s, rs, rs);
    cfg.charlie = MeasurementSchedule::symmetric(rs, rs);
    SampleReport rep = sample_protocol(cfg, 1000000, 7);
    double truth = (1.0 - rs) * (1.0 - rs);
    CHECK(within_sigma(rep.estimates.at("joint_success"), truth,
                       rep.standard_errors.at("joint_success"), 4.0));
}

TEST_CASE("counts sum to the number of trials and rerun is identical") {
    ProtocolConfig cfg = locc_config();
    SampleReport a = sample_protocol(cfg, 100000, 11);
    SampleReport b = sample_protocol(cfg, 100000, 11);
    uint64_t total = 0;
    for (const auto &[k, v] : a.counts) total += v;
    CHECK(total == 100000);
    CHECK(a.counts == b.counts);
    SampleReport c = sample_protocol(cfg, 100000, 12);
    CHECK(a.counts != c.counts);
}

TEST_CASE("every protocol stays within five standard errors of its formula") {
    std::vector<ProtocolConfig> configs;

    for (uint64_t k = 0; k < 4; ++k) {
        SplitMix64 rng(derive_seed(1000 + k, k));
        ProtocolConfig cfg;
        cfg.params = random_valid_params(rng);
        cfg.protocol = "locc";
        cfg.alice = random_schedule(rng, cfg.params.s, cfg.params.s_tilde);
        cfg.bob = random_schedule(rng, cfg.params.s_prime, cfg.params.s_tilde_prime);
        configs.push_back(cfg);

        ProtocolConfig glob = cfg;
        glob.protocol = "global";
        glob.global = random_schedule(rng, cfg.params.s0(), cfg.params.s0_tilde());
        configs.push_back(glob);
    }

    for (auto &cfg : configs) {
        SampleReport rep = sample_protocol(cfg, 200000, 99);
        ProtocolReport truth = run_protocol(cfg);
        CHECK(within_sigma(rep.estimates.at("total_success"), truth.total_success,
                           rep.standard_errors.at("total_success"), 5.0));
    }
}

TEST_CASE("hybrid scalar-model sampling matches stage compositions") {
    ProtocolConfig cfg;
    cfg.protocol = "reproduce";
    cfg.params.r1 = cfg.params.r2 = 1.0;
    cfg.params.s = 0.5;
    cfg.params.s_prime = 0.5;
    SampleReport rep = sample_protocol(cfg, 500000, 21);
    ProtocolReport truth = run_protocol(cfg);
    CHECK(within_sigma(rep.estimates.at("total_success"), truth.total_success,
                       rep.standard_errors.at("total_success"), 5.0));

    cfg.protocol = "broadcast";
    SampleReport rep2 = sample_protocol(cfg, 500000, 22);
    ProtocolReport truth2 = run_protocol(cfg);
    CHECK(within_sigma(rep2.estimates.at("total_success"), truth2.total_success,
                       rep2.standard_errors.at("total_success"), 5.0));
}

TEST_CASE("region sampler: minimum gap is positive and deterministic") {
    CaseIiiSampleReport rep = sample_case_iii_region(2000, 42);
    CHECK(rep.min_delta > 0.0);
    CHECK(rep.arg_s > ssd_branch_threshold());
    CHECK(rep.arg_s_prime <= ssd_branch_threshold());
    CaseIiiSampleReport rep2 = sample_case_iii_region(2000, 42);
    CHECK(rep.min_delta == rep2.min_delta);
    CHECK(rep.n_drawn == rep2.n_drawn);
    // The sampled points genuinely lie in the target region.
    CHECK(ssd_delta(rep.arg_s, rep.arg_s_prime).region == "C-iii");
}

TEST_CASE("derived seeds decorrelate indices") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}
