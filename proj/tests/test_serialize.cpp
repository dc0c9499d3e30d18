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

#include "usdkit/serialize.hpp"

using namespace usdkit;

TEST_CASE("ensemble params round-trip through JSON") {
    EnsembleParams p;
    p.p1 = 0.3;
    p.r1 = 0.6;
    p.r2 = 0.7;
    p.s = 0.5;
    p.s_tilde = 0.4;
    p.s_prime = 0.45;
    p.s_tilde_prime = 0.35;
    p.epsilon = 0.2;
    p.phi1 = 0.1;
    std::string text = to_json(p);
    EnsembleParams q = ensemble_params_from_json(text);
    CHECK(q.p1 == p.p1);
    CHECK(q.r1 == p.r1);
    CHECK(q.s_tilde_prime == p.s_tilde_prime);
    CHECK(*q.epsilon == *p.epsilon);
    CHECK(*q.phi1 == *p.phi1);
    CHECK_FALSE(q.phi2.has_value());
    // Emission is deterministic byte for byte.
    CHECK(to_json(q) == text);
}

TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_AS(ensemble_params_from_json(R"({"P1":0.5,"r1":0.5,"r2":0.5,"s":0.5,
        "s_tilde":0.5,"s_prime":0.5,"s_tilde_prime":0.5,"bogus":1})"),
                    ValidationError);
    CHECK_THROWS_AS(run_config_from_json(R"({"nonsense": {}})"), ValidationError);
}

TEST_CASE("missing required key names the key") {
    try {
        ensemble_params_from_json(R"({"P1":0.5})");
        FAIL("expected a validation error");
    } catch (const ValidationError &e) {
        CHECK(std::string(e.what()).find("r1") != std::string::npos);
    }
}

TEST_CASE("malformed JSON reports line and column") {
    try {
        run_config_from_json("{\n  \"protocol\": locc\n}");
        FAIL("expected a parse error");
    } catch (const ParseError &e) {
        CHECK(e.line == 2);
        CHECK(e.column > 1);
    }
}

TEST_CASE("config parse with schedules, optimizer and output") {
    std::string text = R"({
      "ensemble": {"P1": 0.5, "r1": 1.0, "r2": 1.0, "s": 0.4, "s_tilde": 0.4,
                   "s_prime": 0.4, "s_tilde_prime": 0.4},
      "alice": {"q1": 0.4, "q1_tilde": 0.4},
      "bob": {"q1": 0.4, "q1_tilde": 0.4},
      "protocol": "locc",
      "optimizer": {"resolution": 1e-3, "refine_rounds": 50, "seed": 9, "n_samples": 1000},
      "output": {"format": "json"}
    })";
    RunConfig cfg = run_config_from_json(text);
    REQUIRE(cfg.ensemble.has_value());
    REQUIRE(cfg.alice.has_value());
    CHECK(cfg.protocol == "locc");
    CHECK(cfg.resolution == 1e-3);
    CHECK(cfg.refine_rounds == 50);
    CHECK(cfg.seed == 9);
    CHECK(cfg.n_samples == 1000);
    MeasurementSchedule a = cfg.alice->resolve(0.4, 0.4);
    CHECK(a.q2 == doctest::Approx(0.4));

    // Explicit inconsistent q2 fails the product constraint.
    std::string bad = R"({"alice": {"q1": 0.4, "q2": 0.5, "q1_tilde": 0.4}})";
    RunConfig cfg2 = run_config_from_json(bad);
    CHECK_THROWS_AS(cfg2.alice->resolve(0.4, 0.4), ConstraintError);
}

TEST_CASE("protocol report JSON carries optional fields only when set") {
    EnsembleParams p;
    MeasurementSchedule a = MeasurementSchedule::symmetric(p.s, p.s_tilde);
    MeasurementSchedule b = MeasurementSchedule::symmetric(p.s_prime, p.s_tilde_prime);
    std::string locc = to_json(run_locc(p, a, b));
    CHECK(locc.find("total_success") != std::string::npos);
    CHECK(locc.find("joint_success") == std::string::npos);

    EnsembleParams hp;
    hp.r1 = hp.r2 = 1.0;
    std::string rep = to_json(run_reproduce(hp));
    CHECK(rep.find("delta_p") != std::string::npos);
    CHECK(rep.find("global_total_fail") != std::string::npos);
}

TEST_CASE("figure CSV has the x,y,series header and one row per point") {
    FigureSeries fig = emit_figure("fig8", 50);
    std::string csv = to_csv(fig);
    CHECK(csv.rfind("x,y,series\n", 0) == 0);
    size_t rows = 0;
    for (char c : csv)
        if (c == '\n') ++rows;
    size_t points = 0;
    for (const auto &s : fig.series) points += s.points.size();
    CHECK(rows == points + 1);
}

TEST_CASE("sample report serializes counts and estimates") {
    ProtocolConfig cfg;
    cfg.protocol = "global";
    cfg.params = EnsembleParams{};
    cfg.global = MeasurementSchedule::symmetric(cfg.params.s0(), cfg.params.s0_tilde());
    SampleReport rep = sample_protocol(cfg, 1000, 4);
    std::string js = to_json(rep);
    CHECK(js.find("\"G0\"") != std::string::npos);
    CHECK(js.find("standard_errors") != std::string::npos);
    std::string csv = counts_to_csv(rep);
    CHECK(csv.rfind("pattern,count\n", 0) == 0);
}

TEST_CASE("verification results serialize with witnesses only on failure") {
    VerificationResult ok{"claim", "sweep", true, 1e-15, std::nullopt};
    CHECK(to_json(ok).find("witness") == std::string::npos);
    VerificationResult bad{"claim", "sweep", false, 0.5, std::string("here")};
    CHECK(to_json(bad).find("witness") != std::string::npos);
}
