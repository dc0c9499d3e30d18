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

#ifndef USDKIT_SERIALIZE_HPP
#define USDKIT_SERIALIZE_HPP

#include <optional>
#include <string>

#include "usdkit/analysis.hpp"

namespace usdkit {

// JSON emission (stable snake_case field names, no timestamps: identical
// inputs produce byte-identical output).
std::string to_json(const EnsembleParams &p, int indent = 2);
std::string to_json(const ProtocolReport &r, int indent = 2);
std::string to_json(const OptimumReport &r, int indent = 2);
std::string to_json(const SampleReport &r, int indent = 2);
std::string to_json(const CaseIiiSampleReport &r, int indent = 2);
std::string to_json(const VerificationResult &r, int indent = 2);
std::string to_json(const std::vector<VerificationResult> &r, int indent = 2);
std::string to_json(const FigureSeries &f, int indent = 2);

// CSV emission.
std::string to_csv(const FigureSeries &f);      // columns: x,y,series
std::string counts_to_csv(const SampleReport &r); // columns: pattern,count

/// Parses the flat parameter object {P1, r1, r2, s, s_tilde, s_prime,
/// s_tilde_prime, epsilon?, phi1?, phi2?}; P2 derived; unknown keys rejected.
EnsembleParams ensemble_params_from_json(const std::string &text);

/// Raw schedule numbers as written in a config; q2/q2_tilde may be omitted
/// and are completed from the product constraints once the targeted overlaps
/// are known.
struct ScheduleSpec {
    double q1 = 1.0;
    double q1_tilde = 1.0;
    std::optional<double> q2, q2_tilde;
    double t = 1.0, t_tilde = 1.0;
    MeasurementSchedule resolve(double ov, double ov_tilde) const;
};

/// One CLI invocation's configuration.
struct RunConfig {
    std::optional<EnsembleParams> ensemble;
    std::optional<ScheduleSpec> alice, bob, charlie, global;
    std::optional<std::string> protocol;
    std::optional<std::string> target; // optimize: global-mixed | global-pure | ssd-stage
    double resolution = 1e-4;
    int refine_rounds = 80;
    uint64_t seed = 1;
    uint64_t n_samples = 100000;
    std::optional<std::string> out_path;
    std::optional<std::string> format;
};

/// Strict parse: unknown keys anywhere raise ValidationError; malformed JSON
/// raises ParseError with 1-based line/column.
RunConfig run_config_from_json(const std::string &text);

} // namespace usdkit

#endif
