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

#ifndef USDKIT_MONTECARLO_HPP
#define USDKIT_MONTECARLO_HPP

#include <cstdint>
#include <map>
#include <string>

#include "usdkit/protocol.hpp"
#include "usdkit/rng.hpp"

namespace usdkit {

/// Outcome statistics of a seeded sampling run. Counts are keyed by pattern
/// strings such as "A1", "A0B2", "G0"; estimates carry the protocol's
/// headline probabilities with binomial standard errors.
struct SampleReport {
    std::string protocol;
    uint64_t n_samples = 0;
    uint64_t seed = 0;
    std::map<std::string, uint64_t> counts;
    std::map<std::string, double> estimates;
    std::map<std::string, double> standard_errors;
};

/// Samples n outcome patterns of the configured protocol. Per-pattern
/// probabilities are computed once from the constructed operators via the
/// trace rule (the communication hybrids use their scalar stage model), then
/// each trial draws the hypothesis by prior and the pattern by exact inverse
/// CDF. Trial i consumes the engine seeded with derive_seed(seed, i), so the
/// run is reproducible and shardable.
SampleReport sample_protocol(const ProtocolConfig &config, uint64_t n, uint64_t seed);

/// Uniformly samples the region where the stage-2 optimum keeps both
/// hypotheses identified (the analytically unresolved case of the sequential
/// hybrid) and reports the minimum gap found.
struct CaseIiiSampleReport {
    uint64_t n_points = 0;
    uint64_t seed = 0;
    uint64_t n_drawn = 0; // total draws including region rejections
    double min_delta = 0.0;
    double arg_s = 0.0;
    double arg_s_prime = 0.0;
};
CaseIiiSampleReport sample_case_iii_region(uint64_t n_points, uint64_t seed);

/// Seeded draw helpers shared by verifications and property tests.
EnsembleParams random_valid_params(SplitMix64 &rng);
MeasurementSchedule random_schedule(SplitMix64 &rng, double ov, double ov_tilde, double t = 1.0,
                                    double t_tilde = 1.0);

} // namespace usdkit

#endif
