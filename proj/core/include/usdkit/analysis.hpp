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

#ifndef USDKIT_ANALYSIS_HPP
#define USDKIT_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "usdkit/closedform.hpp"
#include "usdkit/montecarlo.hpp"

namespace usdkit {

struct VerificationResult {
    std::string claim;
    std::string sweep; // parameter set / sweep description
    bool pass = false;
    double worst_residual = 0.0;
    std::optional<std::string> witness; // present whenever pass is false
};

/// Identity between the two-stage local evaluation and the one-shot joint
/// evaluation at elementwise-multiplied q parameters, over seeded random
/// ensembles and schedules.
VerificationResult verify_locc_global_equivalence(int n_draws, uint64_t seed);

/// At-least-one success of the sequential protocol equals the two-stage
/// local total when the follow-up observer copies the second-stage schedule.
VerificationResult verify_theorem2(int n_draws, uint64_t seed);

/// Gram-inverse second-stage success at cross overlap eps stays strictly
/// below the orthogonal-case value and converges to it as eps -> 0. Points
/// where the fixed c parameters are infeasible are skipped with a note.
VerificationResult verify_conjecture1(const std::vector<double> &eps_grid,
                                                const EnsembleParams &base, double c_value);

/// Runs every claim with derived seeds; order is stable.
std::vector<VerificationResult> verify_all(uint64_t seed);

struct FigureSeries {
    struct Series {
        std::string label;
        std::vector<std::pair<double, double>> points; // x strictly increasing
    };
    std::string figure_id;
    std::string x_name;
    std::vector<Series> series;
    std::string note; // generation parameters
};

/// fig3: optimum gap vs entanglement for the three nontrivial cases;
/// fig6: sequential-hybrid gap vs s' for s in {0.2, 0.3, 0.4, 0.8};
/// fig7: stage-2 optimum vs s' for s in {0.2, 0.5, 0.9};
/// fig8: region boundaries (s s' threshold, critical overlap, diagonal).
FigureSeries emit_figure(const std::string &figure_id, int grid_points = 400);

} // namespace usdkit

#endif
