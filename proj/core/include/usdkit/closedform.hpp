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

#ifndef USDKIT_CLOSEDFORM_HPP
#define USDKIT_CLOSEDFORM_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "usdkit/ensemble.hpp"

namespace usdkit {

/// 3 - 2*sqrt(2): threshold between the symmetric and ignore-one-state
/// branches of the sequential stage optimum.
double ssd_branch_threshold();

enum class Branch { BothIdentified, OneIdentified, PartiallyIdentified };
std::string branch_name(Branch b);

struct OptimumReport {
    double p_max = 0.0;
    Branch branch = Branch::BothIdentified;
    std::string region;
    std::map<std::string, double> argmax; // q-space optimizer location
};

/// Swap the state labels (priors and weights); overlaps are symmetric.
EnsembleParams relabel_states(const EnsembleParams &p);

/// Piecewise optimum of the one-shot joint discrimination of the mixed pair.
/// Requires the ordering P1 r1 <= P2 r2 and P1 r1~ <= P2 r2~ (relabel first
/// otherwise). The two subspace blocks optimize independently: each either
/// attains its interior stationary point or parks q1 at 1 and ignores the
/// corresponding component of state 1.
OptimumReport optimal_global_mixed(const EnsembleParams &p);

/// Optimum of the one-shot discrimination of the coherent pure pair with
/// overlap s*: 1 - 2 sqrt(P1 P2) s* below the prior threshold, P2 (1 - s*^2)
/// above it.
OptimumReport optimal_global_pure(const EnsembleParams &p);

struct GapCaseResult {
    std::string case_label; // "i" | "ii" | "iii" | "iv", "(boundary)" suffix on ties
    double delta_p = 0.0;   // pure-pair optimum minus mixed-pair optimum
};
GapCaseResult pure_mixed_gap(const EnsembleParams &p);

/// Pure-pair minus mixed-pair optimum as explicit per-case expressions
/// (used for figure series; valid inside the matching region).
double pure_mixed_gap_case_ii(const EnsembleParams &p);
double pure_mixed_gap_case_iii(const EnsembleParams &p);
double pure_mixed_gap_case_iv(const EnsembleParams &p);

/// Joint success optimum of two sequential observers on one particle for a
/// two-hypothesis pure pair with overlap s and priors (p_f1, 1-p_f1),
/// p_f1 <= 1/2. Equal priors: (1-sqrt(s))^2 below the branch threshold,
/// (1/2)(1-s)^2 above. Unequal priors: quartic-root branch below the
/// critical overlap, (1-p_f1)(1-s)^2 above.
OptimumReport optimal_ssd_stage(double p_f1, double s);

struct QuarticResult {
    double q_star = 0.0;          // admissible root maximizing the stage objective
    std::vector<double> roots;    // every admissible root found in [s', 1]
    double residual = 0.0;        // polynomial value at q_star
};

/// Root of p_f1 q^4 - p_f1 q^3 + p_f2 s' q - p_f2 s'^2 in [s', 1], found by
/// bracketed bisection over a mixed log/linear node scan.
QuarticResult quartic_qstar(double p_f1, double p_f2, double s_prime);

/// Overlap where the two stage-optimum branches exchange optimality,
/// solved by bisection; approaches the branch threshold as p_f1 -> 1/2.
double critical_sc(double p_f1, double p_f2);

struct UnequalPriorStageSolution {
    double q_star = 0.0;
    double s_c = 0.0;
    double p_bd_opt = 0.0;
};
UnequalPriorStageSolution unequal_prior_ssd_solution(double p_f1, double s_prime);

struct SsdDeltaResult {
    std::string region; // "B-i" | "B-ii" | "C-i" | "C-ii" | "C-iii"
    double delta_p = 0.0;
    double local_fail = 0.0;
    double global_fail = 0.0;
};

/// Optimal-local minus optimal-global failure probability of the two-stage
/// sequential hybrid at first/second particle overlaps (s, s').
SsdDeltaResult ssd_delta(double s, double s_prime);

/// Closed forms of the communication-hybrid gaps.
double hybrid_reproduce_delta(double s, double s_prime);  // 2 s s' (1-s)(1-s')
double hybrid_broadcast_delta(double s, double s_prime);  // 2(1-s)(1-s') s s' (3+s s') / ...

// ---------------------------------------------------------------------------
// Search oracles (independent of the closed forms above).

struct ScalarSearchResult {
    double value = 0.0;
    double arg = 0.0;
    long evaluations = 0;
};

/// Coarse grid at the given absolute step followed by golden-section
/// refinement rounds inside the best bracket.
ScalarSearchResult maximize_scalar(const std::function<double(double)> &f, double lo, double hi,
                                   double resolution = 1e-4, int refine_rounds = 80);

/// Seeded uniform random search on [lo, hi].
ScalarSearchResult maximize_scalar_random(const std::function<double(double)> &f, double lo,
                                          double hi, long n_samples, uint64_t seed);

/// Grid+refinement search over the two decoupled q-manifolds of the mixed
/// one-shot problem (parametrized by q1 and q1~ alone).
OptimumReport grid_search_global_mixed(const EnsembleParams &p, double resolution = 1e-4,
                                       int refine_rounds = 80);

/// Same for the pure pair (single manifold over q1).
OptimumReport grid_search_global_pure(const EnsembleParams &p, double resolution = 1e-4,
                                      int refine_rounds = 80);

struct SsdStageSearchResult {
    double value = 0.0;
    double t = 0.0, q1_first = 0.0, q1_second = 0.0;
    long evaluations = 0;
};

/// Full three-variable search (t, q1 of each observer; partners fixed by the
/// product constraints) of the sequential stage objective; refines the best
/// few coarse cells independently to avoid basin capture.
SsdStageSearchResult search_ssd_stage(double p1, double p2, double overlap, int n_per_axis = 48,
                                      int refine_rounds = 8);

} // namespace usdkit

#endif
