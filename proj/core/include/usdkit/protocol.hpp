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

#ifndef USDKIT_PROTOCOL_HPP
#define USDKIT_PROTOCOL_HPP

#include <optional>
#include <string>
#include <vector>

#include "usdkit/measurement.hpp"

namespace usdkit {

/// Stage-by-stage probabilities of one protocol evaluation. The generic
/// "a"/"b" slots hold the first and second observer of the protocol (Bob in
/// the communication protocol, the same-particle follow-up observer in the
/// sequential one). All fields are plain probabilities; optional fields are
/// populated by the protocols that define them.
struct ProtocolReport {
    std::string protocol;
    double p_a_success = 0.0;
    double p_a_fail = 0.0;
    double p_f1 = 0.0; // conditional prior of state 1 when the protocol continues
    double p_f2 = 0.0;
    double p_b_success = 0.0;
    double p_b_fail = 0.0;
    double total_success = 0.0;
    double total_fail = 0.0;
    std::optional<double> joint_success;   // sequential: both observers succeed
    std::optional<double> at_least_one;    // sequential: at least one succeeds
    std::optional<double> global_total_fail; // hybrids: one-shot joint variant
    std::optional<double> delta_p;           // hybrids: global minus local optimum
    std::optional<bool> phase_condition_violated; // pure runs with nonzero relative phase
};

/// Two-stage discrimination with classical communication: the second
/// observer measures the other particle only after the first one fails.
ProtocolReport run_locc(const EnsembleParams &params, const MeasurementSchedule &alice,
                        const MeasurementSchedule &bob);

/// One-shot joint measurement with q-parameters over the combined overlaps
/// (s0, s0~).
ProtocolReport run_global(const EnsembleParams &params, const MeasurementSchedule &sched);

/// Sequential discrimination on the same particle without communication;
/// requires the first observer's t, t~ strictly below 1. Reports the joint
/// and at-least-one success probabilities.
ProtocolReport run_ssd(const EnsembleParams &params, const MeasurementSchedule &alice,
                       const MeasurementSchedule &charlie);

/// Two-stage local discrimination of the coherent pure pair; stage totals
/// coincide with run_locc for identical schedules.
ProtocolReport run_pure_local(const EnsembleParams &params, const MeasurementSchedule &alice,
                              const MeasurementSchedule &bob);

/// Identify-and-reprepare stage on each particle (equal priors, r1 = r2 = 1).
/// Stage success is (1-s)^2; the one-shot variant uses the combined overlap.
ProtocolReport run_reproduce(const EnsembleParams &params);

/// Copy-then-measure stage on each particle; the copying step succeeds with
/// probability 1/(1+s) and is modeled by that scalar only.
ProtocolReport run_broadcast(const EnsembleParams &params);

/// One measurement stage applied to a named party of the bipartite system.
struct Stage {
    Matrix k1, k2, k0; // local Kraus operators; index order (1, 2, inconclusive)
    Party party = Party::First;
    const Matrix &kraus(int outcome) const;
};

/// Probability of observing `pattern` (entries 1, 2, or 0 per stage) when the
/// staged measurements act on a state drawn from `states` with `priors`.
/// Restricted to one hypothesis when which_state >= 0. Pure trace-rule
/// evaluation; serves as the independent oracle for every closed form here.
double operational_probability(const std::vector<Matrix> &states, const std::vector<double> &priors,
                               const std::vector<Stage> &stages, const std::vector<int> &pattern,
                               int which_state = -1);

/// Full configuration of one protocol evaluation (CLI and sampling entry).
struct ProtocolConfig {
    std::string protocol; // locc | global | ssd | pure_local | reproduce | broadcast
    EnsembleParams params;
    std::optional<MeasurementSchedule> alice, bob, charlie, global;
};

ProtocolReport run_protocol(const ProtocolConfig &config);

} // namespace usdkit

#endif
