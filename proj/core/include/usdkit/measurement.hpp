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

#ifndef USDKIT_MEASUREMENT_HPP
#define USDKIT_MEASUREMENT_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "usdkit/ensemble.hpp"

namespace usdkit {

/// Which factor of the bipartite system an operator acts on.
enum class Party { First, Second, Joint };

/// Failure-branch parameters of one observer's discrimination measurement.
/// q_i is the diagonal element of the inconclusive element in the i-th
/// support vector; t (t_tilde) is the overlap of the post-measurement basis.
/// Consistency with the targeted overlap pair (ov, ov~) demands
/// q1 q2 = ov^2/t^2 and q1~ q2~ = ov~^2/t~^2, with every q in
/// [ov^2/t^2, 1] ([ov~^2/t~^2, 1]).
struct MeasurementSchedule {
    double q1 = 1.0, q2 = 1.0;
    double q1_tilde = 1.0, q2_tilde = 1.0;
    double t = 1.0, t_tilde = 1.0;

    /// q1 = q2 = ov/t, q1~ = q2~ = ov~/t~.
    static MeasurementSchedule symmetric(double ov, double ov_tilde, double t = 1.0,
                                         double t_tilde = 1.0);
    /// Completes q2 (q2~) from the product constraints.
    static MeasurementSchedule from_q1(double ov, double ov_tilde, double q1, double q1_tilde,
                                       double t = 1.0, double t_tilde = 1.0);

    /// Throws ConstraintError naming the violated product or box bound.
    void validate_for(double ov, double ov_tilde, double tol = 1e-12) const;
};

/// The three elements of one observer's measurement: conclusive-1,
/// conclusive-2 and inconclusive, on the observer's local space, plus the
/// joint target states they discriminate and the party they act on.
struct PovmSet {
    Matrix m1, m2, m0;
    Matrix target1, target2; // joint states
    Party party = Party::First;
};

/// POVM together with the Kraus operators realizing it (k_i^dag k_i = m_i)
/// and the post-measurement basis vectors (overlap t / t_tilde).
struct ObserverMeasurement {
    PovmSet povm;
    Matrix k1, k2, k0;
    Vector w1, w2, wt1, wt2;
    MeasurementSchedule schedule;
};

/// Normalized post-failure states and their spectral data.
struct PostMeasurePair {
    QuantumOperator sigma1, sigma2;
    double v1 = 0.0, v2 = 0.0; // weight of the non-tilde branch in sigma_i
    double t = 1.0, t_tilde = 1.0;
    Vector w1, w2, wt1, wt2; // first-particle basis of sigma_i
};

/// Discrimination measurement for two pairs of subspace vectors
/// (x1,x2 | overlap ov) and (xt1,xt2 | overlap ov~) living in mutually
/// orthogonal blocks; the single-pair form is obtained by passing
/// tilde = std::nullopt. Element coefficients are c_i = (1-q_i)/(1-ov^2).
struct SubspacePair {
    Vector first, second;
    double overlap;
};
ObserverMeasurement build_usd_measurement(const SubspacePair &main,
                                          const std::optional<SubspacePair> &tilde,
                                          const MeasurementSchedule &sched);

ObserverMeasurement alice_measurement(const EnsemblePair &ens, const MeasurementSchedule &sched);
PovmSet alice_povm(const EnsemblePair &ens, const MeasurementSchedule &sched);
std::array<Matrix, 3> alice_kraus(const EnsemblePair &ens, const MeasurementSchedule &sched); // K0,K1,K2

/// Post-failure states of the ensemble under the given Alice measurement.
PostMeasurePair apply_alice_failure(const EnsemblePair &ens, const ObserverMeasurement &alice);

/// Second-particle measurement; requires zero cross overlaps (not the
/// epsilon embedding). Targets are the post-failure states when a
/// PostMeasurePair is supplied.
ObserverMeasurement bob_measurement(const EnsemblePair &ens, const MeasurementSchedule &sched,
                                    const PostMeasurePair *post = nullptr);
PovmSet bob_povm(const EnsemblePair &ens, const MeasurementSchedule &sched,
                 const PostMeasurePair *post = nullptr);

/// Same-particle follow-up measurement on the post-failure basis (overlap
/// pair (t, t~) of `post`); requires t, t~ < 1.
ObserverMeasurement charlie_measurement(const PostMeasurePair &post,
                                        const MeasurementSchedule &sched);
PovmSet charlie_povm(const PostMeasurePair &post, const MeasurementSchedule &sched);

/// Joint measurement on the combined support vectors (overlap pair
/// (s0, s0~)) for the mixed ensemble.
ObserverMeasurement global_measurement(const EnsemblePair &ens, const MeasurementSchedule &sched);

/// Joint single-pair measurement for the pure ensemble (overlap |s*|).
ObserverMeasurement global_pure_measurement(const PurePair &pure, const MeasurementSchedule &sched);

/// Gram-inverse construction: element i is built from the normalized dual
/// vectors of columns 2i-1 and 2i of G^{-1} in the order
/// (r1', r1~', r2', r2~'), scaled by the given c parameters
/// (c1, c1~, c2, c2~). Throws on a singular Gram (min eigenvalue <= 1e-12)
/// or when the resulting inconclusive element is not PSD.
PovmSet bob_povm_general(const Matrix &gram, const std::vector<Vector> &bob_vectors,
                         const std::array<double, 4> &c_params);

/// Completeness, PSD and unambiguity checks; throws ConstraintError with the
/// first violated property. `sigma` targets are traced on the set's party.
void check_povm(const PovmSet &set, double psd_tol = kDefaultTol.psd,
                double eq_tol = kDefaultTol.equality);

/// Embeds a local operator on the given party of a dim_a x dim_b system.
Matrix embed(const Matrix &local, Party party, Eigen::Index dim_a, Eigen::Index dim_b);

} // namespace usdkit

#endif
