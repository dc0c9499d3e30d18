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

#ifndef USDKIT_ENSEMBLE_HPP
#define USDKIT_ENSEMBLE_HPP

#include <optional>
#include <vector>

#include "usdkit/quantum.hpp"

namespace usdkit {

/// Scalar parameters of a two-hypothesis bipartite ensemble: priors (p1,
/// 1-p1), eigenvalue weights r_i (with 1-r_i implied), the four pairwise
/// overlaps of the local support vectors, and optionally a cross overlap
/// epsilon on the second side plus relative phases for coherent
/// superpositions.
struct EnsembleParams {
    double p1 = 0.5;
    double r1 = 0.5;
    double r2 = 0.5;
    double s = 0.5;
    double s_tilde = 0.5;
    double s_prime = 0.5;
    double s_tilde_prime = 0.5;
    std::optional<double> epsilon;
    std::optional<double> phi1;
    std::optional<double> phi2;

    double p2() const { return 1.0 - p1; }
    double r1_tilde() const { return 1.0 - r1; }
    double r2_tilde() const { return 1.0 - r2; }
    /// Combined first*second overlaps.
    double s0() const { return s * s_prime; }
    double s0_tilde() const { return s_tilde * s_tilde_prime; }
    /// Effective pure-state overlap sqrt(r1 r2) s0 + sqrt(r1~ r2~) s0~.
    double s_star() const;
    /// Upper bound on epsilon given the primed overlaps.
    double epsilon_bound() const;

    /// Throws ValidationError naming the first failing constraint.
    void validate() const;
};

/// Concrete realization of the ensemble: the eight local basis vectors and
/// the two joint density operators assembled from them.
struct EnsemblePair {
    EnsembleParams params;
    Eigen::Index dim_a = 4;
    Eigen::Index dim_b = 4;
    // First-particle vectors (r1, r2 span one 2-dim block; the tilde pair the
    // orthogonal block).
    Vector r1, r2, rt1, rt2;
    // Second-particle vectors; mutually orthogonal blocks except in
    // epsilon mode where <r2'|rt2'> = epsilon.
    Vector r1p, r2p, rt1p, rt2p;
    QuantumOperator rho1, rho2;
};

/// Pure coherent superpositions sqrt(r_i)|r_i>|r_i'> + e^{i phi_i}
/// sqrt(1-r_i)|r~_i>|r~_i'>, as vectors and density operators.
struct PurePair {
    EnsembleParams params;
    Vector psi1, psi2;
    QuantumOperator rho1, rho2;
    Complex overlap; // <psi1|psi2>
};

/// Canonical real embedding: |r1> = e0, |r2> = s e0 + sqrt(1-s^2) e1,
/// |r1~> = e2, |r2~> = s~ e2 + sqrt(1-s~^2) e3, and the same with primes on
/// the second side. Requires epsilon absent.
EnsemblePair build_mixed_pair(const EnsembleParams &p);

/// Requires r1, r2 strictly inside (0,1); with zero phases the overlap
/// equals s_star().
PurePair build_pure_pair(const EnsembleParams &p);

/// Second-side embedding with a single nonzero cross overlap
/// <r2'|rt2'> = epsilon; Alice's side is the canonical embedding.
EnsemblePair build_epsilon_pair(const EnsembleParams &p);

/// Gram matrix G[j,k] = <v_j|v_k> in the given vector order.
Matrix gram_matrix(const std::vector<Vector> &vectors);

/// Second-side vectors in the order (r1', r1~', r2', r2~') used by the
/// Gram-inverse measurement construction.
std::vector<Vector> bob_vector_order(const EnsemblePair &ens);

} // namespace usdkit

#endif
