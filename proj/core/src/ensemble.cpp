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

#include "usdkit/ensemble.hpp"

#include <cmath>
#include <sstream>

namespace usdkit {

namespace {

void check_open_unit(double v, const char *name) {
    if (!(v > 0.0 && v < 1.0)) {
        std::ostringstream os;
        os << "EnsembleParams: " << name << " = " << v << " must lie strictly in (0,1)";
        throw ValidationError(os.str());
    }
}

Vector basis_vec(Eigen::Index dim, Eigen::Index k) {
    Vector v = Vector::Zero(dim);
    v(k) = 1.0;
    return v;
}

// Pair (x1, x2) with <x1|x2> = overlap occupying coordinates (k, k+1).
std::pair<Vector, Vector> embedded_pair(Eigen::Index dim, Eigen::Index k, double overlap) {
    Vector x1 = basis_vec(dim, k);
    Vector x2 = Vector::Zero(dim);
    x2(k) = overlap;
    x2(k + 1) = std::sqrt(1.0 - overlap * overlap);
    return {x1, x2};
}

Matrix dyad(const Vector &v) { return v * v.adjoint(); }

QuantumOperator assemble_state(double r, const Vector &a, const Vector &ap, const Vector &b,
                               const Vector &bp) {
    Matrix m = r * kron(dyad(a), dyad(ap)) + (1.0 - r) * kron(dyad(b), dyad(bp));
    return QuantumOperator::state(std::move(m));
}

} // namespace

double EnsembleParams::s_star() const {
    return std::sqrt(r1 * r2) * s0() + std::sqrt(r1_tilde() * r2_tilde()) * s0_tilde();
}

double EnsembleParams::epsilon_bound() const {
    return std::sqrt((1.0 - s_prime * s_prime) * (1.0 - s_tilde_prime * s_tilde_prime));
}

void EnsembleParams::validate() const {
    check_open_unit(p1, "P1");
    if (!(r1 >= 0.0 && r1 <= 1.0)) throw ValidationError("EnsembleParams: r1 must lie in [0,1]");
    if (!(r2 >= 0.0 && r2 <= 1.0)) throw ValidationError("EnsembleParams: r2 must lie in [0,1]");
    check_open_unit(s, "s");
    check_open_unit(s_tilde, "s_tilde");
    check_open_unit(s_prime, "s_prime");
    check_open_unit(s_tilde_prime, "s_tilde_prime");
    if (epsilon) {
        double e = *epsilon;
        double bound = epsilon_bound();
        if (!(e > 0.0 && e <= bound)) {
            std::ostringstream os;
            os << "EnsembleParams: epsilon = " << e << " must satisfy 0 < epsilon <= "
               << "sqrt((1-s_prime^2)(1-s_tilde_prime^2)) = " << bound;
            throw ValidationError(os.str());
        }
    }
}

EnsemblePair build_mixed_pair(const EnsembleParams &p) {
    p.validate();
    if (p.epsilon) throw ValidationError("build_mixed_pair: epsilon must be absent (use build_epsilon_pair)");

    EnsemblePair ens;
    ens.params = p;
    std::tie(ens.r1, ens.r2) = embedded_pair(4, 0, p.s);
    std::tie(ens.rt1, ens.rt2) = embedded_pair(4, 2, p.s_tilde);
    std::tie(ens.r1p, ens.r2p) = embedded_pair(4, 0, p.s_prime);
    std::tie(ens.rt1p, ens.rt2p) = embedded_pair(4, 2, p.s_tilde_prime);
    ens.rho1 = assemble_state(p.r1, ens.r1, ens.r1p, ens.rt1, ens.rt1p);
    ens.rho2 = assemble_state(p.r2, ens.r2, ens.r2p, ens.rt2, ens.rt2p);
    return ens;
}

PurePair build_pure_pair(const EnsembleParams &p) {
    p.validate();
    if (!(p.r1 > 0.0 && p.r1 < 1.0 && p.r2 > 0.0 && p.r2 < 1.0))
        throw ValidationError("build_pure_pair: r1 and r2 must lie strictly in (0,1)");

    EnsembleParams base = p;
    base.epsilon.reset();
    EnsemblePair ens = build_mixed_pair(base);

    auto superpose = [](double r, double phi, const Vector &a, const Vector &ap, const Vector &b,
                        const Vector &bp) {
        Complex phase = std::exp(Complex(0.0, phi));
        Vector v = std::sqrt(r) * kron(a, ap) + phase * std::sqrt(1.0 - r) * kron(b, bp);
        return v;
    };

    PurePair pure;
    pure.params = p;
    pure.psi1 = superpose(p.r1, p.phi1.value_or(0.0), ens.r1, ens.r1p, ens.rt1, ens.rt1p);
    pure.psi2 = superpose(p.r2, p.phi2.value_or(0.0), ens.r2, ens.r2p, ens.rt2, ens.rt2p);
    pure.rho1 = QuantumOperator::state(pure.psi1 * pure.psi1.adjoint());
    pure.rho2 = QuantumOperator::state(pure.psi2 * pure.psi2.adjoint());
    pure.overlap = pure.psi1.dot(pure.psi2);
    return pure;
}

EnsemblePair build_epsilon_pair(const EnsembleParams &p) {
    p.validate();
    if (!p.epsilon) throw ValidationError("build_epsilon_pair: epsilon is required");
    double eps = *p.epsilon;
    double sp = p.s_prime, stp = p.s_tilde_prime;

    EnsemblePair ens;
    ens.params = p;
    std::tie(ens.r1, ens.r2) = embedded_pair(4, 0, p.s);
    std::tie(ens.rt1, ens.rt2) = embedded_pair(4, 2, p.s_tilde);

    ens.r1p = basis_vec(4, 0);
    ens.rt1p = basis_vec(4, 1);
    ens.r2p = Vector::Zero(4);
    ens.r2p(0) = sp;
    ens.r2p(2) = std::sqrt(1.0 - sp * sp);
    double x = eps / std::sqrt(1.0 - sp * sp);
    double rest = 1.0 - stp * stp - x * x;
    if (rest < 0.0) rest = 0.0; // only at the exact epsilon bound
    ens.rt2p = Vector::Zero(4);
    ens.rt2p(1) = stp;
    ens.rt2p(2) = x;
    ens.rt2p(3) = std::sqrt(rest);

    ens.rho1 = assemble_state(p.r1, ens.r1, ens.r1p, ens.rt1, ens.rt1p);
    ens.rho2 = assemble_state(p.r2, ens.r2, ens.r2p, ens.rt2, ens.rt2p);
    return ens;
}

Matrix gram_matrix(const std::vector<Vector> &vectors) {
    if (vectors.empty()) throw ValidationError("gram_matrix: empty vector sequence");
    Eigen::Index dim = vectors.front().size();
    for (const auto &v : vectors)
        if (v.size() != dim) throw ValidationError("gram_matrix: vectors of unequal dimension");
    Eigen::Index n = static_cast<Eigen::Index>(vectors.size());
    Matrix g(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) g(j, k) = vectors[j].dot(vectors[k]);
    return g;
}

std::vector<Vector> bob_vector_order(const EnsemblePair &ens) {
    return {ens.r1p, ens.rt1p, ens.r2p, ens.rt2p};
}

} // namespace usdkit
