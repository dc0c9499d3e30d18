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

#include "usdkit/quantum.hpp"

#include <cmath>
#include <sstream>

namespace usdkit {

namespace {

void require_square(const Matrix &m, const char *who) {
    if (m.rows() != m.cols()) {
        std::ostringstream os;
        os << who << ": matrix must be square, got " << m.rows() << "x" << m.cols();
        throw ValidationError(os.str());
    }
    if (m.rows() == 0) throw ValidationError(std::string(who) + ": empty matrix");
    if (m.rows() > kMaxDim) {
        std::ostringstream os;
        os << who << ": dimension " << m.rows() << " exceeds cap " << kMaxDim;
        throw ValidationError(os.str());
    }
    if (!all_finite(m)) throw ValidationError(std::string(who) + ": non-finite entry");
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix &m, double hermitian_tol) {
    if (!is_hermitian(m, hermitian_tol)) throw ValidationError("expected a Hermitian matrix");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

} // namespace

bool all_finite(const Matrix &m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

bool is_hermitian(const Matrix &m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double min_eigenvalue(const Matrix &m, double hermitian_tol) {
    return hermitian_eigenvalues(m, hermitian_tol).minCoeff();
}

bool is_psd(const Matrix &m, double tol) {
    // Hermitize before the eigensolve so boundary round-off does not flip
    // the verdict; non-Hermitian input still throws.
    if (!is_hermitian(m, 1e-9)) throw ValidationError("is_psd: matrix is not Hermitian");
    Matrix h = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

Matrix sqrt_psd(const Matrix &m, const Tolerances &tol) {
    if (!is_hermitian(m, 1e-9)) throw ValidationError("sqrt_psd: matrix is not Hermitian");
    Matrix h = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Eigen::VectorXd lam = es.eigenvalues();
    if (lam.minCoeff() < -tol.psd) throw ValidationError("sqrt_psd: matrix is not PSD");
    // Eigenvalues at relative round-off scale are true zero modes; taking
    // their square root would amplify solver noise from 1e-16 to 1e-8.
    double cutoff = lam.maxCoeff() * 1e-14;
    Eigen::VectorXd root(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        root(i) = lam(i) > cutoff ? std::sqrt(lam(i)) : 0.0;
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

double purity(const Matrix &rho) { return (rho * rho).trace().real(); }

QuantumOperator QuantumOperator::state(Matrix m, const Tolerances &tol) {
    require_square(m, "state");
    if (!is_hermitian(m, tol.hermitian)) throw ValidationError("state: not Hermitian within tolerance");
    if (!is_psd(m, tol.psd)) throw ValidationError("state: not PSD within tolerance");
    double tr = m.trace().real();
    if (std::abs(tr - 1.0) > tol.equality) {
        std::ostringstream os;
        os << "state: trace " << tr << " differs from 1 beyond " << tol.equality;
        throw ValidationError(os.str());
    }
    return QuantumOperator(std::move(m), OperatorKind::State);
}

QuantumOperator QuantumOperator::povm_element(Matrix m, const Tolerances &tol) {
    require_square(m, "povm_element");
    if (!is_hermitian(m, tol.hermitian)) throw ValidationError("povm_element: not Hermitian");
    if (!is_psd(m, tol.psd)) throw ValidationError("povm_element: not PSD within tolerance");
    return QuantumOperator(std::move(m), OperatorKind::PovmElement);
}

QuantumOperator QuantumOperator::kraus(Matrix m) {
    require_square(m, "kraus");
    return QuantumOperator(std::move(m), OperatorKind::Kraus);
}

QuantumOperator QuantumOperator::generic(Matrix m) {
    require_square(m, "generic");
    return QuantumOperator(std::move(m), OperatorKind::Generic);
}

Matrix kron(const Matrix &a, const Matrix &b) {
    if (a.rows() * b.rows() > kMaxDim || a.cols() * b.cols() > kMaxDim)
        throw ValidationError("kron: result dimension exceeds cap");
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vector kron(const Vector &a, const Vector &b) {
    if (a.size() * b.size() > kMaxDim) throw ValidationError("kron: result dimension exceeds cap");
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

QuantumOperator tensor(const QuantumOperator &a, const QuantumOperator &b) {
    Matrix m = kron(a.matrix(), b.matrix());
    if (a.kind() == b.kind()) {
        switch (a.kind()) {
            case OperatorKind::State: return QuantumOperator::state(std::move(m));
            case OperatorKind::PovmElement: return QuantumOperator::povm_element(std::move(m));
            case OperatorKind::Kraus: return QuantumOperator::kraus(std::move(m));
            case OperatorKind::Generic: break;
        }
    }
    return QuantumOperator::generic(std::move(m));
}

double fidelity(const QuantumOperator &rho, const QuantumOperator &sigma) {
    if (rho.kind() != OperatorKind::State || sigma.kind() != OperatorKind::State)
        throw ValidationError("fidelity: both arguments must be states");
    if (rho.dim() != sigma.dim()) throw ValidationError("fidelity: dimension mismatch");
    // Tr sqrt(sqrt(rho) sigma sqrt(rho)) equals the trace norm of
    // sqrt(sigma) sqrt(rho); the singular-value route keeps solver noise on
    // the zero modes linear instead of square-root amplified.
    Matrix b = sqrt_psd(sigma.matrix()) * sqrt_psd(rho.matrix());
    Eigen::JacobiSVD<Matrix> svd(b);
    return std::min(1.0, svd.singularValues().sum());
}

Matrix partial_transpose(const Matrix &m, Eigen::Index dim_a, Eigen::Index dim_b) {
    if (m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b)
        throw ValidationError("partial_transpose: dimensions do not factor the matrix");
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < dim_a; ++i)
        for (Eigen::Index j = 0; j < dim_b; ++j)
            for (Eigen::Index k = 0; k < dim_a; ++k)
                for (Eigen::Index l = 0; l < dim_b; ++l)
                    out(i * dim_b + j, k * dim_b + l) = m(i * dim_b + l, k * dim_b + j);
    return out;
}

double negativity_pure(const QuantumOperator &state, Eigen::Index dim_a, Eigen::Index dim_b) {
    if (state.kind() != OperatorKind::State) throw ValidationError("negativity_pure: input must be a state");
    if (purity(state.matrix()) < 1.0 - 1e-10)
        throw ValidationError("negativity_pure: input is not pure (purity below 1 - 1e-10)");
    Matrix pt = partial_transpose(state.matrix(), dim_a, dim_b);
    Eigen::SelfAdjointEigenSolver<Matrix> es((pt + pt.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    double neg = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) < 0.0) neg += -es.eigenvalues()(i);
    return 2.0 * neg;
}

} // namespace usdkit
