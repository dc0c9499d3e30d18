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

#ifndef USDKIT_QUANTUM_HPP
#define USDKIT_QUANTUM_HPP

#include <complex>
#include <utility>

#include <Eigen/Dense>

#include "usdkit/errors.hpp"

namespace usdkit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Default numerical tolerances. Equality-type checks (Hermiticity, traces,
/// completeness) use 1e-12; PSD checks use the looser 1e-10 because valid
/// inconclusive-outcome operators sit exactly on the PSD boundary at optimum.
struct Tolerances {
    double hermitian = 1e-12;
    double psd = 1e-10;
    double equality = 1e-12;
};

inline constexpr Tolerances kDefaultTol{};

/// Hard cap on operator dimension; everything in this library lives in
/// dimension <= 16, the cap only rejects accidental blow-ups.
inline constexpr Eigen::Index kMaxDim = 256;

enum class OperatorKind { State, PovmElement, Kraus, Generic };

/// A dense complex square matrix tagged with its physical role. States and
/// POVM elements are validated on construction (finiteness, Hermiticity,
/// PSD, unit trace where applicable); value semantics throughout.
class QuantumOperator {
  public:
    /// Empty Generic operator; placeholder until a validated value is assigned.
    QuantumOperator() : mat_(), kind_(OperatorKind::Generic) {}

    static QuantumOperator state(Matrix m, const Tolerances &tol = kDefaultTol);
    static QuantumOperator povm_element(Matrix m, const Tolerances &tol = kDefaultTol);
    static QuantumOperator kraus(Matrix m);
    static QuantumOperator generic(Matrix m);

    const Matrix &matrix() const { return mat_; }
    OperatorKind kind() const { return kind_; }
    Eigen::Index dim() const { return mat_.rows(); }

  private:
    QuantumOperator(Matrix m, OperatorKind k) : mat_(std::move(m)), kind_(k) {}
    Matrix mat_;
    OperatorKind kind_;
};

/// Kronecker product. Rejects results larger than kMaxDim.
Matrix kron(const Matrix &a, const Matrix &b);
Vector kron(const Vector &a, const Vector &b);

/// Tensor product of two operators; kind is preserved when both agree,
/// otherwise Generic.
QuantumOperator tensor(const QuantumOperator &a, const QuantumOperator &b);

bool all_finite(const Matrix &m);
bool is_hermitian(const Matrix &m, double tol = kDefaultTol.hermitian);

/// Smallest eigenvalue of a Hermitian matrix. Throws on non-Hermitian input.
double min_eigenvalue(const Matrix &m, double hermitian_tol = kDefaultTol.hermitian);

/// True iff the Hermitian matrix has min eigenvalue >= -tol.
bool is_psd(const Matrix &m, double tol = kDefaultTol.psd);

/// Principal square root of a PSD Hermitian matrix; eigenvalues below zero
/// (within psd tolerance) are clamped to zero.
Matrix sqrt_psd(const Matrix &m, const Tolerances &tol = kDefaultTol);

double purity(const Matrix &rho);

/// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)) between two states of
/// equal dimension. Both arguments must carry the State kind.
double fidelity(const QuantumOperator &rho, const QuantumOperator &sigma);

/// Negativity of a pure bipartite state with local dimensions (dim_a, dim_b):
/// twice the absolute sum of the negative eigenvalues of the partial
/// transpose. Throws for inputs with purity below 1 - 1e-10.
double negativity_pure(const QuantumOperator &state, Eigen::Index dim_a, Eigen::Index dim_b);

/// Partial transpose over the second factor of a (dim_a x dim_b) bipartition.
Matrix partial_transpose(const Matrix &m, Eigen::Index dim_a, Eigen::Index dim_b);

} // namespace usdkit

#endif
