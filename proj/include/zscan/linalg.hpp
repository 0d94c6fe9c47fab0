// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#pragma once

#include <span>
#include <vector>

#include "zscan/matrix.hpp"

namespace zscan {

struct SymmetricEigen {
    std::vector<double> values; // descending
    Matrix vectors;             // row i is the unit eigenvector for values[i]
};

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// Deterministic sweep order; converges quadratically for the sizes used
// here (a few hundred). Input must be square and symmetric.
SymmetricEigen eigh(const Matrix& a);

// Lower-triangular L with A = L*L^T. Throws Errc::Numeric with kind
// "SingularCovariance" when A is not positive definite.
Matrix cholesky(const Matrix& a);

// Solves L*y = b in place of the returned vector (forward substitution).
std::vector<double> forward_solve(const Matrix& l, std::span<const double> b);

// log(det(A)) given the Cholesky factor L of A.
double cholesky_logdet(const Matrix& l);

} // namespace zscan
