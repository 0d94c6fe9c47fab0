// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#pragma once

#include <vector>

#include "zscan/matrix.hpp"

namespace zscan {

// Per-column z-scoring with training statistics. Stddev is floored at
// 1e-12 so constant columns transform to zeros instead of dividing by 0.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev; // floored
};

Standardizer fit_standardizer(const Matrix& train);
Matrix apply_standardizer(const Standardizer& s, const Matrix& x);

// PCA fitted on centered training data via eigendecomposition of the
// sample covariance. Retains the smallest leading component set whose
// cumulative explained-variance ratio reaches variance_target.
struct PcaModel {
    std::vector<double> mean;
    Matrix components;                           // retained x d, orthonormal rows
    std::vector<double> explained_variance_ratio; // descending, one per retained
    std::vector<double> eigenvalues;              // sample covariance, retained
    double variance_target = 0.95;

    std::size_t n_components() const noexcept { return components.rows(); }
    std::size_t n_features() const noexcept { return components.cols(); }
};

// Component signs are fixed by making each component's largest-magnitude
// entry positive, removing eigenvector sign ambiguity. Throws
// "ZeroVariance" when the training data has no variance at all.
PcaModel fit_pca(const Matrix& train, double variance_target = 0.95);

// Projects (row - mean) onto the retained components.
// Throws "WidthMismatch" when the input width differs from the model's.
Matrix pca_transform(const PcaModel& model, const Matrix& x);

} // namespace zscan
