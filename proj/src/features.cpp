// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#include "zscan/features.hpp"

#include <cmath>

#include "zscan/error.hpp"
#include "zscan/linalg.hpp"
#include "zscan/parallel.hpp"

namespace zscan {

Standardizer fit_standardizer(const Matrix& train) {
    const std::size_t n = train.rows();
    const std::size_t d = train.cols();
    if (n < 2)
        raise(Errc::InvalidArgument, "TooFewPoints", "standardizer needs at least 2 rows");

    Standardizer s;
    s.mean.assign(d, 0.0);
    s.stddev.assign(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        auto row = train.row(r);
        for (std::size_t c = 0; c < d; ++c) s.mean[c] += row[c];
    }
    for (std::size_t c = 0; c < d; ++c) s.mean[c] /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
        auto row = train.row(r);
        for (std::size_t c = 0; c < d; ++c) {
            const double dv = row[c] - s.mean[c];
            s.stddev[c] += dv * dv;
        }
    }
    for (std::size_t c = 0; c < d; ++c) {
        const double var = s.stddev[c] / static_cast<double>(n - 1);
        s.stddev[c] = std::max(std::sqrt(var), 1e-12);
    }
    return s;
}

Matrix apply_standardizer(const Standardizer& s, const Matrix& x) {
    if (x.cols() != s.mean.size())
        raise(Errc::InvalidArgument, "WidthMismatch",
              "matrix width does not match the standardizer");
    Matrix out(x.rows(), x.cols());
    parallel_for(x.rows(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            auto src = x.row(r);
            auto dst = out.row(r);
            for (std::size_t c = 0; c < x.cols(); ++c)
                dst[c] = (src[c] - s.mean[c]) / s.stddev[c];
        }
    });
    return out;
}

PcaModel fit_pca(const Matrix& train, double variance_target) {
    const std::size_t n = train.rows();
    const std::size_t d = train.cols();
    if (n < 2)
        raise(Errc::InvalidArgument, "TooFewPoints", "PCA needs at least 2 rows");
    if (d == 0)
        raise(Errc::InvalidArgument, "WidthMismatch", "PCA needs at least 1 column");
    if (!(variance_target > 0.0) || !(variance_target <= 1.0))
        raise(Errc::Config, "ConfigError", "variance_target must be in (0, 1]");

    PcaModel model;
    model.variance_target = variance_target;
    model.mean.assign(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        auto row = train.row(r);
        for (std::size_t c = 0; c < d; ++c) model.mean[c] += row[c];
    }
    for (std::size_t c = 0; c < d; ++c) model.mean[c] /= static_cast<double>(n);

    Matrix centered(n, d);
    for (std::size_t r = 0; r < n; ++r) {
        auto src = train.row(r);
        auto dst = centered.row(r);
        for (std::size_t c = 0; c < d; ++c) dst[c] = src[c] - model.mean[c];
    }

    // Sample covariance, upper triangle then mirrored.
    Matrix cov(d, d);
    const double scale = 1.0 / static_cast<double>(n - 1);
    parallel_for(d, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = i; j < d; ++j) {
                double acc = 0.0;
                for (std::size_t r = 0; r < n; ++r)
                    acc += centered(r, i) * centered(r, j);
                cov(i, j) = acc * scale;
            }
        }
    });
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < i; ++j) cov(i, j) = cov(j, i);

    SymmetricEigen eig = eigh(cov);

    // Covariance eigenvalues are nonnegative up to rounding; tiny negative
    // values are noise and clamp to zero before ratios are formed.
    double total = 0.0;
    for (double& v : eig.values) {
        if (v < 0.0) v = 0.0;
        total += v;
    }
    if (!(total > 0.0))
        raise(Errc::Numeric, "ZeroVariance", "training data has no variance");

    std::size_t retained = 1;
    double cumulative = eig.values[0] / total;
    while (cumulative + 1e-12 < variance_target && retained < eig.values.size()) {
        cumulative += eig.values[retained] / total;
        ++retained;
    }

    model.components = Matrix(retained, d);
    model.explained_variance_ratio.resize(retained);
    model.eigenvalues.resize(retained);
    for (std::size_t i = 0; i < retained; ++i) {
        model.eigenvalues[i] = eig.values[i];
        model.explained_variance_ratio[i] = eig.values[i] / total;
        auto src = eig.vectors.row(i);
        auto dst = model.components.row(i);
        // Sign convention: flip so the largest-|entry| coordinate is positive.
        std::size_t arg = 0;
        for (std::size_t c = 1; c < d; ++c)
            if (std::abs(src[c]) > std::abs(src[arg])) arg = c;
        const double flip = src[arg] < 0.0 ? -1.0 : 1.0;
        for (std::size_t c = 0; c < d; ++c) dst[c] = flip * src[c];
    }
    return model;
}

Matrix pca_transform(const PcaModel& model, const Matrix& x) {
    const std::size_t d = model.n_features();
    if (x.cols() != d)
        raise(Errc::InvalidArgument, "WidthMismatch",
              "matrix width does not match the PCA model");
    const std::size_t k = model.n_components();
    Matrix out(x.rows(), k);
    parallel_for(x.rows(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            auto src = x.row(r);
            auto dst = out.row(r);
            for (std::size_t comp = 0; comp < k; ++comp) {
                auto axis = model.components.row(comp);
                double acc = 0.0;
                for (std::size_t c = 0; c < d; ++c)
                    acc += (src[c] - model.mean[c]) * axis[c];
                dst[comp] = acc;
            }
        }
    });
    return out;
}

} // namespace zscan
