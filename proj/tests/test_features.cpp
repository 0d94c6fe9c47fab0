// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "zscan/error.hpp"
#include "zscan/features.hpp"
#include "zscan/matrix.hpp"
#include "zscan/random.hpp"

using namespace zscan;

namespace {

template <typename Fn>
std::string thrown_kind(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

Matrix random_matrix(std::size_t n, std::size_t m, std::uint64_t seed) {
    Matrix x(n, m);
    Rng rng(seed);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < m; ++c) x(r, c) = rng.normal();
    return x;
}

// Sample covariance of x, plain loops, divisor n - 1.
std::vector<std::vector<double>> sample_covariance(const Matrix& x) {
    const std::size_t n = x.rows(), d = x.cols();
    std::vector<double> mean(d, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) mean[c] += x(r, c);
    for (double& m : mean) m /= static_cast<double>(n);
    std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                cov[i][j] += (x(r, i) - mean[i]) * (x(r, j) - mean[j]);
    for (auto& row : cov)
        for (double& v : row) v /= static_cast<double>(n - 1);
    return cov;
}

} // namespace

TEST_SUITE("features") {

TEST_CASE("standardized training columns have zero mean and unit spread") {
    Matrix x = random_matrix(300, 5, derive_seed(1, "std"));
    // Give the columns distinct scales and offsets.
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c)
            x(r, c) = x(r, c) * (1.0 + 3.0 * static_cast<double>(c)) +
                      10.0 * static_cast<double>(c);
    const Standardizer s = fit_standardizer(x);
    const Matrix z = apply_standardizer(s, x);
    for (std::size_t c = 0; c < z.cols(); ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < z.rows(); ++r) mean += z(r, c);
        mean /= static_cast<double>(z.rows());
        double ss = 0.0;
        for (std::size_t r = 0; r < z.rows(); ++r) {
            const double d = z(r, c) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(z.rows() - 1));
        CHECK(std::abs(mean) <= 1e-10);
        CHECK(std::abs(sd - 1.0) <= 1e-10);
    }
}

TEST_CASE("constant columns standardize to zero") {
    Matrix x(10, 2);
    for (std::size_t r = 0; r < 10; ++r) {
        x(r, 0) = 7.5;
        x(r, 1) = static_cast<double>(r);
    }
    const Standardizer s = fit_standardizer(x);
    const Matrix z = apply_standardizer(s, x);
    for (std::size_t r = 0; r < 10; ++r) CHECK(z(r, 0) == 0.0);
}

TEST_CASE("standardizer maps a shifted copy by the training scale") {
    Matrix x = random_matrix(100, 1, derive_seed(2, "shift"));
    const Standardizer s = fit_standardizer(x);
    Matrix shifted = x;
    const double c = 2.5;
    for (std::size_t r = 0; r < x.rows(); ++r) shifted(r, 0) += c;
    const Matrix zx = apply_standardizer(s, x);
    const Matrix zs = apply_standardizer(s, shifted);
    REQUIRE(s.stddev.size() == 1);
    for (std::size_t r = 0; r < x.rows(); ++r)
        CHECK(zs(r, 0) - zx(r, 0) == doctest::Approx(c / s.stddev[0]).epsilon(1e-12));
}

TEST_CASE("standardizer enforces matching width") {
    Matrix x = random_matrix(10, 3, 1);
    const Standardizer s = fit_standardizer(x);
    Matrix narrow = random_matrix(4, 2, 2);
    CHECK(thrown_kind([&] { apply_standardizer(s, narrow); }) == "WidthMismatch");
    CHECK(thrown_kind([] { fit_standardizer(Matrix(1, 3)); }) == "TooFewPoints");
}

TEST_CASE("collinear data reduces to one component") {
    // Points on a 3-D line: x_i = m + t_i * dir with unit dir.
    const std::vector<double> dir = {2.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0};
    const std::vector<double> m = {1.0, 2.0, -1.0};
    const std::vector<double> t = {-3.0, -1.0, 0.5, 2.0, 4.0, -0.25, 1.25, 0.75};
    Matrix x(t.size(), 3);
    for (std::size_t r = 0; r < t.size(); ++r)
        for (std::size_t c = 0; c < 3; ++c) x(r, c) = m[c] + t[r] * dir[c];

    const PcaModel pca = fit_pca(x, 0.95);
    REQUIRE(pca.n_components() == 1);
    CHECK(pca.explained_variance_ratio[0] == doctest::Approx(1.0).epsilon(1e-12));

    // Scores are signed distances along the line, up to overall sign.
    const Matrix scores = pca_transform(pca, x);
    double tbar = 0.0;
    for (const double v : t) tbar += v;
    tbar /= static_cast<double>(t.size());
    const double sign = scores(0, 0) * (t[0] - tbar) >= 0.0 ? 1.0 : -1.0;
    for (std::size_t r = 0; r < t.size(); ++r)
        CHECK(scores(r, 0) == doctest::Approx(sign * (t[r] - tbar)).epsilon(1e-9));
}

TEST_CASE("isotropic cloud splits variance evenly") {
    const Matrix x = random_matrix(10000, 2, derive_seed(3, "iso"));
    const PcaModel pca = fit_pca(x, 1.0);
    REQUIRE(pca.n_components() == 2);
    CHECK(pca.explained_variance_ratio[0] == doctest::Approx(0.5).epsilon(0.04));
    CHECK(pca.explained_variance_ratio[1] == doctest::Approx(0.5).epsilon(0.04));
    CHECK(pca.explained_variance_ratio[0] >= pca.explained_variance_ratio[1]);
}

TEST_CASE("components are orthonormal rows") {
    const Matrix x = random_matrix(150, 8, derive_seed(4, "ortho"));
    const PcaModel pca = fit_pca(x, 1.0);
    REQUIRE(pca.n_components() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = 0; j < 8; ++j) {
            double dot = 0.0;
            for (std::size_t c = 0; c < 8; ++c)
                dot += pca.components(i, c) * pca.components(j, c);
            CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) <= 1e-8);
        }
    }
}

TEST_CASE("score variances equal the eigenvalues") {
    const Matrix x = random_matrix(400, 6, derive_seed(5, "var"));
    const PcaModel pca = fit_pca(x, 1.0);
    const Matrix scores = pca_transform(pca, x);
    for (std::size_t c = 0; c < pca.n_components(); ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < scores.rows(); ++r) mean += scores(r, c);
        mean /= static_cast<double>(scores.rows());
        double ss = 0.0;
        for (std::size_t r = 0; r < scores.rows(); ++r) {
            const double d = scores(r, c) - mean;
            ss += d * d;
        }
        const double var = ss / static_cast<double>(scores.rows() - 1);
        CHECK(var == doctest::Approx(pca.eigenvalues[c]).epsilon(1e-6));
    }
}

TEST_CASE("explained ratios match an independent covariance") {
    const Matrix x = random_matrix(200, 10, derive_seed(6, "cov"));
    const PcaModel pca = fit_pca(x, 1.0);
    const auto cov = sample_covariance(x);
    double trace = 0.0;
    for (std::size_t i = 0; i < 10; ++i) trace += cov[i][i];

    // Each reported (eigenvalue, component) pair must be an eigenpair of
    // the independently computed covariance: residual of C v - lambda v.
    for (std::size_t k = 0; k < pca.n_components(); ++k) {
        double resid = 0.0;
        for (std::size_t i = 0; i < 10; ++i) {
            double cv = 0.0;
            for (std::size_t j = 0; j < 10; ++j) cv += cov[i][j] * pca.components(k, j);
            const double diff = cv - pca.eigenvalues[k] * pca.components(k, i);
            resid += diff * diff;
        }
        CHECK(std::sqrt(resid) <= 1e-8 * std::max(1.0, pca.eigenvalues[k]));
        CHECK(pca.explained_variance_ratio[k] ==
              doctest::Approx(pca.eigenvalues[k] / trace).epsilon(1e-6));
    }
}

TEST_CASE("retained components cover the variance target") {
    // Strongly anisotropic data: a 95 percent target keeps few components.
    Matrix x = random_matrix(300, 12, derive_seed(7, "target"));
    for (std::size_t r = 0; r < x.rows(); ++r) {
        x(r, 0) *= 40.0;
        x(r, 1) *= 10.0;
    }
    const PcaModel pca = fit_pca(x, 0.95);
    CHECK(pca.n_components() < 12);
    double cum = 0.0;
    for (std::size_t k = 0; k < pca.n_components(); ++k)
        cum += pca.explained_variance_ratio[k];
    CHECK(cum >= 0.95);
    // Dropping the last retained component must fall below the target.
    CHECK(cum - pca.explained_variance_ratio[pca.n_components() - 1] < 0.95);
}

TEST_CASE("training mean row maps to the zero score") {
    const Matrix x = random_matrix(64, 4, derive_seed(8, "mean"));
    const PcaModel pca = fit_pca(x, 1.0);
    Matrix mean_row(1, 4);
    for (std::size_t c = 0; c < 4; ++c) mean_row(0, c) = pca.mean[c];
    const Matrix s = pca_transform(pca, mean_row);
    for (std::size_t c = 0; c < pca.n_components(); ++c)
        CHECK(std::abs(s(0, c)) <= 1e-8);
}

TEST_CASE("residuals are orthogonal to the retained span") {
    Matrix x = random_matrix(120, 6, derive_seed(9, "resid"));
    for (std::size_t r = 0; r < x.rows(); ++r) x(r, 0) *= 25.0;
    const PcaModel pca = fit_pca(x, 0.90);
    REQUIRE(pca.n_components() < 6);
    const Matrix scores = pca_transform(pca, x);
    for (std::size_t r = 0; r < 10; ++r) { // a sample of rows suffices
        // Reconstruct and form the residual.
        std::vector<double> recon(6);
        for (std::size_t c = 0; c < 6; ++c) {
            recon[c] = pca.mean[c];
            for (std::size_t k = 0; k < pca.n_components(); ++k)
                recon[c] += scores(r, k) * pca.components(k, c);
        }
        for (std::size_t k = 0; k < pca.n_components(); ++k) {
            double dot = 0.0;
            for (std::size_t c = 0; c < 6; ++c)
                dot += (x(r, c) - recon[c]) * pca.components(k, c);
            CHECK(std::abs(dot) <= 1e-8);
        }
    }
}

TEST_CASE("pca input validation") {
    CHECK(thrown_kind([] { fit_pca(Matrix(1, 4), 0.95); }) == "TooFewPoints");
    CHECK(thrown_kind([] { fit_pca(random_matrix(10, 2, 1), 0.0); }) == "ConfigError");
    CHECK(thrown_kind([] { fit_pca(random_matrix(10, 2, 1), 1.5); }) == "ConfigError");
    CHECK(thrown_kind([] { fit_pca(Matrix(10, 3, 2.0), 0.95); }) == "ZeroVariance");
    const PcaModel pca = fit_pca(random_matrix(10, 3, 1), 0.95);
    Matrix wide = random_matrix(2, 5, 2);
    CHECK(thrown_kind([&] { pca_transform(pca, wide); }) == "WidthMismatch");
}

TEST_CASE("pca is deterministic with a fixed sign convention") {
    const Matrix x = random_matrix(80, 5, derive_seed(10, "det"));
    const PcaModel a = fit_pca(x, 1.0);
    const PcaModel b = fit_pca(x, 1.0);
    REQUIRE(a.n_components() == b.n_components());
    for (std::size_t k = 0; k < a.n_components(); ++k)
        for (std::size_t c = 0; c < 5; ++c)
            CHECK(a.components(k, c) == b.components(k, c)); // bitwise

    // Sign convention: the entry of largest magnitude in each component
    // is positive, so signs cannot flip between runs or platforms.
    for (std::size_t k = 0; k < a.n_components(); ++k) {
        double biggest = 0.0;
        for (std::size_t c = 0; c < 5; ++c)
            if (std::abs(a.components(k, c)) > std::abs(biggest))
                biggest = a.components(k, c);
        CHECK(biggest > 0.0);
    }
}

} // TEST_SUITE("features")
