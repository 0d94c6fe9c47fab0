// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "zscan/classify.hpp"
#include "zscan/error.hpp"
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

// Two spherical Gaussian blobs in d dimensions, n points per class.
struct Blobs {
    Matrix x;
    std::vector<int> y;
};

Blobs two_blobs(std::size_t n_per, std::size_t d, double gap, std::uint64_t seed) {
    Blobs b;
    b.x = Matrix(2 * n_per, d);
    b.y.resize(2 * n_per);
    Rng rng(seed);
    for (std::size_t r = 0; r < 2 * n_per; ++r) {
        const int cls = r < n_per ? 0 : 1;
        b.y[r] = cls;
        for (std::size_t c = 0; c < d; ++c)
            b.x(r, c) = rng.normal() + (cls == 1 ? gap : 0.0);
    }
    return b;
}

double accuracy(const std::vector<int>& truth, const std::vector<int>& pred) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (truth[i] == pred[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

// 3x3 symmetric inverse and determinant via cofactors, for the
// independent discriminant oracle below.
struct Inv3 {
    double m[3][3];
    double det;
};

Inv3 invert3(const Matrix& a) {
    Inv3 out{};
    const double c00 = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
    const double c01 = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
    const double c02 = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
    out.det = a(0, 0) * c00 + a(0, 1) * c01 + a(0, 2) * c02;
    const double inv = 1.0 / out.det;
    out.m[0][0] = c00 * inv;
    out.m[1][0] = c01 * inv;
    out.m[2][0] = c02 * inv;
    out.m[0][1] = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) * inv;
    out.m[1][1] = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) * inv;
    out.m[2][1] = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) * inv;
    out.m[0][2] = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) * inv;
    out.m[1][2] = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) * inv;
    out.m[2][2] = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) * inv;
    return out;
}

} // namespace

TEST_SUITE("classify") {

TEST_CASE("stratified split rounds the test count half up") {
    // 445 rows per class at 0.30 puts 134 in test, 311 in train.
    const std::size_t n_per = 445, k = 4;
    std::vector<int> labels;
    for (std::size_t c = 0; c < k; ++c)
        labels.insert(labels.end(), n_per, static_cast<int>(c));
    const SplitIndices s = split_train_test(labels, k, 0.30, 0);

    CHECK(s.test.size() == 134 * k);
    CHECK(s.train.size() == 311 * k);
    std::vector<std::size_t> test_per(k, 0), train_per(k, 0);
    for (std::size_t r : s.test) ++test_per[static_cast<std::size_t>(labels[r])];
    for (std::size_t r : s.train) ++train_per[static_cast<std::size_t>(labels[r])];
    for (std::size_t c = 0; c < k; ++c) {
        CHECK(test_per[c] == 134);
        CHECK(train_per[c] == 311);
    }

    // Disjoint and exhaustive.
    std::set<std::size_t> seen(s.train.begin(), s.train.end());
    for (std::size_t r : s.test) CHECK(seen.insert(r).second);
    CHECK(seen.size() == labels.size());
    CHECK(std::is_sorted(s.train.begin(), s.train.end()));
    CHECK(std::is_sorted(s.test.begin(), s.test.end()));
}

TEST_CASE("stratified split is seeded and validated") {
    std::vector<int> labels = {0, 0, 0, 0, 1, 1, 1, 1};
    const SplitIndices a = split_train_test(labels, 2, 0.5, 7);
    const SplitIndices b = split_train_test(labels, 2, 0.5, 7);
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);

    CHECK(thrown_kind([&] { split_train_test(labels, 2, 0.0, 0); }) == "ConfigError");
    CHECK(thrown_kind([&] { split_train_test(labels, 2, 1.0, 0); }) == "ConfigError");
    std::vector<int> lone = {0, 0, 1};
    CHECK(thrown_kind([&] { split_train_test(lone, 2, 0.5, 0); }) == "TooFewPerClass");
}

TEST_CASE("quadratic discriminant matches a direct density oracle") {
    const std::size_t n_per = 200, d = 3;
    const Blobs train = two_blobs(n_per, d, 4.0, derive_seed(21, "qda-train"));
    const Blobs test = two_blobs(120, d, 4.0, derive_seed(21, "qda-test"));
    const double lambda = 1e-3;
    const QdaModel model = train_qda(train.x, train.y, 2, lambda);
    const std::vector<int> pred = qda_predict(model, test.x);
    CHECK(accuracy(test.y, pred) >= 0.99);

    // Oracle: recompute the shrunk covariance per class with plain loops,
    // invert by cofactors and evaluate log prior - (logdet + mahal) / 2.
    std::vector<std::vector<double>> means(2, std::vector<double>(d, 0.0));
    std::vector<Matrix> covs(2, Matrix(d, d, 0.0));
    std::vector<double> counts(2, 0.0);
    for (std::size_t r = 0; r < train.x.rows(); ++r)
        counts[static_cast<std::size_t>(train.y[r])] += 1.0;
    for (std::size_t r = 0; r < train.x.rows(); ++r) {
        const auto k = static_cast<std::size_t>(train.y[r]);
        for (std::size_t c = 0; c < d; ++c) means[k][c] += train.x(r, c) / counts[k];
    }
    for (std::size_t r = 0; r < train.x.rows(); ++r) {
        const auto k = static_cast<std::size_t>(train.y[r]);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                covs[k](i, j) += (train.x(r, i) - means[k][i]) *
                                 (train.x(r, j) - means[k][j]) / (counts[k] - 1.0);
    }
    for (std::size_t k = 0; k < 2; ++k) {
        double trace = 0.0;
        for (std::size_t i = 0; i < d; ++i) trace += covs[k](i, i);
        double scale = trace / static_cast<double>(d);
        if (!(scale > 0.0)) scale = 1.0;
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) covs[k](i, j) *= 1.0 - lambda;
            covs[k](i, i) += lambda * scale;
        }
    }
    std::size_t disagreements = 0;
    for (std::size_t r = 0; r < test.x.rows(); ++r) {
        double best = -1e300;
        int best_k = -1;
        for (std::size_t k = 0; k < 2; ++k) {
            const Inv3 inv = invert3(covs[k]);
            double mahal = 0.0;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    mahal += (test.x(r, i) - means[k][i]) * inv.m[i][j] *
                             (test.x(r, j) - means[k][j]);
            const double score = std::log(counts[k] / train.x.rows()) -
                                 0.5 * std::log(inv.det) - 0.5 * mahal;
            if (score > best) {
                best = score;
                best_k = static_cast<int>(k);
            }
        }
        if (best_k != pred[r]) ++disagreements;
    }
    CHECK(disagreements <= 1);
}

TEST_CASE("discriminant model stores the shrunk covariance") {
    const Blobs train = two_blobs(60, 3, 3.0, derive_seed(22, "qda-cov"));
    const QdaModel model = train_qda(train.x, train.y, 2, 1e-3);
    CHECK(model.priors[0] == doctest::Approx(0.5));
    CHECK(model.covariances[0].rows() == 3);
    // Cached log-determinant agrees with the cofactor expansion.
    const Inv3 inv = invert3(model.covariances[0]);
    CHECK(model.logdet[0] == doctest::Approx(std::log(inv.det)).epsilon(1e-9));
}

TEST_CASE("duplicated training points degrade to nearest mean") {
    // Zero within-class scatter: shrinkage makes both classes spherical,
    // so prediction is by distance to the class point.
    Matrix x(4, 2);
    x(0, 0) = 0.0; x(0, 1) = 0.0;
    x(1, 0) = 0.0; x(1, 1) = 0.0;
    x(2, 0) = 4.0; x(2, 1) = 0.0;
    x(3, 0) = 4.0; x(3, 1) = 0.0;
    const std::vector<int> y = {0, 0, 1, 1};
    const QdaModel model = train_qda(x, y, 2, 1e-3);
    Matrix probes(2, 2);
    probes(0, 0) = 0.5; probes(0, 1) = 0.5;
    probes(1, 0) = 3.0; probes(1, 1) = -1.0;
    CHECK(qda_predict(model, probes) == std::vector<int>{0, 1});
}

TEST_CASE("identity covariances reduce the discriminant to nearest mean") {
    QdaModel model;
    model.lambda = 0.0;
    model.n_classes = 2;
    model.priors = {0.5, 0.5};
    model.means = {{0.0, 0.0}, {3.0, 1.0}};
    Matrix eye(2, 2);
    eye(0, 0) = eye(1, 1) = 1.0;
    model.covariances = {eye, eye};
    model.chol = {eye, eye};
    model.logdet = {0.0, 0.0};
    Rng rng(derive_seed(23, "nearest-mean"));
    Matrix probes(50, 2);
    for (std::size_t r = 0; r < 50; ++r) {
        probes(r, 0) = rng.uniform(-2.0, 5.0);
        probes(r, 1) = rng.uniform(-2.0, 3.0);
    }
    const std::vector<int> pred = qda_predict(model, probes);
    for (std::size_t r = 0; r < 50; ++r) {
        const double d0 = probes(r, 0) * probes(r, 0) + probes(r, 1) * probes(r, 1);
        const double d1 = (probes(r, 0) - 3.0) * (probes(r, 0) - 3.0) +
                          (probes(r, 1) - 1.0) * (probes(r, 1) - 1.0);
        CHECK(pred[r] == (d0 <= d1 ? 0 : 1));
    }
}

TEST_CASE("equal means with different covariances form a quadratic boundary") {
    // Same center, one class stretched along x, the other along y. Points
    // far out on each axis belong to the class with variance there.
    const std::size_t n_per = 300;
    Matrix x(2 * n_per, 2);
    std::vector<int> y(2 * n_per);
    Rng rng(derive_seed(24, "quad-boundary"));
    for (std::size_t r = 0; r < n_per; ++r) {
        y[r] = 0;
        x(r, 0) = 3.0 * rng.normal();
        x(r, 1) = 0.4 * rng.normal();
    }
    for (std::size_t r = n_per; r < 2 * n_per; ++r) {
        y[r] = 1;
        x(r, 0) = 0.4 * rng.normal();
        x(r, 1) = 3.0 * rng.normal();
    }
    const QdaModel model = train_qda(x, y, 2, 1e-3);
    Matrix probes(4, 2);
    probes(0, 0) = 5.0;  probes(0, 1) = 0.0;
    probes(1, 0) = -5.0; probes(1, 1) = 0.0;
    probes(2, 0) = 0.0;  probes(2, 1) = 5.0;
    probes(3, 0) = 0.0;  probes(3, 1) = -5.0;
    CHECK(qda_predict(model, probes) == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("discriminant training validates its input") {
    const Blobs b = two_blobs(10, 2, 3.0, 1);
    CHECK(thrown_kind([&] { train_qda(b.x, b.y, 2, 1.0); }) == "ConfigError");
    Matrix one(3, 2);
    one(2, 0) = 1.0;
    const std::vector<int> y = {0, 0, 1};
    CHECK(thrown_kind([&] { train_qda(one, y, 2, 1e-3); }) == "TooFewPerClass");
    const QdaModel model = train_qda(b.x, b.y, 2, 1e-3);
    Matrix wide(2, 5);
    CHECK(thrown_kind([&] { qda_predict(model, wide); }) == "WidthMismatch");
}

TEST_CASE("svm separates a margin with the quadratic kernel") {
    // Two bands: x0 <= -2 and x0 >= 2, a few points each.
    Matrix x(10, 2);
    std::vector<int> y(10);
    Rng rng(derive_seed(25, "svm-sep"));
    for (std::size_t r = 0; r < 5; ++r) {
        x(r, 0) = -2.0 - rng.uniform01();
        x(r, 1) = rng.uniform(-1.0, 1.0);
        y[r] = 0;
        x(r + 5, 0) = 2.0 + rng.uniform01();
        x(r + 5, 1) = rng.uniform(-1.0, 1.0);
        y[r + 5] = 1;
    }
    SvmKernel kernel;
    kernel.kind = KernelKind::Poly2;
    kernel.coef = 1.0;
    const SvmModel model = train_svm(x, y, 2, kernel, 1.0, 1e-3);
    CHECK(accuracy(y, svm_predict(model, x)) == 1.0);
    REQUIRE(model.pairs.size() == 1);
    const SvmPairModel& pair = model.pairs[0];
    CHECK(pair.kkt_residual <= 1e-3);
    CHECK(pair.class_a == 0);
    CHECK(pair.class_b == 1);
    // Dual feasibility: |alpha_i * y_i| never exceeds the box.
    for (const double c : pair.coef) CHECK(std::abs(c) <= 1.0 + 1e-12);
    // Decision sign: positive on class_a's side.
    const std::vector<double> left = {-3.0, 0.0};
    const std::vector<double> right = {3.0, 0.0};
    CHECK(svm_pair_decision(model, pair, left) > 0.0);
    CHECK(svm_pair_decision(model, pair, right) < 0.0);
}

TEST_CASE("gaussian kernel solves the xor arrangement") {
    Matrix x(4, 2);
    x(0, 0) = 0.0; x(0, 1) = 0.0;
    x(1, 0) = 1.0; x(1, 1) = 1.0;
    x(2, 0) = 0.0; x(2, 1) = 1.0;
    x(3, 0) = 1.0; x(3, 1) = 0.0;
    const std::vector<int> y = {0, 0, 1, 1};
    SvmKernel kernel;
    kernel.kind = KernelKind::Gaussian;
    kernel.gamma = 1.0;
    const SvmModel model = train_svm(x, y, 2, kernel, 10.0, 1e-3);
    CHECK(svm_predict(model, x) == y);
    CHECK(model.pairs[0].kkt_residual <= 1e-3);
}

TEST_CASE("contradictory duplicates drive a multiplier to the box") {
    Matrix x(4, 1);
    x(0, 0) = 0.0;
    x(1, 0) = 0.0; // same point, other class
    x(2, 0) = 5.0;
    x(3, 0) = -5.0;
    const std::vector<int> y = {0, 1, 0, 1};
    SvmKernel kernel;
    kernel.kind = KernelKind::Gaussian;
    kernel.gamma = 0.5;
    const SvmModel model = train_svm(x, y, 2, kernel, 2.0, 1e-3);
    double max_alpha = 0.0;
    for (const double c : model.pairs[0].coef)
        max_alpha = std::max(max_alpha, std::abs(c));
    CHECK(max_alpha == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("svm training is deterministic and reports non-convergence") {
    const Blobs b = two_blobs(40, 2, 3.0, derive_seed(26, "svm-det"));
    SvmKernel kernel;
    kernel.kind = KernelKind::Gaussian;
    kernel.gamma = 0.7;
    const SvmModel m1 = train_svm(b.x, b.y, 2, kernel, 1.0, 1e-3);
    const SvmModel m2 = train_svm(b.x, b.y, 2, kernel, 1.0, 1e-3);
    REQUIRE(m1.pairs[0].coef.size() == m2.pairs[0].coef.size());
    for (std::size_t i = 0; i < m1.pairs[0].coef.size(); ++i)
        CHECK(m1.pairs[0].coef[i] == m2.pairs[0].coef[i]); // bitwise
    CHECK(m1.pairs[0].bias == m2.pairs[0].bias);
    CHECK(m1.pairs[0].iterations == m2.pairs[0].iterations);

    // A one-iteration budget cannot satisfy the xor arrangement.
    Matrix x(4, 2);
    x(0, 0) = 0.0; x(0, 1) = 0.0;
    x(1, 0) = 1.0; x(1, 1) = 1.0;
    x(2, 0) = 0.0; x(2, 1) = 1.0;
    x(3, 0) = 1.0; x(3, 1) = 0.0;
    const std::vector<int> y = {0, 0, 1, 1};
    CHECK(thrown_kind([&] { train_svm(x, y, 2, kernel, 10.0, 1e-3, 1); }) ==
          "NonConvergence");
}

TEST_CASE("one-vs-one trains a pair per unordered class pair") {
    // Four clusters at the corners of a square.
    const std::size_t n_per = 12;
    Matrix x(4 * n_per, 2);
    std::vector<int> y(4 * n_per);
    Rng rng(derive_seed(27, "ovo"));
    const double cx[4] = {0.0, 6.0, 0.0, 6.0};
    const double cy[4] = {0.0, 0.0, 6.0, 6.0};
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t i = 0; i < n_per; ++i) {
            const std::size_t r = k * n_per + i;
            x(r, 0) = cx[k] + 0.3 * rng.normal();
            x(r, 1) = cy[k] + 0.3 * rng.normal();
            y[r] = static_cast<int>(k);
        }
    }
    SvmKernel kernel;
    kernel.kind = KernelKind::Gaussian;
    kernel.gamma = 0.5;
    const SvmModel model = train_svm(x, y, 4, kernel, 1.0, 1e-3);
    REQUIRE(model.pairs.size() == 6);
    CHECK(model.pairs.front().class_a == 0);
    CHECK(model.pairs.front().class_b == 1);
    CHECK(model.pairs.back().class_a == 2);
    CHECK(model.pairs.back().class_b == 3);
    for (const auto& p : model.pairs) CHECK(p.class_a < p.class_b);
    CHECK(accuracy(y, svm_predict(model, x)) == 1.0);
}

TEST_CASE("svm rejects invalid configuration") {
    const Blobs b = two_blobs(5, 2, 3.0, 1);
    SvmKernel kernel;
    CHECK(thrown_kind([&] { train_svm(b.x, b.y, 2, kernel, 0.0, 1e-3); }) ==
          "ConfigError");
    CHECK(thrown_kind([&] { train_svm(b.x, b.y, 2, kernel, 1.0, 0.0); }) ==
          "ConfigError");
    kernel.gamma = 0.0;
    CHECK(thrown_kind([&] { train_svm(b.x, b.y, 2, kernel, 1.0, 1e-3); }) ==
          "ConfigError");
    const std::vector<int> ones(b.y.size(), 0);
    kernel.gamma = 1.0;
    CHECK(thrown_kind([&] { train_svm(b.x, ones, 1, kernel, 1.0, 1e-3); }) ==
          "SingleClass");
}

TEST_CASE("single full-width neighbor learner reproduces its training set") {
    const Blobs b = two_blobs(30, 4, 2.0, derive_seed(28, "knn-self"));
    const SubspaceKnnModel model =
        train_subspace_knn(b.x, b.y, 2, 1, b.x.cols(), 1, 0);
    CHECK(subspace_knn_predict(model, b.x) == b.y);
    CHECK(model.subspaces.size() == 1);
    CHECK(model.subspaces[0].size() == 4);
}

TEST_CASE("subspace default dimension is half the features rounded up") {
    const Blobs b = two_blobs(20, 5, 2.0, derive_seed(29, "knn-dim"));
    const SubspaceKnnModel model = train_subspace_knn(b.x, b.y, 2, 3, 0, 1, 0);
    CHECK(model.subspace_dim == 3);
    for (const auto& sub : model.subspaces) {
        CHECK(sub.size() == 3);
        CHECK(std::is_sorted(sub.begin(), sub.end()));
        std::set<std::size_t> uniq(sub.begin(), sub.end());
        CHECK(uniq.size() == 3);
        for (const std::size_t c : sub) CHECK(c < 5);
    }
}

TEST_CASE("neighbor ensembles are seeded deterministically") {
    const Blobs b = two_blobs(25, 6, 1.5, derive_seed(30, "knn-det"));
    const SubspaceKnnModel a = train_subspace_knn(b.x, b.y, 2, 8, 3, 1, 5);
    const SubspaceKnnModel c = train_subspace_knn(b.x, b.y, 2, 8, 3, 1, 5);
    CHECK(a.subspaces == c.subspaces);
    const Blobs probe = two_blobs(10, 6, 1.5, derive_seed(30, "knn-probe"));
    CHECK(subspace_knn_predict(a, probe.x) == subspace_knn_predict(c, probe.x));
}

TEST_CASE("voting across subspaces beats the average lone learner") {
    // Only the first two of six dimensions carry signal, so a lone
    // three-dimensional learner often looks at noise.
    const std::size_t n_per = 60;
    const auto make = [&](std::uint64_t seed) {
        Blobs b;
        b.x = Matrix(2 * n_per, 6);
        b.y.resize(2 * n_per);
        Rng rng(seed);
        for (std::size_t r = 0; r < 2 * n_per; ++r) {
            const int cls = r < n_per ? 0 : 1;
            b.y[r] = cls;
            for (std::size_t c = 0; c < 6; ++c)
                b.x(r, c) = rng.normal() + (cls == 1 && c < 2 ? 2.5 : 0.0);
        }
        return b;
    };
    const Blobs train = make(derive_seed(31, "knn-train"));
    const Blobs test = make(derive_seed(31, "knn-test"));

    double single_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SubspaceKnnModel lone = train_subspace_knn(train.x, train.y, 2, 1, 3, 1, seed);
        single_sum += accuracy(test.y, subspace_knn_predict(lone, test.x));
    }
    const SubspaceKnnModel ensemble = train_subspace_knn(train.x, train.y, 2, 31, 3, 1, 0);
    const double ens_acc = accuracy(test.y, subspace_knn_predict(ensemble, test.x));
    CHECK(ens_acc >= single_sum / 10.0);
}

TEST_CASE("neighbor training validates its configuration") {
    const Blobs b = two_blobs(10, 3, 2.0, 1);
    CHECK(thrown_kind([&] { train_subspace_knn(b.x, b.y, 2, 1, 7, 1, 0); }) ==
          "ConfigError");
    CHECK(thrown_kind([&] { train_subspace_knn(b.x, b.y, 2, 0, 2, 1, 0); }) ==
          "ConfigError");
    CHECK(thrown_kind([&] { train_subspace_knn(b.x, b.y, 2, 1, 2, 0, 0); }) ==
          "ConfigError");
}

TEST_CASE("fold assignment balances classes within one row") {
    const std::size_t n_per = 31;
    std::vector<int> y;
    for (int k = 0; k < 3; ++k) y.insert(y.end(), n_per, k);
    const std::vector<int> folds = stratified_folds(y, 3, 5, 2);
    REQUIRE(folds.size() == y.size());
    long counts[3][5] = {};
    for (std::size_t r = 0; r < y.size(); ++r) {
        REQUIRE(folds[r] >= 0);
        REQUIRE(folds[r] < 5);
        ++counts[y[r]][folds[r]];
    }
    for (int k = 0; k < 3; ++k) {
        long lo = n_per, hi = 0;
        for (int f = 0; f < 5; ++f) {
            lo = std::min(lo, counts[k][f]);
            hi = std::max(hi, counts[k][f]);
        }
        CHECK(hi - lo <= 1);
    }
    CHECK(stratified_folds(y, 3, 5, 2) == folds);
    CHECK(thrown_kind([&] { stratified_folds(y, 3, 1, 2); }) == "ConfigError");
    std::vector<int> small = {0, 0, 1, 1, 1};
    CHECK(thrown_kind([&] { stratified_folds(small, 2, 3, 2); }) == "TooFewPerClass");
}

TEST_CASE("cross validation aggregates the fold reports") {
    const Blobs b = two_blobs(40, 3, 3.5, derive_seed(32, "cv"));
    const std::vector<std::string> classes = {"low", "high"};
    const Trainer trainer = [](const Matrix& x, std::span<const int> y) {
        return ClassifierModel(train_qda(x, y, 2, 1e-3));
    };
    const CvResult cv = cross_validate(b.x, b.y, classes, 4, trainer, 3);
    REQUIRE(cv.fold_reports.size() == 4);

    MetricSet mean;
    for (const EvaluationReport& r : cv.fold_reports) {
        mean.precision += r.metrics.precision / 4.0;
        mean.recall += r.metrics.recall / 4.0;
        mean.specificity += r.metrics.specificity / 4.0;
        mean.accuracy_macro_ovr += r.metrics.accuracy_macro_ovr / 4.0;
        mean.accuracy_overall += r.metrics.accuracy_overall / 4.0;
        mean.f1 += r.metrics.f1 / 4.0;
    }
    CHECK(cv.aggregate.precision == doctest::Approx(mean.precision).epsilon(1e-12));
    CHECK(cv.aggregate.recall == doctest::Approx(mean.recall).epsilon(1e-12));
    CHECK(cv.aggregate.f1 == doctest::Approx(mean.f1).epsilon(1e-12));
    CHECK(cv.aggregate.accuracy_overall ==
          doctest::Approx(mean.accuracy_overall).epsilon(1e-12));
    // Separated blobs cross-validate cleanly.
    CHECK(cv.aggregate.accuracy_overall >= 0.95);

    // Each fold evaluates exactly its held-out rows.
    std::size_t eval_rows = 0;
    for (const EvaluationReport& r : cv.fold_reports) eval_rows += r.cm.total();
    CHECK(eval_rows == b.y.size());

    CHECK(thrown_kind([&] { cross_validate(b.x, b.y, classes, 1, trainer, 3); }) ==
          "ConfigError");
}

TEST_CASE("predict dispatches on the stored model alternative") {
    const Blobs b = two_blobs(15, 2, 3.0, derive_seed(33, "variant"));
    const ClassifierModel qda = train_qda(b.x, b.y, 2, 1e-3);
    SvmKernel kernel;
    kernel.gamma = 1.0;
    const ClassifierModel svm = train_svm(b.x, b.y, 2, kernel, 1.0, 1e-3);
    const ClassifierModel knn = train_subspace_knn(b.x, b.y, 2, 5, 2, 1, 0);
    CHECK(predict_matrix(qda, b.x).size() == b.y.size());
    CHECK(predict_matrix(svm, b.x).size() == b.y.size());
    CHECK(predict_matrix(knn, b.x) == b.y);
}

} // TEST_SUITE("classify")
