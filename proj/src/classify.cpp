// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#include "zscan/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "zscan/error.hpp"
#include "zscan/linalg.hpp"
#include "zscan/parallel.hpp"
#include "zscan/random.hpp"

namespace zscan {

namespace {

void shuffle_indices(std::vector<std::size_t>& idx, Rng& rng) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        const std::size_t j = rng.below(i);
        std::swap(idx[i - 1], idx[j]);
    }
}

std::vector<std::vector<std::size_t>> rows_by_class(std::span<const int> y,
                                                    std::size_t n_classes) {
    std::vector<std::vector<std::size_t>> per_class(n_classes);
    for (std::size_t i = 0; i < y.size(); ++i) {
        const int l = y[i];
        if (l < 0 || static_cast<std::size_t>(l) >= n_classes)
            raise(Errc::InvalidArgument, "UnknownLabel", "label index out of range");
        per_class[static_cast<std::size_t>(l)].push_back(i);
    }
    return per_class;
}

} // namespace

SplitIndices split_train_test(std::span<const int> labels, std::size_t n_classes,
                              double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0) || !(test_fraction < 1.0))
        raise(Errc::Config, "ConfigError", "test_fraction must be in (0, 1)");
    auto per_class = rows_by_class(labels, n_classes);

    SplitIndices out;
    for (std::size_t k = 0; k < n_classes; ++k) {
        auto& rows = per_class[k];
        if (rows.empty()) continue;
        if (rows.size() < 2)
            raise(Errc::InvalidArgument, "TooFewPerClass",
                  "class " + std::to_string(k) + " has fewer than 2 observations");
        Rng rng(derive_seed(seed, "split", k));
        shuffle_indices(rows, rng);
        // Round half up: floor(f*n + 0.5).
        const std::size_t n_test = static_cast<std::size_t>(
            std::floor(test_fraction * static_cast<double>(rows.size()) + 0.5));
        for (std::size_t i = 0; i < rows.size(); ++i)
            (i < n_test ? out.test : out.train).push_back(rows[i]);
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

QdaModel train_qda(const Matrix& x, std::span<const int> y, std::size_t n_classes,
                   double lambda) {
    if (!(lambda >= 0.0) || !(lambda < 1.0))
        raise(Errc::Config, "ConfigError", "lambda must be in [0, 1)");
    if (x.rows() != y.size())
        raise(Errc::InvalidArgument, "LengthMismatch", "one label per row required");
    const std::size_t d = x.cols();
    auto per_class = rows_by_class(y, n_classes);

    QdaModel model;
    model.lambda = lambda;
    model.n_classes = n_classes;
    model.priors.resize(n_classes);
    model.means.resize(n_classes);
    model.covariances.resize(n_classes);
    model.chol.resize(n_classes);
    model.logdet.resize(n_classes);

    for (std::size_t k = 0; k < n_classes; ++k) {
        const auto& rows = per_class[k];
        if (rows.size() < 2)
            raise(Errc::InvalidArgument, "TooFewPerClass",
                  "class " + std::to_string(k) + " needs at least 2 rows");
        const double nk = static_cast<double>(rows.size());
        model.priors[k] = nk / static_cast<double>(x.rows());

        std::vector<double>& mean = model.means[k];
        mean.assign(d, 0.0);
        for (std::size_t r : rows) {
            auto row = x.row(r);
            for (std::size_t c = 0; c < d; ++c) mean[c] += row[c];
        }
        for (double& v : mean) v /= nk;

        Matrix cov(d, d, 0.0);
        for (std::size_t r : rows) {
            auto row = x.row(r);
            for (std::size_t i = 0; i < d; ++i) {
                const double di = row[i] - mean[i];
                for (std::size_t j = i; j < d; ++j)
                    cov(i, j) += di * (row[j] - mean[j]);
            }
        }
        const double scale = 1.0 / (nk - 1.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j) {
                cov(i, j) *= scale;
                cov(j, i) = cov(i, j);
            }

        double trace = 0.0;
        for (std::size_t i = 0; i < d; ++i) trace += cov(i, i);
        double shrink_scale = trace / static_cast<double>(d);
        if (!(shrink_scale > 0.0)) shrink_scale = 1.0;
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) cov(i, j) *= 1.0 - lambda;
            cov(i, i) += lambda * shrink_scale;
        }

        model.covariances[k] = cov;
        model.chol[k] = cholesky(cov); // throws SingularCovariance if unusable
        model.logdet[k] = cholesky_logdet(model.chol[k]);
    }
    return model;
}

std::vector<int> qda_predict(const QdaModel& model, const Matrix& x) {
    const std::size_t d = x.cols();
    if (model.n_classes == 0 || model.means.empty())
        raise(Errc::InvalidArgument, "UnknownModelTag", "QDA model is empty");
    if (d != model.means[0].size())
        raise(Errc::InvalidArgument, "WidthMismatch",
              "matrix width does not match the QDA model");

    std::vector<int> out(x.rows(), 0);
    parallel_for(x.rows(), [&](std::size_t begin, std::size_t end) {
        std::vector<double> diff(d);
        for (std::size_t r = begin; r < end; ++r) {
            auto row = x.row(r);
            double best = -std::numeric_limits<double>::infinity();
            int best_k = 0;
            for (std::size_t k = 0; k < model.n_classes; ++k) {
                for (std::size_t c = 0; c < d; ++c)
                    diff[c] = row[c] - model.means[k][c];
                const std::vector<double> z = forward_solve(model.chol[k], diff);
                double mahal = 0.0;
                for (double v : z) mahal += v * v;
                const double score = std::log(model.priors[k]) -
                                     0.5 * model.logdet[k] - 0.5 * mahal;
                if (score > best) {
                    best = score;
                    best_k = static_cast<int>(k);
                }
            }
            out[r] = best_k;
        }
    });
    return out;
}

double kernel_eval(const SvmKernel& k, std::span<const double> a,
                   std::span<const double> b) {
    switch (k.kind) {
        case KernelKind::Gaussian: {
            double dist = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double d = a[i] - b[i];
                dist += d * d;
            }
            return std::exp(-k.gamma * dist);
        }
        case KernelKind::Poly2:
        case KernelKind::Poly3: {
            double dot = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
            const double base = dot + k.coef;
            return k.kind == KernelKind::Poly2 ? base * base : base * base * base;
        }
    }
    return 0.0;
}

double default_gaussian_gamma(const Matrix& x) {
    const std::size_t total = x.rows() * x.cols();
    if (total == 0 || x.cols() == 0) return 1.0;
    double mean = 0.0;
    for (double v : x.data()) mean += v;
    mean /= static_cast<double>(total);
    double var = 0.0;
    for (double v : x.data()) {
        const double d = v - mean;
        var += d * d;
    }
    var /= static_cast<double>(total);
    if (!(var > 0.0)) var = 1.0;
    return 1.0 / (static_cast<double>(x.cols()) * var);
}

namespace {

// Binary SMO with maximal-violating-pair working-set selection.
// Minimizes 1/2 a^T Q a - e^T a subject to 0 <= a <= C, y^T a = 0,
// with Q_ij = y_i y_j K_ij. Follows the standard two-variable analytic
// update with box clipping.
struct SmoResult {
    std::vector<double> alpha;
    double bias = 0.0;
    double kkt_residual = 0.0;
    std::size_t iterations = 0;
};

SmoResult solve_smo(const Matrix& x, std::span<const std::size_t> rows,
                    std::span<const double> y, const SvmKernel& kernel, double c,
                    double tol, std::size_t max_iter) {
    const std::size_t n = rows.size();
    constexpr double tau = 1e-12;

    // Dense kernel matrix; pair sizes in this project stay in the low
    // thousands, so the O(n^2) memory is the fast and simple choice.
    Matrix q(n, n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            auto xi = x.row(rows[i]);
            for (std::size_t j = i; j < n; ++j)
                q(i, j) = kernel_eval(kernel, xi, x.row(rows[j]));
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) q(i, j) = q(j, i);

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0); // G_i = (Q a)_i - 1

    if (max_iter == 0) max_iter = std::max<std::size_t>(10000, 300 * n);

    SmoResult res;
    double m_up = 0.0, m_low = 0.0;
    std::size_t iter = 0;
    for (; iter < max_iter; ++iter) {
        // Working-set selection over index sets
        //   I_up:  a_i can grow along +y_i, I_low: a_i can shrink along -y_i.
        std::size_t i_up = n, i_low = n;
        m_up = -std::numeric_limits<double>::infinity();
        m_low = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -y[t] * grad[t];
            const bool pos = y[t] > 0.0;
            if ((pos && alpha[t] < c) || (!pos && alpha[t] > 0.0)) {
                if (v > m_up) {
                    m_up = v;
                    i_up = t;
                }
            }
            if ((pos && alpha[t] > 0.0) || (!pos && alpha[t] < c)) {
                if (v < m_low) {
                    m_low = v;
                    i_low = t;
                }
            }
        }
        if (i_up == n || i_low == n || m_up - m_low <= tol) break;

        const std::size_t i = i_up, j = i_low;
        const double old_ai = alpha[i];
        const double old_aj = alpha[j];

        // Two-variable analytic step along the equality constraint, then
        // box clipping. The curvature K_ii + K_jj - 2K_ij is the same for
        // both label layouts once expressed in kernel space.
        double quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
        if (quad <= 0.0) quad = tau;
        if (y[i] * y[j] < 0.0) {
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = diff; }
            } else {
                if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = -diff; }
            }
            if (diff > 0.0) {
                if (alpha[i] > c) { alpha[i] = c; alpha[j] = c - diff; }
            } else {
                if (alpha[j] > c) { alpha[j] = c; alpha[i] = c + diff; }
            }
        } else {
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) { alpha[i] = c; alpha[j] = sum - c; }
            } else {
                if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = sum; }
            }
            if (sum > c) {
                if (alpha[j] > c) { alpha[j] = c; alpha[i] = sum - c; }
            } else {
                if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = sum; }
            }
        }

        const double dai = (alpha[i] - old_ai) * y[i];
        const double daj = (alpha[j] - old_aj) * y[j];
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += y[t] * (q(t, i) * dai + q(t, j) * daj);
    }

    if (iter >= max_iter && m_up - m_low > tol)
        raise(Errc::NonConvergence, "NonConvergence",
              "SMO stopped after " + std::to_string(iter) +
                  " iterations with KKT residual " + std::to_string(m_up - m_low));

    res.alpha = std::move(alpha);
    res.kkt_residual = std::max(0.0, m_up - m_low);
    res.bias = (m_up + m_low) / 2.0;
    res.iterations = iter;
    return res;
}

} // namespace

SvmModel train_svm(const Matrix& x, std::span<const int> y, std::size_t n_classes,
                   SvmKernel kernel, double box_c, double tol, std::size_t max_iter) {
    if (!(box_c > 0.0))
        raise(Errc::Config, "ConfigError", "box constraint C must be positive");
    if (!(tol > 0.0))
        raise(Errc::Config, "ConfigError", "tolerance must be positive");
    if (kernel.kind == KernelKind::Gaussian && !(kernel.gamma > 0.0))
        raise(Errc::Config, "ConfigError", "gaussian gamma must be positive");
    if (n_classes < 2)
        raise(Errc::InvalidArgument, "SingleClass", "SVM needs at least 2 classes");
    auto per_class = rows_by_class(y, n_classes);

    SvmModel model;
    model.kernel = kernel;
    model.box_c = box_c;
    model.tol = tol;
    model.n_classes = n_classes;

    for (std::size_t a = 0; a < n_classes; ++a) {
        for (std::size_t b = a + 1; b < n_classes; ++b) {
            if (per_class[a].empty() || per_class[b].empty())
                raise(Errc::InvalidArgument, "SingleClass",
                      "classes " + std::to_string(a) + " and " + std::to_string(b) +
                          " must both have training rows");
            std::vector<std::size_t> rows;
            std::vector<double> sign;
            rows.reserve(per_class[a].size() + per_class[b].size());
            for (std::size_t r : per_class[a]) {
                rows.push_back(r);
                sign.push_back(1.0);
            }
            for (std::size_t r : per_class[b]) {
                rows.push_back(r);
                sign.push_back(-1.0);
            }

            SmoResult res = solve_smo(x, rows, sign, kernel, box_c, tol, max_iter);

            SvmPairModel pair;
            pair.class_a = static_cast<int>(a);
            pair.class_b = static_cast<int>(b);
            pair.bias = res.bias;
            pair.kkt_residual = res.kkt_residual;
            pair.iterations = res.iterations;
            std::vector<std::size_t> sv_rows;
            for (std::size_t t = 0; t < rows.size(); ++t) {
                if (res.alpha[t] > 1e-12 * box_c) {
                    sv_rows.push_back(rows[t]);
                    pair.coef.push_back(res.alpha[t] * sign[t]);
                }
            }
            pair.support_vectors = x.select_rows(sv_rows);
            model.pairs.push_back(std::move(pair));
        }
    }
    return model;
}

double svm_pair_decision(const SvmModel& model, const SvmPairModel& pair,
                         std::span<const double> row) {
    double acc = pair.bias;
    for (std::size_t s = 0; s < pair.coef.size(); ++s)
        acc += pair.coef[s] * kernel_eval(model.kernel, pair.support_vectors.row(s), row);
    return acc;
}

std::vector<int> svm_predict(const SvmModel& model, const Matrix& x) {
    if (model.pairs.empty())
        raise(Errc::InvalidArgument, "UnknownModelTag", "SVM model has no pairs");
    if (!model.pairs[0].coef.empty() &&
        x.cols() != model.pairs[0].support_vectors.cols())
        raise(Errc::InvalidArgument, "WidthMismatch",
              "matrix width does not match the SVM model");

    std::vector<int> out(x.rows(), 0);
    parallel_for(x.rows(), [&](std::size_t begin, std::size_t end) {
        std::vector<int> votes(model.n_classes);
        std::vector<double> magnitude(model.n_classes);
        for (std::size_t r = begin; r < end; ++r) {
            std::fill(votes.begin(), votes.end(), 0);
            std::fill(magnitude.begin(), magnitude.end(), 0.0);
            auto row = x.row(r);
            for (const SvmPairModel& pair : model.pairs) {
                const double f = svm_pair_decision(model, pair, row);
                const int winner = f >= 0.0 ? pair.class_a : pair.class_b;
                votes[static_cast<std::size_t>(winner)]++;
                magnitude[static_cast<std::size_t>(winner)] += std::abs(f);
            }
            std::size_t best = 0;
            for (std::size_t k = 1; k < model.n_classes; ++k) {
                if (votes[k] > votes[best] ||
                    (votes[k] == votes[best] && magnitude[k] > magnitude[best]))
                    best = k;
            }
            out[r] = static_cast<int>(best);
        }
    });
    return out;
}

SubspaceKnnModel train_subspace_knn(const Matrix& x, std::span<const int> y,
                                    std::size_t n_classes, std::size_t n_learners,
                                    std::size_t subspace_dim, std::size_t k,
                                    std::uint64_t seed) {
    const std::size_t d = x.cols();
    if (x.rows() != y.size())
        raise(Errc::InvalidArgument, "LengthMismatch", "one label per row required");
    if (x.rows() == 0)
        raise(Errc::InvalidArgument, "TooFewPoints", "need at least 1 training row");
    if (subspace_dim == 0) subspace_dim = (d + 1) / 2;
    if (d < 1 || subspace_dim < 1 || subspace_dim > d)
        raise(Errc::Config, "ConfigError",
              "subspace_dim must satisfy 1 <= subspace_dim <= feature count");
    if (n_learners < 1)
        raise(Errc::Config, "ConfigError", "n_learners must be at least 1");
    if (k < 1)
        raise(Errc::Config, "ConfigError", "k must be at least 1");
    rows_by_class(y, n_classes); // label range validation

    SubspaceKnnModel model;
    model.n_learners = n_learners;
    model.subspace_dim = subspace_dim;
    model.k = k;
    model.seed = seed;
    model.n_classes = n_classes;
    model.train_x = x;
    model.train_y.assign(y.begin(), y.end());

    std::vector<std::size_t> pool(d);
    for (std::size_t l = 0; l < n_learners; ++l) {
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        Rng rng(derive_seed(seed, "subspace", l));
        // Partial Fisher-Yates: first subspace_dim entries become the draw.
        for (std::size_t i = 0; i < subspace_dim; ++i) {
            const std::size_t j = i + rng.below(d - i);
            std::swap(pool[i], pool[j]);
        }
        std::vector<std::size_t> subset(pool.begin(),
                                        pool.begin() + static_cast<std::ptrdiff_t>(subspace_dim));
        std::sort(subset.begin(), subset.end());
        model.subspaces.push_back(std::move(subset));
    }
    return model;
}

std::vector<int> subspace_knn_predict(const SubspaceKnnModel& model, const Matrix& x) {
    if (x.cols() != model.train_x.cols())
        raise(Errc::InvalidArgument, "WidthMismatch",
              "matrix width does not match the KNN model");
    const std::size_t n_train = model.train_x.rows();
    const std::size_t k = std::min(model.k, n_train);

    std::vector<int> out(x.rows(), 0);
    parallel_for(x.rows(), [&](std::size_t begin, std::size_t end) {
        std::vector<std::pair<double, std::size_t>> best(k);
        std::vector<int> learner_votes(model.n_classes);
        std::vector<int> ensemble_votes(model.n_classes);
        for (std::size_t r = begin; r < end; ++r) {
            auto row = x.row(r);
            std::fill(ensemble_votes.begin(), ensemble_votes.end(), 0);
            for (const auto& subset : model.subspaces) {
                std::size_t filled = 0;
                for (std::size_t t = 0; t < n_train; ++t) {
                    auto train_row = model.train_x.row(t);
                    double dist = 0.0;
                    for (std::size_t c : subset) {
                        const double d = row[c] - train_row[c];
                        dist += d * d;
                    }
                    const std::pair<double, std::size_t> cand{dist, t};
                    // Insertion sort into the running k-best; ties resolve
                    // to the lower training-row index via pair ordering.
                    if (filled < k) {
                        best[filled++] = cand;
                        for (std::size_t s = filled - 1; s > 0 && best[s] < best[s - 1]; --s)
                            std::swap(best[s], best[s - 1]);
                    } else if (cand < best[k - 1]) {
                        best[k - 1] = cand;
                        for (std::size_t s = k - 1; s > 0 && best[s] < best[s - 1]; --s)
                            std::swap(best[s], best[s - 1]);
                    }
                }
                std::fill(learner_votes.begin(), learner_votes.end(), 0);
                for (std::size_t s = 0; s < filled; ++s)
                    learner_votes[static_cast<std::size_t>(
                        model.train_y[best[s].second])]++;
                std::size_t vote = 0;
                for (std::size_t cls = 1; cls < model.n_classes; ++cls)
                    if (learner_votes[cls] > learner_votes[vote]) vote = cls;
                ensemble_votes[vote]++;
            }
            std::size_t final_vote = 0;
            for (std::size_t cls = 1; cls < model.n_classes; ++cls)
                if (ensemble_votes[cls] > ensemble_votes[final_vote]) final_vote = cls;
            out[r] = static_cast<int>(final_vote);
        }
    });
    return out;
}

std::vector<int> predict_matrix(const ClassifierModel& model, const Matrix& x) {
    return std::visit(
        [&](const auto& m) -> std::vector<int> {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, QdaModel>) return qda_predict(m, x);
            else if constexpr (std::is_same_v<T, SvmModel>) return svm_predict(m, x);
            else return subspace_knn_predict(m, x);
        },
        model);
}

std::vector<int> stratified_folds(std::span<const int> y, std::size_t n_classes,
                                  std::size_t folds, std::uint64_t seed) {
    if (folds < 2)
        raise(Errc::Config, "ConfigError", "folds must be at least 2");
    auto per_class = rows_by_class(y, n_classes);
    for (std::size_t k = 0; k < n_classes; ++k)
        if (!per_class[k].empty() && per_class[k].size() < folds)
            raise(Errc::InvalidArgument, "TooFewPerClass",
                  "class " + std::to_string(k) + " has fewer rows than folds");

    std::vector<int> fold_of_row(y.size(), -1);
    for (std::size_t k = 0; k < n_classes; ++k) {
        auto& rows = per_class[k];
        Rng rng(derive_seed(seed, "folds", k));
        shuffle_indices(rows, rng);
        for (std::size_t i = 0; i < rows.size(); ++i)
            fold_of_row[rows[i]] = static_cast<int>(i % folds);
    }
    return fold_of_row;
}

CvResult cross_validate(const Matrix& x, std::span<const int> y,
                        const std::vector<std::string>& classes, std::size_t folds,
                        const Trainer& trainer, std::uint64_t seed) {
    const std::vector<int> fold_of_row = stratified_folds(y, classes.size(), folds, seed);

    CvResult result;
    double sums[6] = {0, 0, 0, 0, 0, 0};
    for (std::size_t f = 0; f < folds; ++f) {
        std::vector<std::size_t> train_rows, test_rows;
        for (std::size_t i = 0; i < y.size(); ++i)
            (fold_of_row[i] == static_cast<int>(f) ? test_rows : train_rows).push_back(i);

        Matrix xtr = x.select_rows(train_rows);
        Matrix xte = x.select_rows(test_rows);
        std::vector<int> ytr(train_rows.size()), yte(test_rows.size());
        for (std::size_t i = 0; i < train_rows.size(); ++i) ytr[i] = y[train_rows[i]];
        for (std::size_t i = 0; i < test_rows.size(); ++i) yte[i] = y[test_rows[i]];

        const ClassifierModel model = trainer(xtr, ytr);
        const std::vector<int> pred = predict_matrix(model, xte);
        EvaluationReport report = evaluate_labels(yte, pred, classes);
        report.split = "cv_fold_" + std::to_string(f);
        report.seed = seed;

        sums[0] += report.metrics.precision;
        sums[1] += report.metrics.recall;
        sums[2] += report.metrics.specificity;
        sums[3] += report.metrics.accuracy_macro_ovr;
        sums[4] += report.metrics.accuracy_overall;
        sums[5] += report.metrics.f1;
        result.fold_reports.push_back(std::move(report));
    }
    const double nf = static_cast<double>(folds);
    result.aggregate.precision = sums[0] / nf;
    result.aggregate.recall = sums[1] / nf;
    result.aggregate.specificity = sums[2] / nf;
    result.aggregate.accuracy_macro_ovr = sums[3] / nf;
    result.aggregate.accuracy_overall = sums[4] / nf;
    result.aggregate.f1 = sums[5] / nf;
    return result;
}

} // namespace zscan
