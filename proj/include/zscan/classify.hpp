// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "zscan/matrix.hpp"
#include "zscan/metrics.hpp"

namespace zscan {

struct SplitIndices {
    std::vector<std::size_t> train; // ascending
    std::vector<std::size_t> test;  // ascending
};

// Stratified split: per class, round(test_fraction * n_class) rows go to
// test (round half up) after a seeded within-class shuffle. Disjoint and
// exhaustive. test_fraction must be in (0, 1); each class needs >= 2 rows.
SplitIndices split_train_test(std::span<const int> labels, std::size_t n_classes,
                              double test_fraction, std::uint64_t seed);

// Quadratic discriminant with shrinkage: each class covariance becomes
// (1 - lambda) * S + lambda * scale * I where scale = trace(S)/d, floored
// at 1 so an all-duplicate class (S = 0) still regularizes to a usable
// spherical covariance and prediction degrades to nearest-mean.
struct QdaModel {
    double lambda = 1e-3;
    std::size_t n_classes = 0;
    std::vector<double> priors;
    std::vector<std::vector<double>> means;
    std::vector<Matrix> covariances;   // regularized, per class
    std::vector<Matrix> chol;          // cached lower factors
    std::vector<double> logdet;        // cached log-determinants
};

QdaModel train_qda(const Matrix& x, std::span<const int> y, std::size_t n_classes,
                   double lambda = 1e-3);
std::vector<int> qda_predict(const QdaModel& model, const Matrix& x);

enum class KernelKind { Gaussian, Poly2, Poly3 };

struct SvmKernel {
    KernelKind kind = KernelKind::Gaussian;
    double gamma = 1.0; // gaussian only
    double coef = 1.0;  // polynomial offset: (x.y + coef)^degree
};

double kernel_eval(const SvmKernel& k, std::span<const double> a,
                   std::span<const double> b);

// Heuristic gaussian width 1/(d * var(X)) over all matrix entries.
double default_gaussian_gamma(const Matrix& x);

// One binary one-vs-one subproblem after training: class_a maps to +1.
struct SvmPairModel {
    int class_a = 0;
    int class_b = 0;
    Matrix support_vectors;
    std::vector<double> coef; // alpha_i * y_i, aligned with support rows
    double bias = 0.0;
    double kkt_residual = 0.0;
    std::size_t iterations = 0;
};

struct SvmModel {
    SvmKernel kernel;
    double box_c = 1.0;
    double tol = 1e-3;
    std::size_t n_classes = 0;
    std::vector<SvmPairModel> pairs; // ordered (a, b), a < b
};

// Trains every class pair with a sequential-minimal-optimization dual
// solver (maximal-violating-pair selection) until the KKT residual drops
// to tol. max_iter 0 means an automatic budget; exceeding it raises
// Errc::NonConvergence with the residual in the message.
SvmModel train_svm(const Matrix& x, std::span<const int> y, std::size_t n_classes,
                   SvmKernel kernel, double box_c = 1.0, double tol = 1e-3,
                   std::size_t max_iter = 0);

// Pairwise voting; vote-count ties break by summed |decision| over won
// pairs, then by lower class index.
std::vector<int> svm_predict(const SvmModel& model, const Matrix& x);

// Decision value of one trained pair on a row (positive means class_a).
double svm_pair_decision(const SvmModel& model, const SvmPairModel& pair,
                         std::span<const double> row);

// Random-subspace ensemble of k-nearest-neighbor learners.
struct SubspaceKnnModel {
    std::size_t n_learners = 30;
    std::size_t subspace_dim = 0;
    std::size_t k = 1;
    std::uint64_t seed = 0;
    std::size_t n_classes = 0;
    std::vector<std::vector<std::size_t>> subspaces; // per learner, ascending
    Matrix train_x;
    std::vector<int> train_y;
};

// subspace_dim 0 selects the default ceil(d / 2). Each learner draws its
// feature subset from a stream derived from (seed, learner index).
SubspaceKnnModel train_subspace_knn(const Matrix& x, std::span<const int> y,
                                    std::size_t n_classes,
                                    std::size_t n_learners = 30,
                                    std::size_t subspace_dim = 0, std::size_t k = 1,
                                    std::uint64_t seed = 0);

// Per learner: k nearest by Euclidean distance in the learner's subspace,
// distance ties broken by lower training-row index; the learner votes the
// plurality label of those k (ties by class order). Ensemble prediction is
// the plurality over learners, ties again by class order.
std::vector<int> subspace_knn_predict(const SubspaceKnnModel& model, const Matrix& x);

using ClassifierModel = std::variant<QdaModel, SvmModel, SubspaceKnnModel>;

std::vector<int> predict_matrix(const ClassifierModel& model, const Matrix& x);

// Seeded stratified fold assignment: per class, shuffled rows distributed
// round-robin, so fold class counts differ by at most one.
std::vector<int> stratified_folds(std::span<const int> y, std::size_t n_classes,
                                  std::size_t folds, std::uint64_t seed);

struct CvResult {
    std::vector<EvaluationReport> fold_reports;
    MetricSet aggregate; // unweighted mean over folds
};

using Trainer = std::function<ClassifierModel(const Matrix&, std::span<const int>)>;

// Trains on folds-1 parts and evaluates on the held-out fold, once per
// fold. Every class must have at least `folds` rows ("TooFewPerClass").
// The deliverable model is retrained by the caller on the full split;
// this reports generalization only.
CvResult cross_validate(const Matrix& x, std::span<const int> y,
                        const std::vector<std::string>& classes, std::size_t folds,
                        const Trainer& trainer, std::uint64_t seed);

} // namespace zscan
