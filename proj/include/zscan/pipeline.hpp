// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "zscan/classify.hpp"
#include "zscan/features.hpp"
#include "zscan/freqselect.hpp"
#include "zscan/metrics.hpp"
#include "zscan/rf.hpp"

namespace zscan {

// ---- frequency selection over a dataset ----

struct SelectOptions {
    Representation representation = Representation::ImpedanceMagnitude;
    SelectionPolicy policy{};
    double max_corr = 0.90;
    double clamp_ohms = 1e6;
    // Selection normally sees only the seeded training split so the
    // held-out rows stay untouched end to end; whole_dataset overrides.
    bool whole_dataset = false;
    double test_fraction = 0.30;
    std::uint64_t seed = 0;
};

FrequencySelection select_pipeline(const LabeledDataset& ds, const SelectOptions& opt);

// Independent audit of a selection: recomputes |pearson| for every kept
// column pair with a plain two-pass loop (none of the incremental state
// the pruner uses) over the rows the selection declares, and returns the
// maximum. Zero-variance pairs count as 0.
double verify_selection(const LabeledDataset& ds, const FrequencySelection& sel,
                        double clamp_ohms = 1e6);

// ---- training ----

enum class ModelTag { Qda, SvmGaussian, SvmQuadratic, SvmCubic, SubspaceKnn };

// Canonical tags: qda, svm-gauss, svm-quad, svm-cubic, subspace-knn.
ModelTag model_tag_from_name(std::string_view name);
std::string_view model_tag_name(ModelTag tag);
// Human-readable form for tables ("Quadratic Discriminant", ...).
std::string_view model_tag_display(ModelTag tag);

struct TrainOptions {
    ModelTag model = ModelTag::Qda;
    std::size_t folds = 5;
    double test_fraction = 0.30;
    std::uint64_t seed = 0;
    double variance_target = 0.95;
    double clamp_ohms = 1e6;
    double qda_lambda = 1e-3;
    double svm_c = 1.0;
    double svm_tol = 1e-3;
    double svm_gamma = 0.0; // 0: heuristic 1/(d * var) on the training scores
    double svm_coef = 1.0;
    std::size_t knn_learners = 30;
    std::size_t knn_dim = 0; // 0: ceil(d / 2)
    std::size_t knn_k = 1;
};

// Everything needed to classify new sweeps: the preprocessing chain, the
// classifier and the provenance to validate inputs against.
struct TrainedClassifier {
    FrequencySelection selection;
    Standardizer standardizer;
    PcaModel pca;
    ModelTag tag = ModelTag::Qda;
    ClassifierModel model;
    std::vector<std::string> classes;
    std::uint64_t seed = 0;
    double test_fraction = 0.30;
    double clamp_ohms = 1e6;
    std::size_t grid_points = 0;
    std::string grid_hash; // fnv1a64 over the exact grid bytes
    double z_ref = 50.0;
    std::string created_utc; // informational only
    std::string config_hash; // fnv1a64 over the resolved options
};

struct TrainResult {
    TrainedClassifier bundle;
    CvResult cv;
    EvaluationReport test_report;
    std::string report_json; // cv + test + summary document
};

// features -> stratified split -> kept columns -> standardize -> PCA ->
// k-fold CV on the training scores -> final fit on the full training
// split -> one evaluation on the untouched test split. All statistics
// (standardizer, PCA, kernel widths) come from training rows only.
TrainResult train_pipeline(const LabeledDataset& ds, const FrequencySelection& sel,
                           const TrainOptions& opt);

// Applies the stored chain to a full-width feature matrix. Never refits.
std::vector<int> pipeline_predict(const TrainedClassifier& bundle, const Matrix& features);
// Same, from raw sweeps; validates the grid and returns label names.
std::vector<std::string> pipeline_predict(const TrainedClassifier& bundle,
                                          const LabeledDataset& ds);

enum class EvalSplit { All, Test, Train };

EvalSplit eval_split_from_name(std::string_view name);

// Scores a labeled dataset against a bundle. Test/Train replay the
// bundle's stored split (seed + fraction), so evaluating the training
// file with EvalSplit::Test reproduces the training-time test report.
EvaluationReport evaluate_pipeline(const TrainedClassifier& bundle,
                                   const LabeledDataset& ds, EvalSplit split);

// Model bundle JSON: {metadata, preprocessing {selection, standardizer,
// pca}, model {tag, parameters}}. Doubles round-trip exactly.
std::string bundle_to_json(const TrainedClassifier& bundle);
TrainedClassifier bundle_from_json(std::string_view json_text);

// ---- comparison table ----

// Renders one row per report document (training reports use their summary
// block; bare evaluation reports leave the train column blank) with six
// metric columns. All reports must agree on the class roster.
std::string render_report_table(const std::vector<std::string>& report_docs, bool csv);

} // namespace zscan
