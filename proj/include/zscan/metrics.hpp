// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace zscan {

struct ConfusionMatrix {
    std::vector<std::string> classes;
    // counts[i][j]: rows of true class i predicted as class j.
    std::vector<std::vector<std::int64_t>> counts;

    std::size_t size() const noexcept { return classes.size(); }
    std::int64_t total() const noexcept;
    // One-vs-rest marginals for class i.
    std::int64_t tp(std::size_t i) const noexcept;
    std::int64_t fp(std::size_t i) const noexcept;
    std::int64_t fn(std::size_t i) const noexcept;
    std::int64_t tn(std::size_t i) const noexcept;
};

// Labels are indices into classes; out-of-range raises "UnknownLabel".
ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred,
                          const std::vector<std::string>& classes);

// Macro metrics. A 0/0 term (class never predicted) contributes 0 and
// appends a flag when a flags sink is supplied; evaluation stays total.
double precision_macro(const ConfusionMatrix& cm,
                       std::vector<std::string>* flags = nullptr);

// Requires every class to appear in y_true ("EmptyTrueClass" otherwise).
double recall_macro(const ConfusionMatrix& cm);

// Requires at least two classes ("SingleClass" otherwise).
double specificity_macro(const ConfusionMatrix& cm);

// One-vs-rest accuracy averaged over classes. This is the macro form some
// texts print; it differs from conventional accuracy for 3+ classes, so
// both are always computed and reported side by side.
double accuracy_macro_ovr(const ConfusionMatrix& cm);

// trace / total: the conventional quantity.
double accuracy_overall(const ConfusionMatrix& cm);

// Harmonic mean; defined as 0 when precision + recall == 0.
double f1_macro(double precision, double recall);

struct MetricSet {
    double precision = 0.0;
    double recall = 0.0;
    double specificity = 0.0;
    double accuracy_macro_ovr = 0.0;
    double accuracy_overall = 0.0;
    double f1 = 0.0;
};

struct EvaluationReport {
    ConfusionMatrix cm;
    std::vector<double> per_class_precision;
    std::vector<double> per_class_recall;
    std::vector<double> per_class_specificity;
    MetricSet metrics;
    std::vector<std::string> flags;
    // Metadata: filled by the caller that knows the context.
    std::string model_tag;
    std::uint64_t seed = 0;
    std::string split;
};

// Builds the full report from parallel label vectors. Preconditions are
// those of the individual metrics (every class present in y_true, >= 2
// classes); test sets that violate them fail loudly rather than skewing
// macro averages silently.
EvaluationReport evaluate_labels(std::span<const int> y_true,
                                 std::span<const int> y_pred,
                                 const std::vector<std::string>& classes);

// Report JSON (schema in README). parse validates structure and ranges.
std::string report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(std::string_view json_text);

} // namespace zscan
