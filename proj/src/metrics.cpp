// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#include "zscan/metrics.hpp"

#include <nlohmann/json.hpp>

#include "zscan/error.hpp"

namespace zscan {

namespace {
using nlohmann::json;
}

std::int64_t ConfusionMatrix::total() const noexcept {
    std::int64_t acc = 0;
    for (const auto& row : counts)
        for (std::int64_t v : row) acc += v;
    return acc;
}

std::int64_t ConfusionMatrix::tp(std::size_t i) const noexcept {
    return counts[i][i];
}

std::int64_t ConfusionMatrix::fp(std::size_t i) const noexcept {
    std::int64_t acc = 0;
    for (std::size_t r = 0; r < counts.size(); ++r)
        if (r != i) acc += counts[r][i];
    return acc;
}

std::int64_t ConfusionMatrix::fn(std::size_t i) const noexcept {
    std::int64_t acc = 0;
    for (std::size_t c = 0; c < counts.size(); ++c)
        if (c != i) acc += counts[i][c];
    return acc;
}

std::int64_t ConfusionMatrix::tn(std::size_t i) const noexcept {
    return total() - tp(i) - fp(i) - fn(i);
}

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred,
                          const std::vector<std::string>& classes) {
    if (y_true.size() != y_pred.size())
        raise(Errc::InvalidArgument, "LengthMismatch",
              "y_true and y_pred must have equal length");
    const std::size_t k = classes.size();
    ConfusionMatrix cm;
    cm.classes = classes;
    cm.counts.assign(k, std::vector<std::int64_t>(k, 0));
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const int t = y_true[i];
        const int p = y_pred[i];
        if (t < 0 || static_cast<std::size_t>(t) >= k || p < 0 ||
            static_cast<std::size_t>(p) >= k)
            raise(Errc::InvalidArgument, "UnknownLabel",
                  "label at row " + std::to_string(i) + " is outside the class roster");
        cm.counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)]++;
    }
    return cm;
}

double precision_macro(const ConfusionMatrix& cm, std::vector<std::string>* flags) {
    const std::size_t k = cm.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const std::int64_t denom = cm.tp(i) + cm.fp(i);
        if (denom == 0) {
            if (flags)
                flags->push_back("precision undefined for class '" + cm.classes[i] +
                                 "' (never predicted); counted as 0");
            continue;
        }
        acc += static_cast<double>(cm.tp(i)) / static_cast<double>(denom);
    }
    return acc / static_cast<double>(k);
}

double recall_macro(const ConfusionMatrix& cm) {
    const std::size_t k = cm.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const std::int64_t denom = cm.tp(i) + cm.fn(i);
        if (denom == 0)
            raise(Errc::InvalidArgument, "EmptyTrueClass",
                  "class '" + cm.classes[i] + "' has no true rows; recall undefined");
        acc += static_cast<double>(cm.tp(i)) / static_cast<double>(denom);
    }
    return acc / static_cast<double>(k);
}

double specificity_macro(const ConfusionMatrix& cm) {
    const std::size_t k = cm.size();
    if (k < 2)
        raise(Errc::InvalidArgument, "SingleClass",
              "specificity needs at least 2 classes");
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const std::int64_t denom = cm.tn(i) + cm.fp(i);
        // denom = rows whose true class is not i; zero only if every row is
        // class i, impossible here once recall's precondition holds, but
        // guard anyway for standalone use.
        if (denom == 0)
            raise(Errc::InvalidArgument, "SingleClass",
                  "all rows belong to class '" + cm.classes[i] + "'");
        acc += static_cast<double>(cm.tn(i)) / static_cast<double>(denom);
    }
    return acc / static_cast<double>(k);
}

double accuracy_macro_ovr(const ConfusionMatrix& cm) {
    const std::size_t k = cm.size();
    const std::int64_t total = cm.total();
    if (total == 0)
        raise(Errc::InvalidArgument, "EmptyTrueClass", "confusion matrix is empty");
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        acc += static_cast<double>(cm.tp(i) + cm.tn(i)) / static_cast<double>(total);
    return acc / static_cast<double>(k);
}

double accuracy_overall(const ConfusionMatrix& cm) {
    const std::int64_t total = cm.total();
    if (total == 0)
        raise(Errc::InvalidArgument, "EmptyTrueClass", "confusion matrix is empty");
    std::int64_t trace = 0;
    for (std::size_t i = 0; i < cm.size(); ++i) trace += cm.tp(i);
    return static_cast<double>(trace) / static_cast<double>(total);
}

double f1_macro(double precision, double recall) {
    const double denom = precision + recall;
    if (denom == 0.0) return 0.0;
    return 2.0 * precision * recall / denom;
}

EvaluationReport evaluate_labels(std::span<const int> y_true,
                                 std::span<const int> y_pred,
                                 const std::vector<std::string>& classes) {
    EvaluationReport report;
    report.cm = confusion(y_true, y_pred, classes);
    const ConfusionMatrix& cm = report.cm;
    const std::size_t k = cm.size();

    report.metrics.recall = recall_macro(cm);
    report.metrics.specificity = specificity_macro(cm);
    report.metrics.precision = precision_macro(cm, &report.flags);
    report.metrics.accuracy_macro_ovr = accuracy_macro_ovr(cm);
    report.metrics.accuracy_overall = accuracy_overall(cm);
    report.metrics.f1 = f1_macro(report.metrics.precision, report.metrics.recall);

    report.per_class_precision.resize(k);
    report.per_class_recall.resize(k);
    report.per_class_specificity.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::int64_t pd = cm.tp(i) + cm.fp(i);
        report.per_class_precision[i] =
            pd == 0 ? 0.0 : static_cast<double>(cm.tp(i)) / static_cast<double>(pd);
        report.per_class_recall[i] = static_cast<double>(cm.tp(i)) /
                                     static_cast<double>(cm.tp(i) + cm.fn(i));
        report.per_class_specificity[i] = static_cast<double>(cm.tn(i)) /
                                          static_cast<double>(cm.tn(i) + cm.fp(i));
    }
    return report;
}

std::string report_to_json(const EvaluationReport& report) {
    json j;
    j["format"] = "zscan-report";
    j["version"] = 1;
    j["metadata"] = {{"model", report.model_tag},
                     {"seed", report.seed},
                     {"split", report.split}};
    j["classes"] = report.cm.classes;
    j["confusion"] = report.cm.counts;
    j["per_class"] = {{"precision", report.per_class_precision},
                      {"recall", report.per_class_recall},
                      {"specificity", report.per_class_specificity}};
    j["metrics"] = {{"precision", report.metrics.precision},
                    {"recall", report.metrics.recall},
                    {"specificity", report.metrics.specificity},
                    {"accuracy_macro_ovr", report.metrics.accuracy_macro_ovr},
                    {"accuracy_overall", report.metrics.accuracy_overall},
                    {"f1", report.metrics.f1}};
    j["flags"] = report.flags;
    return j.dump(2) + "\n";
}

EvaluationReport report_from_json(std::string_view json_text) {
    json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded())
        raise(Errc::Parse, "MalformedJson", "report is not valid JSON");
    if (!j.is_object() || j.value("format", "") != "zscan-report" ||
        j.value("version", 0) != 1)
        raise(Errc::Parse, "WrongFormat", "not a zscan-report document");
    try {
        EvaluationReport report;
        const json& meta = j.at("metadata");
        report.model_tag = meta.value("model", "");
        report.seed = meta.value("seed", 0ull);
        report.split = meta.value("split", "");
        report.cm.classes = j.at("classes").get<std::vector<std::string>>();
        report.cm.counts =
            j.at("confusion").get<std::vector<std::vector<std::int64_t>>>();
        if (report.cm.counts.size() != report.cm.classes.size())
            raise(Errc::Parse, "WrongFormat", "confusion matrix shape mismatch");
        for (const auto& row : report.cm.counts)
            if (row.size() != report.cm.classes.size())
                raise(Errc::Parse, "WrongFormat", "confusion matrix shape mismatch");
        const json& pc = j.at("per_class");
        report.per_class_precision = pc.at("precision").get<std::vector<double>>();
        report.per_class_recall = pc.at("recall").get<std::vector<double>>();
        report.per_class_specificity = pc.at("specificity").get<std::vector<double>>();
        const json& m = j.at("metrics");
        report.metrics.precision = m.at("precision").get<double>();
        report.metrics.recall = m.at("recall").get<double>();
        report.metrics.specificity = m.at("specificity").get<double>();
        report.metrics.accuracy_macro_ovr = m.at("accuracy_macro_ovr").get<double>();
        report.metrics.accuracy_overall = m.at("accuracy_overall").get<double>();
        report.metrics.f1 = m.at("f1").get<double>();
        report.flags = j.value("flags", std::vector<std::string>{});
        return report;
    } catch (const json::exception& e) {
        raise(Errc::Parse, "WrongFormat", std::string("report JSON: ") + e.what());
    }
}

} // namespace zscan
