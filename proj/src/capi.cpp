// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#include "zscan.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "zscan/cmos.hpp"
#include "zscan/error.hpp"
#include "zscan/pipeline.hpp"
#include "zscan/rf.hpp"
#include "zscan/util.hpp"

using nlohmann::json;

struct zs_dataset {
    zscan::LabeledDataset ds;
};
struct zs_selection {
    zscan::FrequencySelection sel;
};
struct zs_model {
    zscan::TrainedClassifier bundle;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

zs_status status_of(zscan::Errc code) {
    switch (code) {
    case zscan::Errc::InvalidArgument: return ZS_ERR_INVALID_ARGUMENT;
    case zscan::Errc::Config: return ZS_ERR_CONFIG;
    case zscan::Errc::Io: return ZS_ERR_IO;
    case zscan::Errc::Parse: return ZS_ERR_PARSE;
    case zscan::Errc::Numeric: return ZS_ERR_NUMERIC;
    case zscan::Errc::NonConvergence: return ZS_ERR_NON_CONVERGENCE;
    }
    return ZS_ERR_INTERNAL;
}

template <typename F>
zs_status guarded(F&& body) noexcept {
    try {
        g_last_error.clear();
        body();
        return ZS_OK;
    } catch (const zscan::Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return ZS_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return ZS_ERR_INTERNAL;
    }
}

void require(bool ok, const char* what) {
    if (!ok) zscan::raise(zscan::Errc::InvalidArgument, "NullArgument", what);
}

// Strict option parsing: unknown keys are configuration errors.
void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* where) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                known = true;
                break;
            }
        if (!known)
            zscan::raise(zscan::Errc::Config, "UnknownConfigKey",
                         std::string(where) + ": unknown key '" + item.key() + "'");
    }
}

json parse_options(const char* text, const char* where) {
    if (text == nullptr || *text == '\0') return json::object();
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        zscan::raise(zscan::Errc::Config, "ConfigError",
                     std::string(where) + ": options must be a JSON object");
    return j;
}

zscan::SelectOptions select_options_from_json(const json& j) {
    check_keys(j,
               {"representation", "policy", "max_corr", "clamp_ohms", "whole_dataset",
                "test_fraction", "seed"},
               "select options");
    zscan::SelectOptions opt;
    try {
        if (j.contains("representation"))
            opt.representation = zscan::representation_from_name(
                j.at("representation").get<std::string>());
        if (j.contains("policy")) {
            const json& p = j.at("policy");
            check_keys(p, {"kind", "top_fraction", "rel_threshold"}, "policy");
            if (p.contains("kind"))
                opt.policy.kind =
                    zscan::policy_kind_from_name(p.at("kind").get<std::string>());
            if (p.contains("top_fraction"))
                opt.policy.top_fraction = p.at("top_fraction").get<double>();
            if (p.contains("rel_threshold"))
                opt.policy.rel_threshold = p.at("rel_threshold").get<double>();
        }
        if (j.contains("max_corr")) opt.max_corr = j.at("max_corr").get<double>();
        if (j.contains("clamp_ohms")) opt.clamp_ohms = j.at("clamp_ohms").get<double>();
        if (j.contains("whole_dataset"))
            opt.whole_dataset = j.at("whole_dataset").get<bool>();
        if (j.contains("test_fraction"))
            opt.test_fraction = j.at("test_fraction").get<double>();
        if (j.contains("seed")) opt.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        zscan::raise(zscan::Errc::Config, "ConfigError", e.what());
    }
    return opt;
}

zscan::TrainOptions train_options_from_json(const json& j) {
    check_keys(j,
               {"model", "folds", "test_fraction", "seed", "variance_target",
                "clamp_ohms", "qda_lambda", "svm_c", "svm_tol", "svm_gamma", "svm_coef",
                "knn_learners", "knn_dim", "knn_k"},
               "train options");
    zscan::TrainOptions opt;
    try {
        if (j.contains("model"))
            opt.model = zscan::model_tag_from_name(j.at("model").get<std::string>());
        if (j.contains("folds")) opt.folds = j.at("folds").get<std::size_t>();
        if (j.contains("test_fraction"))
            opt.test_fraction = j.at("test_fraction").get<double>();
        if (j.contains("seed")) opt.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("variance_target"))
            opt.variance_target = j.at("variance_target").get<double>();
        if (j.contains("clamp_ohms")) opt.clamp_ohms = j.at("clamp_ohms").get<double>();
        if (j.contains("qda_lambda")) opt.qda_lambda = j.at("qda_lambda").get<double>();
        if (j.contains("svm_c")) opt.svm_c = j.at("svm_c").get<double>();
        if (j.contains("svm_tol")) opt.svm_tol = j.at("svm_tol").get<double>();
        if (j.contains("svm_gamma")) opt.svm_gamma = j.at("svm_gamma").get<double>();
        if (j.contains("svm_coef")) opt.svm_coef = j.at("svm_coef").get<double>();
        if (j.contains("knn_learners"))
            opt.knn_learners = j.at("knn_learners").get<std::size_t>();
        if (j.contains("knn_dim")) opt.knn_dim = j.at("knn_dim").get<std::size_t>();
        if (j.contains("knn_k")) opt.knn_k = j.at("knn_k").get<std::size_t>();
    } catch (const json::exception& e) {
        zscan::raise(zscan::Errc::Config, "ConfigError", e.what());
    }
    return opt;
}

zscan::SimulatorConfig sim_config_of(const char* config_json) {
    if (config_json == nullptr || *config_json == '\0')
        return zscan::default_sim_config();
    return zscan::sim_config_from_json(config_json);
}

} // namespace

extern "C" {

const char* zs_version(void) { return "1.0.0"; }

const char* zs_last_error(void) { return g_last_error.c_str(); }

void zs_string_free(char* s) { std::free(s); }

char* zs_default_sim_config(void) {
    return dup_string(zscan::sim_config_to_json(zscan::default_sim_config()));
}

zs_status zs_resolved_sim_config(const char* config_json, char** out_json) {
    return guarded([&] {
        require(out_json != nullptr, "out_json is NULL");
        const zscan::SimulatorConfig cfg = sim_config_of(config_json);
        zscan::validate_sim_config(cfg);
        *out_json = dup_string(zscan::sim_config_to_json(cfg));
    });
}

zs_status zs_simulate(const char* config_json, zs_dataset** out) {
    return guarded([&] {
        require(out != nullptr, "out is NULL");
        const zscan::SimulatorConfig cfg = sim_config_of(config_json);
        auto handle = std::make_unique<zs_dataset>();
        handle->ds = zscan::synthesize_dataset(cfg);
        *out = handle.release();
    });
}

zs_status zs_dataset_from_csv(const char* text, zs_dataset** out) {
    return guarded([&] {
        require(text != nullptr && out != nullptr, "text or out is NULL");
        auto handle = std::make_unique<zs_dataset>();
        handle->ds = zscan::read_dataset_csv(text);
        *out = handle.release();
    });
}

zs_status zs_dataset_read_csv(const char* path, zs_dataset** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "path or out is NULL");
        auto handle = std::make_unique<zs_dataset>();
        handle->ds = zscan::read_dataset_csv(zscan::read_file(path));
        *out = handle.release();
    });
}

zs_status zs_dataset_to_csv(const zs_dataset* ds, char** out_text) {
    return guarded([&] {
        require(ds != nullptr && out_text != nullptr, "ds or out_text is NULL");
        *out_text = dup_string(zscan::write_dataset_csv(ds->ds));
    });
}

zs_status zs_dataset_write_csv(const zs_dataset* ds, const char* path) {
    return guarded([&] {
        require(ds != nullptr && path != nullptr, "ds or path is NULL");
        zscan::write_file_atomic(path, zscan::write_dataset_csv(ds->ds));
    });
}

zs_status zs_dataset_read_touchstone(const char* manifest_path, zs_dataset** out) {
    return guarded([&] {
        require(manifest_path != nullptr && out != nullptr,
                "manifest_path or out is NULL");
        const std::string text = zscan::read_file(manifest_path);
        const std::filesystem::path base =
            std::filesystem::path(manifest_path).parent_path();

        std::vector<zscan::SweepTrace> traces;
        std::size_t line_no = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t end = text.find('\n', start);
            if (end == std::string::npos) end = text.size();
            std::string line = text.substr(start, end - start);
            start = end + 1;
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            const std::size_t comma = line.rfind(',');
            if (comma == std::string::npos || comma == 0 || comma + 1 == line.size())
                zscan::raise(zscan::Errc::Parse, "MalformedManifest",
                             "line " + std::to_string(line_no) +
                                 ": expected '<path>,<label>'");
            const std::string rel = line.substr(0, comma);
            const std::string label = line.substr(comma + 1);
            std::filesystem::path file(rel);
            if (!file.is_absolute()) file = base / file;
            zscan::SweepTrace t =
                zscan::parse_touchstone(zscan::read_file(file.string()), file.string());
            t.label = label;
            traces.push_back(std::move(t));
        }
        if (traces.empty())
            zscan::raise(zscan::Errc::Parse, "MalformedManifest",
                         "manifest lists no sweeps");
        auto handle = std::make_unique<zs_dataset>();
        handle->ds = zscan::dataset_from_traces(traces);
        *out = handle.release();
    });
}

zs_status zs_dataset_info(const zs_dataset* ds, size_t* traces, size_t* points,
                          size_t* classes) {
    return guarded([&] {
        require(ds != nullptr, "ds is NULL");
        if (traces != nullptr) *traces = ds->ds.trace_count();
        if (points != nullptr) *points = ds->ds.point_count();
        if (classes != nullptr) *classes = ds->ds.class_count();
    });
}

zs_status zs_dataset_class_name(const zs_dataset* ds, size_t index, char** out_name) {
    return guarded([&] {
        require(ds != nullptr && out_name != nullptr, "ds or out_name is NULL");
        if (index >= ds->ds.class_count())
            zscan::raise(zscan::Errc::InvalidArgument, "IndexOutOfRange",
                         "class index " + std::to_string(index) + " out of range");
        *out_name = dup_string(ds->ds.classes[index]);
    });
}

void zs_dataset_free(zs_dataset* ds) { delete ds; }

zs_status zs_select(const zs_dataset* ds, const char* options_json, zs_selection** out) {
    return guarded([&] {
        require(ds != nullptr && out != nullptr, "ds or out is NULL");
        const zscan::SelectOptions opt =
            select_options_from_json(parse_options(options_json, "select"));
        auto handle = std::make_unique<zs_selection>();
        handle->sel = zscan::select_pipeline(ds->ds, opt);
        *out = handle.release();
    });
}

zs_status zs_selection_to_json(const zs_selection* sel, char** out_json) {
    return guarded([&] {
        require(sel != nullptr && out_json != nullptr, "sel or out_json is NULL");
        *out_json = dup_string(zscan::selection_to_json(sel->sel));
    });
}

zs_status zs_selection_from_json(const char* text, zs_selection** out) {
    return guarded([&] {
        require(text != nullptr && out != nullptr, "text or out is NULL");
        auto handle = std::make_unique<zs_selection>();
        handle->sel = zscan::selection_from_json(text);
        *out = handle.release();
    });
}

zs_status zs_selection_counts(const zs_selection* sel, size_t* stage1, size_t* kept,
                              size_t* columns) {
    return guarded([&] {
        require(sel != nullptr, "sel is NULL");
        if (stage1 != nullptr) *stage1 = sel->sel.stage1_count;
        if (kept != nullptr) *kept = sel->sel.kept.size();
        if (columns != nullptr) *columns = sel->sel.n_columns;
    });
}

zs_status zs_selection_verify(const zs_dataset* ds, const zs_selection* sel,
                              double* max_abs_corr) {
    return guarded([&] {
        require(ds != nullptr && sel != nullptr && max_abs_corr != nullptr,
                "ds, sel or max_abs_corr is NULL");
        *max_abs_corr = zscan::verify_selection(ds->ds, sel->sel);
    });
}

void zs_selection_free(zs_selection* sel) { delete sel; }

zs_status zs_train(const zs_dataset* ds, const zs_selection* sel,
                   const char* options_json, zs_model** out, char** out_report_json) {
    return guarded([&] {
        require(ds != nullptr && sel != nullptr && out != nullptr,
                "ds, sel or out is NULL");
        const zscan::TrainOptions opt =
            train_options_from_json(parse_options(options_json, "train"));
        zscan::TrainResult result = zscan::train_pipeline(ds->ds, sel->sel, opt);
        auto handle = std::make_unique<zs_model>();
        handle->bundle = std::move(result.bundle);
        if (out_report_json != nullptr) *out_report_json = dup_string(result.report_json);
        *out = handle.release();
    });
}

zs_status zs_model_to_json(const zs_model* model, char** out_json) {
    return guarded([&] {
        require(model != nullptr && out_json != nullptr, "model or out_json is NULL");
        *out_json = dup_string(zscan::bundle_to_json(model->bundle));
    });
}

zs_status zs_model_from_json(const char* text, zs_model** out) {
    return guarded([&] {
        require(text != nullptr && out != nullptr, "text or out is NULL");
        auto handle = std::make_unique<zs_model>();
        handle->bundle = zscan::bundle_from_json(text);
        *out = handle.release();
    });
}

zs_status zs_evaluate(const zs_model* model, const zs_dataset* ds, const char* split,
                      char** out_report_json) {
    return guarded([&] {
        require(model != nullptr && ds != nullptr && out_report_json != nullptr,
                "model, ds or out_report_json is NULL");
        const zscan::EvalSplit which =
            zscan::eval_split_from_name(split == nullptr ? "all" : split);
        const zscan::EvaluationReport report =
            zscan::evaluate_pipeline(model->bundle, ds->ds, which);
        *out_report_json = dup_string(zscan::report_to_json(report));
    });
}

zs_status zs_predict(const zs_model* model, const zs_dataset* ds,
                     char** out_labels_json) {
    return guarded([&] {
        require(model != nullptr && ds != nullptr && out_labels_json != nullptr,
                "model, ds or out_labels_json is NULL");
        const std::vector<std::string> labels =
            zscan::pipeline_predict(model->bundle, ds->ds);
        *out_labels_json = dup_string(json(labels).dump());
    });
}

void zs_model_free(zs_model* model) { delete model; }

zs_status zs_report_table(const char* const* report_docs, size_t count, int as_csv,
                          char** out_text) {
    return guarded([&] {
        require(report_docs != nullptr && out_text != nullptr,
                "report_docs or out_text is NULL");
        std::vector<std::string> docs;
        docs.reserve(count);
        for (size_t i = 0; i < count; ++i) {
            require(report_docs[i] != nullptr, "report_docs entry is NULL");
            docs.emplace_back(report_docs[i]);
        }
        *out_text = dup_string(zscan::render_report_table(docs, as_csv != 0));
    });
}

} // extern "C"
