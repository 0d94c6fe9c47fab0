// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

// Command-line front end. All measurement, selection, training and
// evaluation work goes through the shared-library C API; this file only
// marshals flags and files.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "zscan.h"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNonConvergence = 4;

int exit_code_of(zs_status st) {
    switch (st) {
    case ZS_OK: return 0;
    case ZS_ERR_IO: return kExitIo;
    case ZS_ERR_NON_CONVERGENCE: return kExitNonConvergence;
    case ZS_ERR_INTERNAL: return 1;
    default: return kExitUsage;
    }
}

[[noreturn]] void fail(zs_status st) {
    std::fprintf(stderr, "zscan: %s\n", zs_last_error());
    std::exit(exit_code_of(st));
}

void check(zs_status st) {
    if (st != ZS_OK) fail(st);
}

[[noreturn]] void fail_io(const std::string& message) {
    std::fprintf(stderr, "zscan: %s\n", message.c_str());
    std::exit(kExitIo);
}

// Takes ownership of a C-API string.
std::string take(char* s) {
    std::string out = s != nullptr ? s : "";
    zs_string_free(s);
    return out;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_io("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) fail_io("cannot read " + path);
    return ss.str();
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail_io("cannot write " + path);
    out << content;
    out.flush();
    if (!out) fail_io("cannot write " + path);
}

struct DatasetDeleter {
    void operator()(zs_dataset* p) const { zs_dataset_free(p); }
};
struct SelectionDeleter {
    void operator()(zs_selection* p) const { zs_selection_free(p); }
};
struct ModelDeleter {
    void operator()(zs_model* p) const { zs_model_free(p); }
};
using DatasetPtr = std::unique_ptr<zs_dataset, DatasetDeleter>;
using SelectionPtr = std::unique_ptr<zs_selection, SelectionDeleter>;
using ModelPtr = std::unique_ptr<zs_model, ModelDeleter>;

DatasetPtr load_dataset(const std::string& data_path, const std::string& manifest_path) {
    zs_dataset* ds = nullptr;
    if (!manifest_path.empty())
        check(zs_dataset_read_touchstone(manifest_path.c_str(), &ds));
    else
        check(zs_dataset_read_csv(data_path.c_str(), &ds));
    return DatasetPtr(ds);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"impedance-sweep activity classification pipeline"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    bool quiet = false;
    app.add_option("--seed", seed, "Root seed for every randomized stage")
        ->capture_default_str();
    app.add_flag("--quiet", quiet, "Suppress informational output");

    // simulate
    auto* cmd_sim = app.add_subcommand(
        "simulate", "Synthesize a labeled sweep dataset from a circuit model");
    cmd_sim->fallthrough();
    std::string sim_config, sim_out = "dataset.csv";
    cmd_sim->add_option("--config", sim_config, "Simulator configuration JSON file");
    cmd_sim->add_option("--out", sim_out, "Output dataset CSV path")
        ->capture_default_str();

    // select
    auto* cmd_sel = app.add_subcommand(
        "select", "Pick informative, non-redundant frequency points");
    cmd_sel->fallthrough();
    std::string sel_data, sel_manifest, sel_out = "selection.json";
    std::string sel_repr = "impedance_magnitude", sel_policy = "both";
    double sel_top = 0.20, sel_rel = 0.70, sel_maxcorr = 0.90, sel_testfrac = 0.30;
    bool sel_whole = false, sel_verify = false;
    auto* sel_src = cmd_sel->add_option("--data", sel_data, "Dataset CSV file");
    cmd_sel->add_option("--manifest", sel_manifest, "Touchstone manifest CSV file")
        ->excludes(sel_src);
    cmd_sel->add_option("--out", sel_out, "Output selection JSON path")
        ->capture_default_str();
    cmd_sel
        ->add_option("--representation", sel_repr,
                     "impedance_magnitude | impedance_real_imag | reflection_magnitude")
        ->capture_default_str();
    cmd_sel->add_option("--policy", sel_policy, "top_fraction | rel_threshold | both")
        ->capture_default_str();
    cmd_sel->add_option("--top-fraction", sel_top, "Relevance quantile to keep")
        ->capture_default_str();
    cmd_sel
        ->add_option("--rel-threshold", sel_rel,
                     "Keep scores >= threshold * best score")
        ->capture_default_str();
    cmd_sel
        ->add_option("--max-corr", sel_maxcorr,
                     "Redundancy bound on kept-pair |pearson|")
        ->capture_default_str();
    cmd_sel->add_option("--test-fraction", sel_testfrac, "Held-out fraction")
        ->capture_default_str();
    cmd_sel->add_flag("--whole-dataset", sel_whole,
                      "Score on all rows instead of the training split");
    cmd_sel->add_flag("--verify", sel_verify,
                      "Independently recheck kept-pair correlations");

    // train
    auto* cmd_tr = app.add_subcommand(
        "train", "Fit a classifier behind the stored preprocessing chain");
    cmd_tr->fallthrough();
    std::string tr_data, tr_manifest, tr_selection, tr_out = "model.json";
    std::string tr_report = "report.json", tr_model = "qda";
    std::size_t tr_folds = 5;
    double tr_testfrac = 0.30, tr_variance = 0.95;
    double tr_qda_lambda = 1e-3, tr_svm_c = 1.0, tr_svm_tol = 1e-3;
    double tr_svm_gamma = 0.0, tr_svm_coef = 1.0;
    std::size_t tr_knn_learners = 30, tr_knn_dim = 0, tr_knn_k = 1;
    auto* tr_src = cmd_tr->add_option("--data", tr_data, "Dataset CSV file");
    cmd_tr->add_option("--manifest", tr_manifest, "Touchstone manifest CSV file")
        ->excludes(tr_src);
    cmd_tr->add_option("--selection", tr_selection, "Frequency selection JSON file")
        ->required();
    cmd_tr->add_option("--out", tr_out, "Output model bundle path")
        ->capture_default_str();
    cmd_tr->add_option("--report", tr_report, "Output training report path")
        ->capture_default_str();
    cmd_tr
        ->add_option("--model", tr_model,
                     "qda | svm-gauss | svm-quad | svm-cubic | subspace-knn")
        ->capture_default_str();
    cmd_tr->add_option("--folds", tr_folds, "Cross-validation folds")
        ->capture_default_str();
    cmd_tr->add_option("--test-fraction", tr_testfrac, "Held-out fraction")
        ->capture_default_str();
    cmd_tr
        ->add_option("--variance-target", tr_variance,
                     "Cumulative explained-variance target for PCA")
        ->capture_default_str();
    cmd_tr->add_option("--qda-lambda", tr_qda_lambda, "QDA shrinkage weight")
        ->capture_default_str();
    cmd_tr->add_option("--svm-c", tr_svm_c, "SVM box constraint")
        ->capture_default_str();
    cmd_tr->add_option("--svm-tol", tr_svm_tol, "SVM KKT tolerance")
        ->capture_default_str();
    cmd_tr->add_option("--svm-gamma", tr_svm_gamma,
                       "Gaussian kernel width (0: 1/(d*var) heuristic)")
        ->capture_default_str();
    cmd_tr->add_option("--svm-coef", tr_svm_coef, "Polynomial kernel offset")
        ->capture_default_str();
    cmd_tr->add_option("--knn-learners", tr_knn_learners, "Subspace ensemble size")
        ->capture_default_str();
    cmd_tr->add_option("--knn-dim", tr_knn_dim,
                       "Features per subspace (0: ceil(d/2))")
        ->capture_default_str();
    cmd_tr->add_option("--knn-k", tr_knn_k, "Neighbors per learner")
        ->capture_default_str();

    // evaluate
    auto* cmd_ev = app.add_subcommand(
        "evaluate", "Score a dataset against a trained model bundle");
    cmd_ev->fallthrough();
    std::string ev_model, ev_data, ev_manifest, ev_split = "none", ev_out;
    cmd_ev->add_option("--model", ev_model, "Model bundle JSON file")->required();
    auto* ev_src = cmd_ev->add_option("--data", ev_data, "Dataset CSV file");
    cmd_ev->add_option("--manifest", ev_manifest, "Touchstone manifest CSV file")
        ->excludes(ev_src);
    cmd_ev
        ->add_option("--split", ev_split,
                     "none | test | train (test/train replay the stored split)")
        ->capture_default_str();
    cmd_ev->add_option("--out", ev_out, "Report JSON path (default: stdout)");

    // report
    auto* cmd_rep = app.add_subcommand(
        "report", "Render report documents as a comparison table");
    cmd_rep->fallthrough();
    std::vector<std::string> rep_files;
    std::string rep_out;
    bool rep_csv = false;
    cmd_rep->add_option("files", rep_files, "Report JSON files")->required();
    cmd_rep->add_flag("--csv", rep_csv, "Emit CSV instead of aligned text");
    cmd_rep->add_option("--out", rep_out, "Output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        app.exit(e);
        return kExitUsage;
    }

    if (cmd_sim->parsed()) {
        json cfg = json::object();
        if (!sim_config.empty()) {
            cfg = json::parse(read_text(sim_config), nullptr, false);
            if (cfg.is_discarded() || !cfg.is_object()) {
                std::fprintf(stderr, "zscan: %s is not a JSON object\n",
                             sim_config.c_str());
                return kExitUsage;
            }
        }
        if (app.count("--seed") > 0) cfg["seed"] = seed;
        const std::string cfg_text = cfg.dump();

        char* resolved = nullptr;
        check(zs_resolved_sim_config(cfg_text.c_str(), &resolved));
        const std::string resolved_text = take(resolved);

        zs_dataset* raw = nullptr;
        check(zs_simulate(cfg_text.c_str(), &raw));
        DatasetPtr ds(raw);
        check(zs_dataset_write_csv(ds.get(), sim_out.c_str()));
        write_text(sim_out + ".config.json", resolved_text + "\n");

        if (!quiet) {
            size_t traces = 0, points = 0, classes = 0;
            check(zs_dataset_info(ds.get(), &traces, &points, &classes));
            std::printf("wrote %s: %zu traces, %zu points, %zu classes\n",
                        sim_out.c_str(), traces, points, classes);
        }
        return 0;
    }

    if (cmd_sel->parsed()) {
        if (sel_data.empty() && sel_manifest.empty()) {
            std::fprintf(stderr, "zscan: select needs --data or --manifest\n");
            return kExitUsage;
        }
        DatasetPtr ds = load_dataset(sel_data, sel_manifest);

        const json options = {{"representation", sel_repr},
                              {"policy",
                               {{"kind", sel_policy},
                                {"top_fraction", sel_top},
                                {"rel_threshold", sel_rel}}},
                              {"max_corr", sel_maxcorr},
                              {"whole_dataset", sel_whole},
                              {"test_fraction", sel_testfrac},
                              {"seed", seed}};
        zs_selection* raw = nullptr;
        check(zs_select(ds.get(), options.dump().c_str(), &raw));
        SelectionPtr sel(raw);

        char* sel_json = nullptr;
        check(zs_selection_to_json(sel.get(), &sel_json));
        write_text(sel_out, take(sel_json));

        size_t kept = 0, columns = 0;
        check(zs_selection_counts(sel.get(), nullptr, &kept, &columns));
        if (!quiet)
            std::printf("kept %zu of %zu (%.2f%%)\n", kept, columns,
                        100.0 * static_cast<double>(kept) /
                            static_cast<double>(columns));

        if (sel_verify) {
            double worst = 0.0;
            check(zs_selection_verify(ds.get(), sel.get(), &worst));
            if (!quiet)
                std::printf("verify: max kept-pair |correlation| = %.6f\n", worst);
            if (worst >= sel_maxcorr) {
                std::fprintf(stderr,
                             "zscan: verification failed: %.6f >= %.6f\n", worst,
                             sel_maxcorr);
                return kExitUsage;
            }
        }
        return 0;
    }

    if (cmd_tr->parsed()) {
        if (tr_data.empty() && tr_manifest.empty()) {
            std::fprintf(stderr, "zscan: train needs --data or --manifest\n");
            return kExitUsage;
        }
        DatasetPtr ds = load_dataset(tr_data, tr_manifest);

        zs_selection* sel_raw = nullptr;
        check(zs_selection_from_json(read_text(tr_selection).c_str(), &sel_raw));
        SelectionPtr sel(sel_raw);

        const json options = {{"model", tr_model},
                              {"folds", tr_folds},
                              {"test_fraction", tr_testfrac},
                              {"seed", seed},
                              {"variance_target", tr_variance},
                              {"qda_lambda", tr_qda_lambda},
                              {"svm_c", tr_svm_c},
                              {"svm_tol", tr_svm_tol},
                              {"svm_gamma", tr_svm_gamma},
                              {"svm_coef", tr_svm_coef},
                              {"knn_learners", tr_knn_learners},
                              {"knn_dim", tr_knn_dim},
                              {"knn_k", tr_knn_k}};
        zs_model* model_raw = nullptr;
        char* report_raw = nullptr;
        check(zs_train(ds.get(), sel.get(), options.dump().c_str(), &model_raw,
                       &report_raw));
        ModelPtr model(model_raw);
        const std::string report = take(report_raw);

        char* bundle_raw = nullptr;
        check(zs_model_to_json(model.get(), &bundle_raw));
        write_text(tr_out, take(bundle_raw));
        write_text(tr_report, report);

        if (!quiet) {
            const char* docs[1] = {report.c_str()};
            char* table_raw = nullptr;
            check(zs_report_table(docs, 1, 0, &table_raw));
            std::fputs(take(table_raw).c_str(), stdout);
        }
        return 0;
    }

    if (cmd_ev->parsed()) {
        if (ev_data.empty() && ev_manifest.empty()) {
            std::fprintf(stderr, "zscan: evaluate needs --data or --manifest\n");
            return kExitUsage;
        }
        zs_model* model_raw = nullptr;
        check(zs_model_from_json(read_text(ev_model).c_str(), &model_raw));
        ModelPtr model(model_raw);
        DatasetPtr ds = load_dataset(ev_data, ev_manifest);

        char* report_raw = nullptr;
        check(zs_evaluate(model.get(), ds.get(), ev_split.c_str(), &report_raw));
        const std::string report = take(report_raw);

        if (ev_out.empty()) {
            std::fputs(report.c_str(), stdout);
            if (report.empty() || report.back() != '\n') std::fputs("\n", stdout);
        } else {
            write_text(ev_out, report);
            if (!quiet) {
                const json j = json::parse(report);
                std::printf("wrote %s: f1 %.4f, accuracy %.4f\n", ev_out.c_str(),
                            j.at("metrics").at("f1").get<double>(),
                            j.at("metrics").at("accuracy_overall").get<double>());
            }
        }
        return 0;
    }

    // report
    std::vector<std::string> docs;
    docs.reserve(rep_files.size());
    for (const std::string& f : rep_files) docs.push_back(read_text(f));
    std::vector<const char*> ptrs;
    ptrs.reserve(docs.size());
    for (const std::string& d : docs) ptrs.push_back(d.c_str());

    char* table_raw = nullptr;
    check(zs_report_table(ptrs.data(), ptrs.size(), rep_csv ? 1 : 0, &table_raw));
    const std::string table = take(table_raw);
    if (rep_out.empty())
        std::fputs(table.c_str(), stdout);
    else
        write_text(rep_out, table);
    return 0;
}
