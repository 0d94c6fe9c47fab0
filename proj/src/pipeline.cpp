// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#include "zscan/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <utility>

#include <nlohmann/json.hpp>

#include "zscan/error.hpp"
#include "zscan/linalg.hpp"
#include "zscan/random.hpp"
#include "zscan/util.hpp"

namespace zscan {

using nlohmann::json;

namespace {

std::string grid_hash_of(const LabeledDataset& ds) {
    std::string bytes(reinterpret_cast<const char*>(ds.frequencies_hz.data()),
                      ds.frequencies_hz.size() * sizeof(double));
    bytes.append(reinterpret_cast<const char*>(&ds.z_ref), sizeof(double));
    return hex64(fnv1a64(bytes));
}

void check_grid(const TrainedClassifier& bundle, const LabeledDataset& ds) {
    if (ds.point_count() != bundle.grid_points || grid_hash_of(ds) != bundle.grid_hash)
        raise(Errc::InvalidArgument, "GridMismatch",
              "dataset grid does not match the grid the model was trained on");
}

std::vector<std::size_t> selection_rows(const LabeledDataset& ds,
                                        const FrequencySelection& sel) {
    if (sel.rows_used == "all") {
        std::vector<std::size_t> rows(ds.trace_count());
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
        return rows;
    }
    return split_train_test(ds.labels, ds.class_count(), sel.test_fraction, sel.seed)
        .train;
}

} // namespace

FrequencySelection select_pipeline(const LabeledDataset& ds, const SelectOptions& opt) {
    if (ds.trace_count() < 2)
        raise(Errc::InvalidArgument, "EmptyDataset",
              "frequency selection needs at least 2 traces");

    const FeatureMatrix fm = feature_matrix(ds, opt.representation, opt.clamp_ohms);

    std::vector<std::size_t> rows;
    if (opt.whole_dataset) {
        rows.resize(ds.trace_count());
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    } else {
        rows = split_train_test(ds.labels, ds.class_count(), opt.test_fraction, opt.seed)
                   .train;
    }
    std::vector<int> labels(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) labels[i] = ds.labels[rows[i]];

    const Matrix sub = fm.values.select_rows(rows);
    const RelevanceScores scores = class_relevance(sub, labels, ds.class_count());
    const std::vector<std::size_t> stage1 = select_relevant(scores, opt.policy);

    FrequencySelection sel = prune_redundant(sub, stage1, opt.max_corr);
    sel.policy = opt.policy;
    sel.representation = opt.representation;
    sel.rows_used = opt.whole_dataset ? "all" : "train";
    sel.seed = opt.seed;
    sel.test_fraction = opt.test_fraction;
    sel.kept_relevance.reserve(sel.kept.size());
    sel.kept_class.reserve(sel.kept.size());
    sel.kept_frequency_hz.reserve(sel.kept.size());
    for (std::size_t col : sel.kept) {
        sel.kept_relevance.push_back(scores.score[col]);
        const int c = scores.argmax_class[col];
        sel.kept_class.push_back(c >= 0 ? ds.classes[static_cast<std::size_t>(c)] : "");
        sel.kept_frequency_hz.push_back(ds.frequencies_hz[fm.frequency_index(col)]);
    }
    return sel;
}

double verify_selection(const LabeledDataset& ds, const FrequencySelection& sel,
                        double clamp_ohms) {
    if (sel.kept.empty())
        raise(Errc::InvalidArgument, "EmptySelection", "selection keeps no columns");

    const FeatureMatrix fm = feature_matrix(ds, sel.representation, clamp_ohms);
    if (fm.values.cols() != sel.n_columns)
        raise(Errc::InvalidArgument, "WidthMismatch",
              "dataset yields " + std::to_string(fm.values.cols()) +
                  " feature columns, selection expects " +
                  std::to_string(sel.n_columns));

    const std::vector<std::size_t> rows = selection_rows(ds, sel);
    const Matrix x = fm.values.select_rows(rows).select_cols(sel.kept);
    const std::size_t n = x.rows();
    const std::size_t m = x.cols();
    if (n < 2 || m < 2) return 0.0;

    std::vector<double> mean(m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) mean[j] += x(i, j);
    for (std::size_t j = 0; j < m; ++j) mean[j] /= static_cast<double>(n);

    double worst = 0.0;
    for (std::size_t a = 0; a + 1 < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            double sxy = 0.0, sxx = 0.0, syy = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double da = x(i, a) - mean[a];
                const double db = x(i, b) - mean[b];
                sxy += da * db;
                sxx += da * da;
                syy += db * db;
            }
            if (sxx <= 0.0 || syy <= 0.0) continue;
            const double r = std::fabs(sxy) / std::sqrt(sxx * syy);
            worst = std::max(worst, std::min(r, 1.0));
        }
    }
    return worst;
}

ModelTag model_tag_from_name(std::string_view name) {
    if (name == "qda") return ModelTag::Qda;
    if (name == "svm-gauss") return ModelTag::SvmGaussian;
    if (name == "svm-quad") return ModelTag::SvmQuadratic;
    if (name == "svm-cubic") return ModelTag::SvmCubic;
    if (name == "subspace-knn") return ModelTag::SubspaceKnn;
    raise(Errc::Config, "UnknownModelTag", "unknown model tag: " + std::string(name));
}

std::string_view model_tag_name(ModelTag tag) {
    switch (tag) {
    case ModelTag::Qda: return "qda";
    case ModelTag::SvmGaussian: return "svm-gauss";
    case ModelTag::SvmQuadratic: return "svm-quad";
    case ModelTag::SvmCubic: return "svm-cubic";
    case ModelTag::SubspaceKnn: return "subspace-knn";
    }
    raise(Errc::Config, "UnknownModelTag", "invalid model tag value");
}

std::string_view model_tag_display(ModelTag tag) {
    switch (tag) {
    case ModelTag::Qda: return "Quadratic Discriminant";
    case ModelTag::SvmGaussian: return "SVM (Gaussian)";
    case ModelTag::SvmQuadratic: return "SVM (Quadratic)";
    case ModelTag::SvmCubic: return "SVM (Cubic)";
    case ModelTag::SubspaceKnn: return "Subspace KNN";
    }
    raise(Errc::Config, "UnknownModelTag", "invalid model tag value");
}

namespace {

Trainer make_trainer(const TrainOptions& opt, std::size_t n_classes) {
    switch (opt.model) {
    case ModelTag::Qda:
        return [opt, n_classes](const Matrix& x, std::span<const int> y) {
            return ClassifierModel(train_qda(x, y, n_classes, opt.qda_lambda));
        };
    case ModelTag::SvmGaussian:
        return [opt, n_classes](const Matrix& x, std::span<const int> y) {
            SvmKernel k;
            k.kind = KernelKind::Gaussian;
            k.gamma = opt.svm_gamma > 0.0 ? opt.svm_gamma : default_gaussian_gamma(x);
            return ClassifierModel(
                train_svm(x, y, n_classes, k, opt.svm_c, opt.svm_tol));
        };
    case ModelTag::SvmQuadratic:
    case ModelTag::SvmCubic:
        return [opt, n_classes](const Matrix& x, std::span<const int> y) {
            SvmKernel k;
            k.kind = opt.model == ModelTag::SvmQuadratic ? KernelKind::Poly2
                                                         : KernelKind::Poly3;
            k.coef = opt.svm_coef;
            return ClassifierModel(
                train_svm(x, y, n_classes, k, opt.svm_c, opt.svm_tol));
        };
    case ModelTag::SubspaceKnn:
        return [opt, n_classes](const Matrix& x, std::span<const int> y) {
            return ClassifierModel(train_subspace_knn(x, y, n_classes, opt.knn_learners,
                                                      opt.knn_dim, opt.knn_k, opt.seed));
        };
    }
    raise(Errc::Config, "UnknownModelTag", "invalid model tag value");
}

std::string options_hash(const TrainOptions& opt) {
    std::string s(model_tag_name(opt.model));
    s += '|' + std::to_string(opt.folds);
    s += '|' + format_double(opt.test_fraction);
    s += '|' + std::to_string(opt.seed);
    s += '|' + format_double(opt.variance_target);
    s += '|' + format_double(opt.clamp_ohms);
    s += '|' + format_double(opt.qda_lambda);
    s += '|' + format_double(opt.svm_c);
    s += '|' + format_double(opt.svm_tol);
    s += '|' + format_double(opt.svm_gamma);
    s += '|' + format_double(opt.svm_coef);
    s += '|' + std::to_string(opt.knn_learners);
    s += '|' + std::to_string(opt.knn_dim);
    s += '|' + std::to_string(opt.knn_k);
    return hex64(fnv1a64(s));
}

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json metric_set_to_json(const MetricSet& m) {
    return json{{"precision", m.precision},
                {"recall", m.recall},
                {"specificity", m.specificity},
                {"accuracy_macro_ovr", m.accuracy_macro_ovr},
                {"accuracy_overall", m.accuracy_overall},
                {"f1", m.f1}};
}

} // namespace

TrainResult train_pipeline(const LabeledDataset& ds, const FrequencySelection& sel,
                           const TrainOptions& opt) {
    if (opt.folds < 2)
        raise(Errc::Config, "ConfigError", "cross-validation needs at least 2 folds");
    if (!(opt.test_fraction > 0.0) || !(opt.test_fraction < 1.0))
        raise(Errc::Config, "ConfigError", "test fraction must be in (0, 1)");
    if (!(opt.variance_target > 0.0) || opt.variance_target > 1.0)
        raise(Errc::Config, "ConfigError", "variance target must be in (0, 1]");
    if (sel.kept.empty())
        raise(Errc::Config, "EmptySelection", "selection keeps no columns");

    const FeatureMatrix fm = feature_matrix(ds, sel.representation, opt.clamp_ohms);
    if (fm.values.cols() != sel.n_columns)
        raise(Errc::InvalidArgument, "WidthMismatch",
              "dataset yields " + std::to_string(fm.values.cols()) +
                  " feature columns, selection expects " +
                  std::to_string(sel.n_columns));

    const std::size_t nc = ds.class_count();
    const SplitIndices split =
        split_train_test(ds.labels, nc, opt.test_fraction, opt.seed);

    const Matrix x_all = fm.values.select_cols(sel.kept);
    const Matrix x_train = x_all.select_rows(split.train);
    const Matrix x_test = x_all.select_rows(split.test);
    std::vector<int> y_train(split.train.size()), y_test(split.test.size());
    for (std::size_t i = 0; i < split.train.size(); ++i)
        y_train[i] = ds.labels[split.train[i]];
    for (std::size_t i = 0; i < split.test.size(); ++i)
        y_test[i] = ds.labels[split.test[i]];

    TrainResult result;
    TrainedClassifier& bundle = result.bundle;
    bundle.selection = sel;
    bundle.standardizer = fit_standardizer(x_train);
    const Matrix z_train = apply_standardizer(bundle.standardizer, x_train);
    bundle.pca = fit_pca(z_train, opt.variance_target);
    const Matrix s_train = pca_transform(bundle.pca, z_train);
    const Matrix s_test =
        pca_transform(bundle.pca, apply_standardizer(bundle.standardizer, x_test));

    const Trainer trainer = make_trainer(opt, nc);
    const std::string tag(model_tag_name(opt.model));

    result.cv = cross_validate(s_train, y_train, ds.classes, opt.folds, trainer,
                               opt.seed);
    for (EvaluationReport& r : result.cv.fold_reports) r.model_tag = tag;

    bundle.model = trainer(s_train, y_train);
    const std::vector<int> pred = predict_matrix(bundle.model, s_test);
    result.test_report = evaluate_labels(y_test, pred, ds.classes);
    result.test_report.model_tag = tag;
    result.test_report.seed = opt.seed;
    result.test_report.split = "test";

    bundle.tag = opt.model;
    bundle.classes = ds.classes;
    bundle.seed = opt.seed;
    bundle.test_fraction = opt.test_fraction;
    bundle.clamp_ohms = opt.clamp_ohms;
    bundle.grid_points = ds.point_count();
    bundle.grid_hash = grid_hash_of(ds);
    bundle.z_ref = ds.z_ref;
    bundle.created_utc = utc_now();
    bundle.config_hash = options_hash(opt);

    json j;
    j["format"] = "zscan-train-report";
    j["version"] = 1;
    j["metadata"] = {{"model", tag},
                     {"seed", opt.seed},
                     {"folds", opt.folds},
                     {"test_fraction", opt.test_fraction},
                     {"variance_target", opt.variance_target},
                     {"classes", ds.classes},
                     {"train_rows", split.train.size()},
                     {"test_rows", split.test.size()},
                     {"feature_columns", sel.n_columns},
                     {"selected_columns", sel.kept.size()},
                     {"pca_components", bundle.pca.n_components()}};
    json folds_json = json::array();
    for (const EvaluationReport& r : result.cv.fold_reports)
        folds_json.push_back(json::parse(report_to_json(r)));
    j["cv"] = {{"folds", std::move(folds_json)},
               {"aggregate", metric_set_to_json(result.cv.aggregate)}};
    j["test"] = json::parse(report_to_json(result.test_report));
    j["summary"] = {{"classifier", tag},
                    {"f1_train", result.cv.aggregate.f1},
                    {"f1_test", result.test_report.metrics.f1},
                    {"precision", result.test_report.metrics.precision},
                    {"recall", result.test_report.metrics.recall},
                    {"specificity", result.test_report.metrics.specificity},
                    {"accuracy", result.test_report.metrics.accuracy_overall}};
    result.report_json = j.dump(2) + "\n";
    return result;
}

std::vector<int> pipeline_predict(const TrainedClassifier& bundle,
                                  const Matrix& features) {
    if (features.cols() != bundle.selection.n_columns)
        raise(Errc::InvalidArgument, "WidthMismatch",
              "feature matrix has " + std::to_string(features.cols()) +
                  " columns, model expects " +
                  std::to_string(bundle.selection.n_columns));
    const Matrix x = features.select_cols(bundle.selection.kept);
    const Matrix z = apply_standardizer(bundle.standardizer, x);
    const Matrix s = pca_transform(bundle.pca, z);
    return predict_matrix(bundle.model, s);
}

std::vector<std::string> pipeline_predict(const TrainedClassifier& bundle,
                                          const LabeledDataset& ds) {
    check_grid(bundle, ds);
    const FeatureMatrix fm =
        feature_matrix(ds, bundle.selection.representation, bundle.clamp_ohms);
    const std::vector<int> idx = pipeline_predict(bundle, fm.values);
    std::vector<std::string> names(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        names[i] = bundle.classes[static_cast<std::size_t>(idx[i])];
    return names;
}

EvalSplit eval_split_from_name(std::string_view name) {
    if (name == "none" || name == "all") return EvalSplit::All;
    if (name == "test") return EvalSplit::Test;
    if (name == "train") return EvalSplit::Train;
    raise(Errc::Config, "ConfigError", "unknown split: " + std::string(name));
}

EvaluationReport evaluate_pipeline(const TrainedClassifier& bundle,
                                   const LabeledDataset& ds, EvalSplit split) {
    check_grid(bundle, ds);

    // Map labels onto the bundle roster so the stored split replays even
    // when the evaluated file lists its classes in another order.
    std::vector<int> mapped(ds.trace_count());
    for (std::size_t i = 0; i < ds.trace_count(); ++i) {
        const std::string& name = ds.classes[static_cast<std::size_t>(ds.labels[i])];
        const auto it = std::find(bundle.classes.begin(), bundle.classes.end(), name);
        if (it == bundle.classes.end())
            raise(Errc::InvalidArgument, "UnknownLabel",
                  "class not in the model roster: " + name);
        mapped[i] = static_cast<int>(it - bundle.classes.begin());
    }

    std::vector<std::size_t> rows;
    const char* split_name = "all";
    if (split == EvalSplit::All) {
        rows.resize(ds.trace_count());
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    } else {
        SplitIndices si = split_train_test(mapped, bundle.classes.size(),
                                           bundle.test_fraction, bundle.seed);
        rows = split == EvalSplit::Test ? std::move(si.test) : std::move(si.train);
        split_name = split == EvalSplit::Test ? "test" : "train";
    }

    const FeatureMatrix fm =
        feature_matrix(ds, bundle.selection.representation, bundle.clamp_ohms);
    const std::vector<int> pred = pipeline_predict(bundle, fm.values.select_rows(rows));
    std::vector<int> y_true(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) y_true[i] = mapped[rows[i]];

    EvaluationReport report = evaluate_labels(y_true, pred, bundle.classes);
    report.model_tag = std::string(model_tag_name(bundle.tag));
    report.seed = bundle.seed;
    report.split = split_name;
    return report;
}

namespace {

json matrix_to_json(const Matrix& m) {
    json data = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const json& j) {
    const std::size_t rows = j.at("rows").get<std::size_t>();
    const std::size_t cols = j.at("cols").get<std::size_t>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != rows * cols)
        raise(Errc::Parse, "MalformedModel", "matrix data length mismatch");
    Matrix m(rows, cols);
    std::size_t k = 0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = data[k++];
    return m;
}

json model_to_json(const TrainedClassifier& bundle) {
    json params;
    if (const auto* qda = std::get_if<QdaModel>(&bundle.model)) {
        params["lambda"] = qda->lambda;
        params["n_classes"] = qda->n_classes;
        params["priors"] = qda->priors;
        params["means"] = qda->means;
        json covs = json::array();
        for (const Matrix& c : qda->covariances) covs.push_back(matrix_to_json(c));
        params["covariances"] = std::move(covs);
    } else if (const auto* svm = std::get_if<SvmModel>(&bundle.model)) {
        const char* kind = svm->kernel.kind == KernelKind::Gaussian ? "gaussian"
                           : svm->kernel.kind == KernelKind::Poly2 ? "poly2"
                                                                   : "poly3";
        params["kernel"] = {{"kind", kind},
                            {"gamma", svm->kernel.gamma},
                            {"coef", svm->kernel.coef}};
        params["box_c"] = svm->box_c;
        params["tol"] = svm->tol;
        params["n_classes"] = svm->n_classes;
        json pairs = json::array();
        for (const SvmPairModel& p : svm->pairs) {
            pairs.push_back(json{{"class_a", p.class_a},
                                 {"class_b", p.class_b},
                                 {"support_vectors", matrix_to_json(p.support_vectors)},
                                 {"coef", p.coef},
                                 {"bias", p.bias},
                                 {"kkt_residual", p.kkt_residual},
                                 {"iterations", p.iterations}});
        }
        params["pairs"] = std::move(pairs);
    } else {
        const auto& knn = std::get<SubspaceKnnModel>(bundle.model);
        params["n_learners"] = knn.n_learners;
        params["subspace_dim"] = knn.subspace_dim;
        params["k"] = knn.k;
        params["seed"] = knn.seed;
        params["n_classes"] = knn.n_classes;
        params["subspaces"] = knn.subspaces;
        params["train_x"] = matrix_to_json(knn.train_x);
        params["train_y"] = knn.train_y;
    }
    return json{{"tag", std::string(model_tag_name(bundle.tag))},
                {"parameters", std::move(params)}};
}

ClassifierModel model_from_json(ModelTag tag, const json& params) {
    switch (tag) {
    case ModelTag::Qda: {
        QdaModel m;
        m.lambda = params.at("lambda").get<double>();
        m.n_classes = params.at("n_classes").get<std::size_t>();
        m.priors = params.at("priors").get<std::vector<double>>();
        m.means = params.at("means").get<std::vector<std::vector<double>>>();
        for (const json& c : params.at("covariances"))
            m.covariances.push_back(matrix_from_json(c));
        if (m.priors.size() != m.n_classes || m.means.size() != m.n_classes ||
            m.covariances.size() != m.n_classes)
            raise(Errc::Parse, "MalformedModel", "inconsistent class counts");
        for (const Matrix& c : m.covariances) {
            m.chol.push_back(cholesky(c));
            m.logdet.push_back(cholesky_logdet(m.chol.back()));
        }
        return m;
    }
    case ModelTag::SvmGaussian:
    case ModelTag::SvmQuadratic:
    case ModelTag::SvmCubic: {
        SvmModel m;
        const json& k = params.at("kernel");
        const std::string kind = k.at("kind").get<std::string>();
        if (kind == "gaussian") m.kernel.kind = KernelKind::Gaussian;
        else if (kind == "poly2") m.kernel.kind = KernelKind::Poly2;
        else if (kind == "poly3") m.kernel.kind = KernelKind::Poly3;
        else raise(Errc::Parse, "MalformedModel", "unknown kernel kind: " + kind);
        m.kernel.gamma = k.at("gamma").get<double>();
        m.kernel.coef = k.at("coef").get<double>();
        m.box_c = params.at("box_c").get<double>();
        m.tol = params.at("tol").get<double>();
        m.n_classes = params.at("n_classes").get<std::size_t>();
        for (const json& pj : params.at("pairs")) {
            SvmPairModel p;
            p.class_a = pj.at("class_a").get<int>();
            p.class_b = pj.at("class_b").get<int>();
            p.support_vectors = matrix_from_json(pj.at("support_vectors"));
            p.coef = pj.at("coef").get<std::vector<double>>();
            p.bias = pj.at("bias").get<double>();
            p.kkt_residual = pj.at("kkt_residual").get<double>();
            p.iterations = pj.at("iterations").get<std::size_t>();
            if (p.coef.size() != p.support_vectors.rows())
                raise(Errc::Parse, "MalformedModel", "support vector count mismatch");
            m.pairs.push_back(std::move(p));
        }
        return m;
    }
    case ModelTag::SubspaceKnn: {
        SubspaceKnnModel m;
        m.n_learners = params.at("n_learners").get<std::size_t>();
        m.subspace_dim = params.at("subspace_dim").get<std::size_t>();
        m.k = params.at("k").get<std::size_t>();
        m.seed = params.at("seed").get<std::uint64_t>();
        m.n_classes = params.at("n_classes").get<std::size_t>();
        m.subspaces =
            params.at("subspaces").get<std::vector<std::vector<std::size_t>>>();
        m.train_x = matrix_from_json(params.at("train_x"));
        m.train_y = params.at("train_y").get<std::vector<int>>();
        if (m.subspaces.size() != m.n_learners ||
            m.train_y.size() != m.train_x.rows())
            raise(Errc::Parse, "MalformedModel", "inconsistent ensemble shape");
        return m;
    }
    }
    raise(Errc::Parse, "MalformedModel", "invalid model tag value");
}

} // namespace

std::string bundle_to_json(const TrainedClassifier& bundle) {
    json j;
    j["format"] = "zscan-model";
    j["version"] = 1;
    j["metadata"] = {{"classes", bundle.classes},
                     {"seed", bundle.seed},
                     {"test_fraction", bundle.test_fraction},
                     {"clamp_ohms", bundle.clamp_ohms},
                     {"grid_points", bundle.grid_points},
                     {"grid_hash", bundle.grid_hash},
                     {"z_ref", bundle.z_ref},
                     {"created_utc", bundle.created_utc},
                     {"config_hash", bundle.config_hash}};
    j["preprocessing"] = {
        {"selection", json::parse(selection_to_json(bundle.selection))},
        {"standardizer",
         {{"mean", bundle.standardizer.mean}, {"stddev", bundle.standardizer.stddev}}},
        {"pca",
         {{"mean", bundle.pca.mean},
          {"components", matrix_to_json(bundle.pca.components)},
          {"eigenvalues", bundle.pca.eigenvalues},
          {"explained_variance_ratio", bundle.pca.explained_variance_ratio},
          {"variance_target", bundle.pca.variance_target}}}};
    j["model"] = model_to_json(bundle);
    return j.dump(2) + "\n";
}

TrainedClassifier bundle_from_json(std::string_view json_text) {
    json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        raise(Errc::Parse, "MalformedModel", "model bundle is not valid JSON");
    if (j.value("format", "") != "zscan-model" || j.value("version", 0) != 1)
        raise(Errc::Parse, "MalformedModel", "not a zscan-model version 1 document");
    try {
        TrainedClassifier b;
        const json& meta = j.at("metadata");
        b.classes = meta.at("classes").get<std::vector<std::string>>();
        b.seed = meta.at("seed").get<std::uint64_t>();
        b.test_fraction = meta.at("test_fraction").get<double>();
        b.clamp_ohms = meta.at("clamp_ohms").get<double>();
        b.grid_points = meta.at("grid_points").get<std::size_t>();
        b.grid_hash = meta.at("grid_hash").get<std::string>();
        b.z_ref = meta.at("z_ref").get<double>();
        b.created_utc = meta.value("created_utc", "");
        b.config_hash = meta.value("config_hash", "");

        const json& pre = j.at("preprocessing");
        b.selection = selection_from_json(pre.at("selection").dump());
        b.standardizer.mean = pre.at("standardizer").at("mean").get<std::vector<double>>();
        b.standardizer.stddev =
            pre.at("standardizer").at("stddev").get<std::vector<double>>();
        if (b.standardizer.mean.size() != b.standardizer.stddev.size())
            raise(Errc::Parse, "MalformedModel", "standardizer length mismatch");

        const json& pj = pre.at("pca");
        b.pca.mean = pj.at("mean").get<std::vector<double>>();
        b.pca.components = matrix_from_json(pj.at("components"));
        b.pca.eigenvalues = pj.at("eigenvalues").get<std::vector<double>>();
        b.pca.explained_variance_ratio =
            pj.at("explained_variance_ratio").get<std::vector<double>>();
        b.pca.variance_target = pj.at("variance_target").get<double>();
        if (b.pca.mean.size() != b.pca.components.cols() ||
            b.pca.eigenvalues.size() != b.pca.components.rows() ||
            b.pca.explained_variance_ratio.size() != b.pca.components.rows())
            raise(Errc::Parse, "MalformedModel", "pca shape mismatch");
        if (b.standardizer.mean.size() != b.selection.kept.size() ||
            b.pca.mean.size() != b.selection.kept.size())
            raise(Errc::Parse, "MalformedModel",
                  "preprocessing chain widths are inconsistent");

        const json& mj = j.at("model");
        b.tag = model_tag_from_name(mj.at("tag").get<std::string>());
        b.model = model_from_json(b.tag, mj.at("parameters"));
        return b;
    } catch (const json::exception& e) {
        raise(Errc::Parse, "MalformedModel", e.what());
    }
}

namespace {

struct TableRow {
    std::string name;
    bool has_train = false;
    double f1_train = 0.0;
    double f1_test = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double specificity = 0.0;
    double accuracy = 0.0;
};

std::string display_for_tag(const std::string& tag) {
    try {
        return std::string(model_tag_display(model_tag_from_name(tag)));
    } catch (const Error&) {
        return tag.empty() ? std::string("(unnamed)") : tag;
    }
}

std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

} // namespace

std::string render_report_table(const std::vector<std::string>& report_docs, bool csv) {
    if (report_docs.empty())
        raise(Errc::InvalidArgument, "EmptyReportList", "no reports to render");

    std::vector<TableRow> rows;
    std::vector<std::string> roster;
    bool have_roster = false;
    for (const std::string& doc : report_docs) {
        json j = json::parse(doc, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            raise(Errc::Parse, "MalformedReport", "report is not valid JSON");
        TableRow row;
        std::vector<std::string> classes;
        const std::string format = j.value("format", "");
        try {
            if (format == "zscan-train-report") {
                classes = j.at("metadata").at("classes").get<std::vector<std::string>>();
                const json& s = j.at("summary");
                row.name = display_for_tag(s.at("classifier").get<std::string>());
                row.has_train = true;
                row.f1_train = s.at("f1_train").get<double>();
                row.f1_test = s.at("f1_test").get<double>();
                row.precision = s.at("precision").get<double>();
                row.recall = s.at("recall").get<double>();
                row.specificity = s.at("specificity").get<double>();
                row.accuracy = s.at("accuracy").get<double>();
            } else if (format == "zscan-report") {
                const EvaluationReport r = report_from_json(doc);
                classes = r.cm.classes;
                row.name = display_for_tag(r.model_tag);
                row.f1_test = r.metrics.f1;
                row.precision = r.metrics.precision;
                row.recall = r.metrics.recall;
                row.specificity = r.metrics.specificity;
                row.accuracy = r.metrics.accuracy_overall;
            } else {
                raise(Errc::Parse, "MalformedReport",
                      "unrecognized report format: " + format);
            }
        } catch (const json::exception& e) {
            raise(Errc::Parse, "MalformedReport", e.what());
        }
        if (!have_roster) {
            roster = classes;
            have_roster = true;
        } else if (classes != roster) {
            raise(Errc::Config, "RosterMismatch",
                  "reports disagree on the class roster");
        }
        rows.push_back(std::move(row));
    }

    static const char* headers[7] = {"Classifier", "F1 (train)", "F1 (test)",
                                     "Precision",  "Recall",     "Specificity",
                                     "Accuracy"};
    std::string out;
    if (csv) {
        out = "classifier,f1_train,f1_test,precision,recall,specificity,accuracy\n";
        for (const TableRow& r : rows) {
            out += '"' + r.name + "\",";
            out += (r.has_train ? fmt4(r.f1_train) : std::string()) + ',';
            out += fmt4(r.f1_test) + ',' + fmt4(r.precision) + ',' + fmt4(r.recall) +
                   ',' + fmt4(r.specificity) + ',' + fmt4(r.accuracy) + '\n';
        }
        return out;
    }

    std::size_t name_w = std::string(headers[0]).size();
    for (const TableRow& r : rows) name_w = std::max(name_w, r.name.size());
    const std::size_t col_w = 11;

    auto pad_left = [](const std::string& s, std::size_t w) {
        return std::string(w > s.size() ? w - s.size() : 0, ' ') + s;
    };
    auto pad_right = [](const std::string& s, std::size_t w) {
        return s + std::string(w > s.size() ? w - s.size() : 0, ' ');
    };

    out = pad_right(headers[0], name_w);
    for (int c = 1; c < 7; ++c) out += "  " + pad_left(headers[c], col_w);
    out += '\n';
    out += std::string(name_w + 6 * (col_w + 2), '-') + '\n';
    for (const TableRow& r : rows) {
        out += pad_right(r.name, name_w);
        out += "  " + pad_left(r.has_train ? fmt4(r.f1_train) : "-", col_w);
        for (const double v :
             {r.f1_test, r.precision, r.recall, r.specificity, r.accuracy})
            out += "  " + pad_left(fmt4(v), col_w);
        out += '\n';
    }
    return out;
}

} // namespace zscan
