// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#include "zscan/freqselect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "zscan/error.hpp"
#include "zscan/parallel.hpp"

namespace zscan {

namespace {
using nlohmann::json;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        raise(Errc::InvalidArgument, "LengthMismatch", "vectors must have equal length");
    if (x.size() < 2)
        raise(Errc::InvalidArgument, "TooFewPoints", "need at least 2 samples");

    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        raise(Errc::Numeric, "ZeroVariance", "correlation of a constant vector is undefined");
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

RelevanceScores class_relevance(const Matrix& features, std::span<const int> labels,
                                std::size_t n_classes) {
    const std::size_t n = features.rows();
    const std::size_t m = features.cols();
    if (labels.size() != n)
        raise(Errc::InvalidArgument, "LengthMismatch", "one label per feature row required");
    if (n < 2)
        raise(Errc::InvalidArgument, "TooFewPoints", "need at least 2 rows");

    std::vector<std::size_t> class_n(n_classes, 0);
    for (int l : labels) {
        if (l < 0 || static_cast<std::size_t>(l) >= n_classes)
            raise(Errc::InvalidArgument, "UnknownLabel", "label index out of range");
        class_n[static_cast<std::size_t>(l)]++;
    }
    std::size_t present = 0;
    for (std::size_t c : class_n)
        if (c > 0) ++present;
    if (present < 2)
        raise(Errc::InvalidArgument, "SingleClass",
              "relevance needs at least 2 classes present");

    RelevanceScores out;
    out.score.assign(m, 0.0);
    out.argmax_class.assign(m, -1);

    // Indicator correlations reduce to per-class column sums:
    //   r_k = n_k (mu_k - mu) / sqrt(sxx * n_k (1 - n_k / n)).
    // One pass for the column moments, one for the class sums.
    const double nf = static_cast<double>(n);
    parallel_for(m, [&](std::size_t begin, std::size_t end) {
        std::vector<double> class_sum(n_classes);
        for (std::size_t col = begin; col < end; ++col) {
            double sum = 0.0, sumsq = 0.0;
            std::fill(class_sum.begin(), class_sum.end(), 0.0);
            for (std::size_t r = 0; r < n; ++r) {
                const double v = features(r, col);
                sum += v;
                class_sum[static_cast<std::size_t>(labels[r])] += v;
            }
            const double mean = sum / nf;
            for (std::size_t r = 0; r < n; ++r) {
                const double d = features(r, col) - mean;
                sumsq += d * d;
            }
            if (sumsq == 0.0) continue; // ZeroVariance policy: score stays 0

            double best = 0.0;
            int best_k = -1;
            for (std::size_t k = 0; k < n_classes; ++k) {
                const double nk = static_cast<double>(class_n[k]);
                if (nk == 0.0 || class_n[k] == n) continue;
                const double sxy = class_sum[k] - nk * mean;
                const double syy = nk * (1.0 - nk / nf);
                const double r = std::abs(sxy / std::sqrt(sumsq * syy));
                if (r > best) {
                    best = r;
                    best_k = static_cast<int>(k);
                }
            }
            out.score[col] = std::min(best, 1.0);
            out.argmax_class[col] = best_k;
        }
    });
    return out;
}

SelectionPolicy::Kind policy_kind_from_name(std::string_view name) {
    if (name == "top_fraction") return SelectionPolicy::Kind::TopFraction;
    if (name == "rel_threshold") return SelectionPolicy::Kind::RelThreshold;
    if (name == "both") return SelectionPolicy::Kind::Both;
    raise(Errc::Config, "ConfigError", "unknown policy kind '" + std::string(name) + "'");
}

std::string_view policy_kind_name(SelectionPolicy::Kind kind) {
    switch (kind) {
        case SelectionPolicy::Kind::TopFraction: return "top_fraction";
        case SelectionPolicy::Kind::RelThreshold: return "rel_threshold";
        case SelectionPolicy::Kind::Both: return "both";
    }
    return "both";
}

std::vector<std::size_t> select_relevant(const RelevanceScores& scores,
                                         const SelectionPolicy& policy) {
    const std::size_t m = scores.score.size();
    if (m == 0)
        raise(Errc::InvalidArgument, "EmptySelection", "no columns to select from");

    const bool uses_fraction = policy.kind != SelectionPolicy::Kind::RelThreshold;
    const bool uses_threshold = policy.kind != SelectionPolicy::Kind::TopFraction;
    if (uses_fraction &&
        (!(policy.top_fraction > 0.0) || !(policy.top_fraction <= 1.0)))
        raise(Errc::Config, "ConfigError", "top_fraction must be in (0, 1]");
    if (uses_threshold &&
        (!(policy.rel_threshold > 0.0) || !(policy.rel_threshold <= 1.0)))
        raise(Errc::Config, "ConfigError", "rel_threshold must be in (0, 1]");

    // Descending score, ascending index on ties: the boundary tie rule and
    // the visit order for the downstream greedy prune in one sort.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores.score[a] != scores.score[b]) return scores.score[a] > scores.score[b];
        return a < b;
    });

    std::size_t limit = m;
    if (uses_fraction) {
        limit = static_cast<std::size_t>(
            std::ceil(policy.top_fraction * static_cast<double>(m)));
        limit = std::min(limit, m);
    }

    std::vector<std::size_t> kept;
    kept.reserve(limit);
    const double cutoff =
        uses_threshold ? policy.rel_threshold * scores.score[order.front()] : 0.0;
    for (std::size_t i = 0; i < limit; ++i) {
        const std::size_t idx = order[i];
        if (uses_threshold && scores.score[idx] < cutoff) break;
        kept.push_back(idx);
    }
    if (kept.empty())
        raise(Errc::InvalidArgument, "EmptySelection",
              "no column satisfies the selection policy");
    return kept;
}

FrequencySelection prune_redundant(const Matrix& features,
                                   std::span<const std::size_t> candidates,
                                   double max_corr) {
    if (candidates.empty())
        raise(Errc::InvalidArgument, "EmptySelection", "candidate list is empty");
    if (!(max_corr > 0.0) || !(max_corr <= 1.0))
        raise(Errc::Config, "ConfigError", "max_corr must be in (0, 1]");
    const std::size_t n = features.rows();
    if (n < 2)
        raise(Errc::InvalidArgument, "TooFewPoints", "need at least 2 rows");
    for (std::size_t c : candidates)
        if (c >= features.cols())
            raise(Errc::InvalidArgument, "IndexOutOfRange", "candidate column out of range");

    // Normalize candidate columns once; pairwise Pearson then collapses to
    // a dot product. Zero-variance columns normalize to zero vectors, which
    // yields correlation 0 against everything, matching the stated policy.
    const std::size_t nc = candidates.size();
    Matrix normalized(nc, n);
    parallel_for(nc, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::size_t col = candidates[i];
            auto out = normalized.row(i);
            double mean = 0.0;
            for (std::size_t r = 0; r < n; ++r) mean += features(r, col);
            mean /= static_cast<double>(n);
            double ss = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                const double d = features(r, col) - mean;
                out[r] = d;
                ss += d * d;
            }
            if (ss == 0.0) {
                for (std::size_t r = 0; r < n; ++r) out[r] = 0.0;
            } else {
                const double inv = 1.0 / std::sqrt(ss);
                for (std::size_t r = 0; r < n; ++r) out[r] *= inv;
            }
        }
    });

    // Greedy pass, sequential by specification (result is order-dependent).
    std::vector<std::size_t> kept_rows;
    for (std::size_t i = 0; i < nc; ++i) {
        const auto cand = normalized.row(i);
        bool keep = true;
        for (std::size_t k : kept_rows) {
            const auto prev = normalized.row(k);
            double dot = 0.0;
            for (std::size_t r = 0; r < n; ++r) dot += cand[r] * prev[r];
            if (std::abs(std::clamp(dot, -1.0, 1.0)) >= max_corr) {
                keep = false;
                break;
            }
        }
        if (keep) kept_rows.push_back(i);
    }

    FrequencySelection sel;
    sel.stage1_count = nc;
    sel.n_columns = features.cols();
    sel.max_corr = max_corr;
    sel.kept.reserve(kept_rows.size());
    for (std::size_t k : kept_rows) sel.kept.push_back(candidates[k]);
    std::sort(sel.kept.begin(), sel.kept.end());
    return sel;
}

std::string selection_to_json(const FrequencySelection& sel) {
    json j;
    j["format"] = "zscan-selection";
    j["version"] = 1;
    j["representation"] = std::string(representation_name(sel.representation));
    j["n_columns"] = sel.n_columns;
    j["policy"] = {{"kind", std::string(policy_kind_name(sel.policy.kind))},
                   {"top_fraction", sel.policy.top_fraction},
                   {"rel_threshold", sel.policy.rel_threshold}};
    j["max_corr"] = sel.max_corr;
    j["stage1_count"] = sel.stage1_count;
    j["stage2_count"] = sel.stage2_count();
    j["rows_used"] = sel.rows_used;
    j["seed"] = sel.seed;
    j["test_fraction"] = sel.test_fraction;
    json kept = json::array();
    for (std::size_t i = 0; i < sel.kept.size(); ++i) {
        json item;
        item["index"] = sel.kept[i];
        item["frequency_hz"] =
            i < sel.kept_frequency_hz.size() ? sel.kept_frequency_hz[i] : 0.0;
        item["relevance"] = i < sel.kept_relevance.size() ? sel.kept_relevance[i] : 0.0;
        item["class"] = i < sel.kept_class.size() ? sel.kept_class[i] : "";
        kept.push_back(std::move(item));
    }
    j["kept"] = std::move(kept);
    return j.dump(2) + "\n";
}

FrequencySelection selection_from_json(std::string_view json_text) {
    json j = json::parse(json_text, nullptr, false);
    if (j.is_discarded())
        raise(Errc::Parse, "MalformedJson", "selection is not valid JSON");
    if (!j.is_object() || j.value("format", "") != "zscan-selection")
        raise(Errc::Parse, "WrongFormat", "not a zscan-selection document");
    if (j.value("version", 0) != 1)
        raise(Errc::Parse, "WrongFormat", "unsupported selection version");

    try {
        FrequencySelection sel;
        sel.representation =
            representation_from_name(j.at("representation").get<std::string>());
        sel.n_columns = j.at("n_columns").get<std::size_t>();
        const json& p = j.at("policy");
        sel.policy.kind = policy_kind_from_name(p.at("kind").get<std::string>());
        sel.policy.top_fraction = p.at("top_fraction").get<double>();
        sel.policy.rel_threshold = p.at("rel_threshold").get<double>();
        sel.max_corr = j.at("max_corr").get<double>();
        sel.stage1_count = j.at("stage1_count").get<std::size_t>();
        sel.rows_used = j.value("rows_used", "train");
        sel.seed = j.value("seed", 0ull);
        sel.test_fraction = j.value("test_fraction", 0.30);

        const json& kept = j.at("kept");
        if (!kept.is_array())
            raise(Errc::Parse, "WrongFormat", "kept must be an array");
        std::size_t prev = 0;
        bool first = true;
        for (const json& item : kept) {
            const std::size_t idx = item.at("index").get<std::size_t>();
            if (!first && idx <= prev)
                raise(Errc::Parse, "WrongFormat", "kept indices must be strictly ascending");
            if (idx >= sel.n_columns)
                raise(Errc::Parse, "WrongFormat", "kept index out of range");
            sel.kept.push_back(idx);
            sel.kept_frequency_hz.push_back(item.value("frequency_hz", 0.0));
            sel.kept_relevance.push_back(item.value("relevance", 0.0));
            sel.kept_class.push_back(item.value("class", ""));
            prev = idx;
            first = false;
        }
        const std::size_t stage2 = j.at("stage2_count").get<std::size_t>();
        if (stage2 != sel.kept.size() || sel.kept.size() > sel.stage1_count ||
            sel.stage1_count > sel.n_columns)
            raise(Errc::Parse, "WrongFormat",
                  "stage counts are inconsistent with the kept list");
        if (sel.kept.empty())
            raise(Errc::Parse, "WrongFormat", "kept list must not be empty");
        return sel;
    } catch (const json::exception& e) {
        raise(Errc::Parse, "WrongFormat", std::string("selection JSON: ") + e.what());
    }
}

} // namespace zscan
