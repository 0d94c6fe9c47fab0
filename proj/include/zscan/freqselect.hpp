// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the zscan authors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zscan/matrix.hpp"
#include "zscan/rf.hpp"

namespace zscan {

// Sample Pearson correlation, clamped into [-1, 1] against rounding.
// Throws Errc::Numeric "ZeroVariance" when either input is constant;
// relevance scoring treats such columns as uninformative (score 0).
double pearson(std::span<const double> x, std::span<const double> y);

// Per-column relevance: max over classes of |pearson| between the column
// and that class's one-vs-rest 0/1 indicator.
struct RelevanceScores {
    std::vector<double> score;   // in [0, 1]; 0 for zero-variance columns
    std::vector<int> argmax_class; // -1 when no class correlates (score 0)
};

// labels are class indices in [0, n_classes). At least two distinct
// classes must be present ("SingleClass" otherwise); rows >= 2.
RelevanceScores class_relevance(const Matrix& features, std::span<const int> labels,
                                std::size_t n_classes);

struct SelectionPolicy {
    enum class Kind { TopFraction, RelThreshold, Both };
    Kind kind = Kind::Both;
    double top_fraction = 0.20;  // keeps ceil(f*m) highest-scoring columns
    double rel_threshold = 0.70; // keeps score >= t * max(score)
};

SelectionPolicy::Kind policy_kind_from_name(std::string_view name);
std::string_view policy_kind_name(SelectionPolicy::Kind kind);

// Stage 1: relevance filtering. Returns surviving column indices in
// descending relevance order (score desc, index asc on ties), which is
// the order prune_redundant expects. "both" keeps the intersection of
// the two sub-policies. Throws "EmptySelection" when nothing survives.
std::vector<std::size_t> select_relevant(const RelevanceScores& scores,
                                         const SelectionPolicy& policy);

// Two-stage selection result plus enough context to audit and reapply it.
// kept is ascending and unique; the companion vectors are aligned to it.
struct FrequencySelection {
    std::vector<std::size_t> kept;
    std::size_t stage1_count = 0;
    std::size_t n_columns = 0;
    SelectionPolicy policy;
    double max_corr = 0.90;
    Representation representation = Representation::ImpedanceMagnitude;
    std::string rows_used = "train"; // "train" or "all"
    std::uint64_t seed = 0;
    double test_fraction = 0.30;
    std::vector<double> kept_relevance;
    std::vector<std::string> kept_class;
    std::vector<double> kept_frequency_hz;

    std::size_t stage2_count() const noexcept { return kept.size(); }
};

// Stage 2: greedy redundancy pruning. Walks candidates in the order given
// (descending relevance) and keeps one iff its |pearson| against every
// already-kept column is < max_corr; zero-variance pairs count as 0.
// Sequential by specification: the result depends on visit order.
// Fills kept, stage1_count, stage2 via kept, n_columns and max_corr;
// callers add policy and per-index metadata.
FrequencySelection prune_redundant(const Matrix& features,
                                   std::span<const std::size_t> candidates,
                                   double max_corr = 0.90);

// JSON round trip for a FrequencySelection (schema documented in README).
std::string selection_to_json(const FrequencySelection& sel);
FrequencySelection selection_from_json(std::string_view json_text);

} // namespace zscan
