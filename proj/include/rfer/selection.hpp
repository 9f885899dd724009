#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rfer/eval.hpp"
#include "rfer/features.hpp"
#include "rfer/folds.hpp"
#include "rfer/svm.hpp"

namespace rfer {

// Wrapper-selection workbench: a fixed feature matrix with its block layout,
// fixed folds, and the SVM parameters used for every candidate evaluation.
struct SelectionConfig {
    const Matrix& X;
    const FeatureLayout& layout;
    const std::vector<int>& labels;
    std::vector<std::string> classes;
    FoldAssignment folds;
    TrainParams params;
    // When >= 0, this region's blocks are part of every evaluated feature
    // set but never a selection candidate.
    int always_include_region = -1;
};

// Columns belonging to the given regions (block order), optionally plus the
// always-include region.
Matrix subset_columns(const Matrix& X, const FeatureLayout& layout,
                      const std::vector<int>& region_ids);

struct SelectionStep {
    std::vector<std::pair<int, double>> candidate_scores; // region id -> CV accuracy
    int chosen_region = -1;
    double best_accuracy = 0.0;
    bool accepted = false;
};

struct SelectionTrace {
    int seed_region = -1;
    double seed_accuracy = 0.0;
    std::vector<SelectionStep> steps;  // every evaluated step, accepted or not
    std::vector<int> selected;         // in acceptance order, seed first
    std::size_t total_cv_runs = 0;     // seed evaluation + all candidate evaluations
};

// One CV score per region using only that region's blocks, sorted by
// descending accuracy (ties toward the lower region id).
std::vector<std::pair<int, double>> rank_single_regions(const SelectionConfig& cfg);

// Greedy forward search from the seed region: each step appends the best
// remaining region; stops when no candidate improves the running best by
// more than epsilon, or when max_regions is reached (0 = unlimited).
SelectionTrace greedy_forward_select(const SelectionConfig& cfg, int seed_region,
                                     double epsilon = 0.0, std::size_t max_regions = 0);

nlohmann::json selection_trace_json(const SelectionTrace& trace, const FeatureLayout& layout);

} // namespace rfer
