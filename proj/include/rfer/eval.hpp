#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rfer/features.hpp"
#include "rfer/folds.hpp"
#include "rfer/svm.hpp"

namespace rfer {

// Rows are true classes, columns predicted.
struct ConfusionMatrix {
    std::vector<std::string> classes;
    std::vector<std::vector<std::size_t>> counts;

    explicit ConfusionMatrix(std::vector<std::string> cls = {});
    void add(int true_idx, int pred_idx) { counts[true_idx][pred_idx]++; }
    std::size_t total() const;
    std::size_t trace() const;
    double accuracy() const; // trace / total
    std::vector<std::size_t> row_sums() const;
};

struct CVResult {
    double mean_accuracy = 0.0;     // unweighted mean of per-fold accuracies
    double weighted_accuracy = 0.0; // trace(aggregate) / total
    std::vector<double> per_fold_accuracy;
    ConfusionMatrix confusion;
    std::vector<int> predictions; // per-sample predicted class index
};

// For each fold: fit scaling and train on the remaining folds, predict the
// held-out fold. Scaling statistics never see held-out samples.
CVResult cross_validate(const Matrix& X, const std::vector<int>& labels,
                        const std::vector<std::string>& classes, const FoldAssignment& folds,
                        const TrainParams& params);

// Paper-style table: row-normalized percentages plus overall accuracy.
std::string report_text(const ConfusionMatrix& matrix);
nlohmann::json report_json(const ConfusionMatrix& matrix);

} // namespace rfer
