#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rfer/eval.hpp"
#include "rfer/features.hpp"
#include "rfer/folds.hpp"
#include "rfer/manifest.hpp"

namespace rfer {

// One extracted dataset: consistent layout, one row per manifest sample.
struct FeatureDataset {
    FeatureLayout layout;
    Matrix X;
    std::vector<int> labels;
    std::vector<std::string> classes;
};

FeatureDataset extract_dataset(const DatasetManifest& manifest, const RegionScheme& scheme,
                               const std::vector<int>& mask_indices, FeatureKind kinds);

// Grid-baseline features: rows x cols blocks over each sample's landmark
// bounding box.
FeatureDataset extract_grid_dataset(const DatasetManifest& manifest, int rows, int cols,
                                    FeatureKind kinds);

// Header row names each column "region:kind:index"; the label column comes
// first.
void write_features_csv(std::ostream& out, const FeatureDataset& ds,
                        const DatasetManifest& manifest);

// The evaluate report: protocol, per-fold and aggregate accuracies, and the
// confusion matrix.
nlohmann::json evaluation_json(const CVResult& cv, const FoldAssignment& folds,
                               const std::vector<std::string>& classes);

} // namespace rfer
