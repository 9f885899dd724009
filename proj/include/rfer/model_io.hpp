#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rfer/features.hpp"
#include "rfer/geometry.hpp"
#include "rfer/image.hpp"
#include "rfer/landmarks.hpp"
#include "rfer/svm.hpp"

namespace rfer {

enum class MaskSource : std::uint8_t { scheme = 0, grid = 1 };

// Everything needed to reproduce predictions: mask geometry source, feature
// configuration, scaling statistics and the trained classifiers. The region
// scheme is embedded so prediction needs no side files; its hash guards
// against mixing a model with a different scheme.
struct SavedModel {
    MaskSource source = MaskSource::scheme;
    RegionScheme scheme;
    int grid_rows = 0;
    int grid_cols = 0;
    FeatureKind kinds = FeatureKind::both;
    std::vector<int> mask_indices;
    ScalingStats scaling;
    SvmModel svm;
};

// Versioned little-endian container, magic bytes "RFER".
void save_model(const std::string& path, const SavedModel& model);
SavedModel load_model(const std::string& path);

std::vector<std::uint8_t> serialize_model(const SavedModel& model);
SavedModel deserialize_model(const std::vector<std::uint8_t>& bytes,
                             const std::string& origin = "<memory>");

// Masks for one sample under the model's geometry source.
std::vector<RegionMask> model_masks(const SavedModel& model, const LandmarkSet& landmarks,
                                    int image_width, int image_height);

// (predicted class index, per-class decision values)
std::pair<int, std::vector<double>> predict_sample(const SavedModel& model, const Image& image,
                                                   const LandmarkSet& landmarks);

} // namespace rfer
