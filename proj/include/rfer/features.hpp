#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rfer/geometry.hpp"
#include "rfer/image.hpp"
#include "rfer/landmarks.hpp"

namespace rfer {

// Dense row-major matrix; rows are samples.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double* row(std::size_t r) { return data.data() + r * cols; }
    const double* row(std::size_t r) const { return data.data() + r * cols; }
    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

enum class BlockKind : std::uint8_t { lbp = 0, ncm = 1 };

enum class FeatureKind : std::uint8_t { lbp = 1, ncm = 2, both = 3 };

inline bool wants_lbp(FeatureKind k) { return k == FeatureKind::lbp || k == FeatureKind::both; }
inline bool wants_ncm(FeatureKind k) { return k == FeatureKind::ncm || k == FeatureKind::both; }

struct LayoutBlock {
    std::string region;
    int region_index = -1; // index into the built mask list
    BlockKind kind = BlockKind::lbp;
    std::size_t offset = 0;
    std::size_t length = 0;
};

struct FeatureLayout {
    std::vector<LayoutBlock> blocks;

    std::size_t dim() const {
        return blocks.empty() ? 0 : blocks.back().offset + blocks.back().length;
    }
    // distinct region indices in block order
    std::vector<int> region_ids() const;
    std::string region_name(int region_id) const;
    bool operator==(const FeatureLayout& other) const;
};

struct FeatureVector {
    std::vector<double> values;
    FeatureLayout layout;
};

// Layout for the given masks: regions in ascending mask order, and within a
// region the LBP block before the NCM block.
FeatureLayout make_feature_layout(const std::vector<RegionMask>& masks,
                                  const std::vector<int>& mask_indices, FeatureKind kinds);

// Descriptor blocks from already-built masks.
FeatureVector extract_from_masks(const Image& image, const std::vector<RegionMask>& masks,
                                 const std::vector<int>& mask_indices, FeatureKind kinds);

// Convenience wrapper: build_regions + extract_from_masks.
FeatureVector extract_features(const Image& image, const LandmarkSet& landmarks,
                               const RegionScheme& scheme, const std::vector<int>& mask_indices,
                               FeatureKind kinds);

// All masks the scheme produces (scheme regions plus whole-face if enabled).
std::vector<int> all_mask_indices(const RegionScheme& scheme);

// Per-dimension min-max statistics fitted on training data only.
struct ScalingStats {
    std::vector<double> min;
    std::vector<double> max;

    std::size_t dim() const { return min.size(); }
};

ScalingStats fit_scaling(const Matrix& train);
// (v - min) / (max - min); constant dimensions map to 0; values outside the
// training range are not clipped.
void apply_scaling(const ScalingStats& stats, double* values, std::size_t dim);
Matrix apply_scaling(const ScalingStats& stats, const Matrix& X);

} // namespace rfer
