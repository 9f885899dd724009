#include "rfer/features.hpp"

#include <algorithm>
#include <set>

#include "rfer/error.hpp"
#include "rfer/lbp.hpp"
#include "rfer/moments.hpp"

namespace rfer {

std::vector<int> FeatureLayout::region_ids() const {
    std::vector<int> ids;
    for (const auto& b : blocks)
        if (ids.empty() || ids.back() != b.region_index) ids.push_back(b.region_index);
    return ids;
}

std::string FeatureLayout::region_name(int region_id) const {
    for (const auto& b : blocks)
        if (b.region_index == region_id) return b.region;
    return "";
}

bool FeatureLayout::operator==(const FeatureLayout& other) const {
    if (blocks.size() != other.blocks.size()) return false;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto& a = blocks[i];
        const auto& b = other.blocks[i];
        if (a.region != b.region || a.region_index != b.region_index || a.kind != b.kind ||
            a.offset != b.offset || a.length != b.length)
            return false;
    }
    return true;
}

namespace {

std::vector<int> normalize_indices(std::size_t mask_count, const std::vector<int>& mask_indices) {
    if (mask_indices.empty())
        raise(Errc::invalid_argument, "at least one region index is required");
    std::set<int> uniq;
    for (int idx : mask_indices) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= mask_count)
            raise(Errc::index_out_of_range,
                  "mask index " + std::to_string(idx) + " out of range (have " +
                      std::to_string(mask_count) + " masks)");
        uniq.insert(idx);
    }
    return {uniq.begin(), uniq.end()}; // ascending = scheme order, whole-face last
}

} // namespace

FeatureLayout make_feature_layout(const std::vector<RegionMask>& masks,
                                  const std::vector<int>& mask_indices, FeatureKind kinds) {
    auto indices = normalize_indices(masks.size(), mask_indices);
    FeatureLayout layout;
    std::size_t offset = 0;
    for (int idx : indices) {
        const auto& m = masks[static_cast<std::size_t>(idx)];
        if (wants_lbp(kinds)) {
            layout.blocks.push_back({m.name, idx, BlockKind::lbp, offset, kLbpBins});
            offset += kLbpBins;
        }
        if (wants_ncm(kinds)) {
            layout.blocks.push_back(
                {m.name, idx, BlockKind::ncm, offset, kMomentDescriptorSize});
            offset += kMomentDescriptorSize;
        }
    }
    return layout;
}

FeatureVector extract_from_masks(const Image& image, const std::vector<RegionMask>& masks,
                                 const std::vector<int>& mask_indices, FeatureKind kinds) {
    FeatureVector fv;
    fv.layout = make_feature_layout(masks, mask_indices, kinds);
    fv.values.assign(fv.layout.dim(), 0.0);
    for (const auto& block : fv.layout.blocks) {
        const auto& mask = masks[static_cast<std::size_t>(block.region_index)];
        if (block.kind == BlockKind::lbp) {
            LbpHistogram h = lbp_histogram(image, mask, /*normalize=*/true);
            std::copy(h.bins.begin(), h.bins.end(), fv.values.begin() + block.offset);
        } else {
            auto nu = normalized_central_moments(mask);
            std::copy(nu.begin(), nu.end(), fv.values.begin() + block.offset);
        }
    }
    return fv;
}

FeatureVector extract_features(const Image& image, const LandmarkSet& landmarks,
                               const RegionScheme& scheme, const std::vector<int>& mask_indices,
                               FeatureKind kinds) {
    auto masks = build_regions(landmarks, scheme, image.width, image.height);
    return extract_from_masks(image, masks, mask_indices, kinds);
}

std::vector<int> all_mask_indices(const RegionScheme& scheme) {
    std::vector<int> idx(scheme.mask_count());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    return idx;
}

ScalingStats fit_scaling(const Matrix& train) {
    if (train.rows == 0) raise(Errc::invalid_argument, "cannot fit scaling on zero samples");
    ScalingStats s;
    s.min.assign(train.cols, 0.0);
    s.max.assign(train.cols, 0.0);
    for (std::size_t c = 0; c < train.cols; ++c) {
        double lo = train.at(0, c), hi = lo;
        for (std::size_t r = 1; r < train.rows; ++r) {
            double v = train.at(r, c);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        s.min[c] = lo;
        s.max[c] = hi;
    }
    return s;
}

void apply_scaling(const ScalingStats& stats, double* values, std::size_t dim) {
    if (dim != stats.dim())
        raise(Errc::layout_mismatch, "vector has " + std::to_string(dim) +
                                         " dims, scaling expects " +
                                         std::to_string(stats.dim()));
    for (std::size_t c = 0; c < dim; ++c) {
        double range = stats.max[c] - stats.min[c];
        values[c] = range > 0.0 ? (values[c] - stats.min[c]) / range : 0.0;
    }
}

Matrix apply_scaling(const ScalingStats& stats, const Matrix& X) {
    Matrix out = X;
    for (std::size_t r = 0; r < out.rows; ++r) apply_scaling(stats, out.row(r), out.cols);
    return out;
}

} // namespace rfer
