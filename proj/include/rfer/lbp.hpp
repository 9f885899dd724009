#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rfer/geometry.hpp"
#include "rfer/image.hpp"

namespace rfer {

inline constexpr int kLbpBins = 59;      // 58 uniform codes + 1 catch-all
inline constexpr int kUniformCodes = 58;

// Per-pixel LBP codes. Border pixels have no full 3x3 neighborhood and carry
// the sentinel -1.
struct LbpLabelMap {
    int width = 0;
    int height = 0;
    std::vector<std::int16_t> labels; // 0..255, or -1 on the border

    std::int16_t at(int x, int y) const {
        return labels[static_cast<std::size_t>(y) * width + x];
    }
};

// code -> histogram bin. Uniform codes (circular 0/1 transition count <= 2)
// get bins 0..57 in ascending code order; everything else folds into bin 58.
struct UniformTable {
    std::array<std::uint8_t, 256> bin{};

    std::uint8_t operator[](int code) const { return bin[static_cast<std::size_t>(code)]; }
};

struct LbpHistogram {
    std::array<double, kLbpBins> bins{};
    bool normalized = false;
};

// Number of 0<->1 transitions in `code` viewed as a circular 8-bit string.
int circular_transitions(int code);

UniformTable build_uniform_table();

// Shared immutable instance.
const UniformTable& uniform_table();

// 8-bit code from thresholding the 3x3 neighborhood against the center with
// >=. Neighbors are taken clockwise from the top-left; the top-left is the
// most significant bit. (x, y) must not be on the image border.
int lbp_label(const Image& image, int x, int y);

// Full label map with -1 border sentinels.
LbpLabelMap lbp_label_map(const Image& image);

// Histogram of uniform-mapped labels over the mask's image-interior pixels.
LbpHistogram lbp_histogram(const Image& image, const RegionMask& mask, bool normalize);

} // namespace rfer
