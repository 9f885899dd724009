#include "rfer/lbp.hpp"

#include "rfer/error.hpp"

namespace rfer {

int circular_transitions(int code) {
    int t = 0;
    for (int k = 0; k < 8; ++k) {
        int a = (code >> k) & 1;
        int b = (code >> ((k + 1) % 8)) & 1;
        t += a != b;
    }
    return t;
}

UniformTable build_uniform_table() {
    UniformTable table;
    int next = 0;
    for (int code = 0; code < 256; ++code) {
        if (circular_transitions(code) <= 2)
            table.bin[static_cast<std::size_t>(code)] = static_cast<std::uint8_t>(next++);
        else
            table.bin[static_cast<std::size_t>(code)] = kUniformCodes;
    }
    // 58 uniform codes for 8 bits: 2 constant + 8*7 single-run patterns
    return table;
}

const UniformTable& uniform_table() {
    static const UniformTable table = build_uniform_table();
    return table;
}

namespace {
// clockwise from top-left; index 0 is the most significant bit
constexpr int kNeighborDx[8] = {-1, 0, 1, 1, 1, 0, -1, -1};
constexpr int kNeighborDy[8] = {-1, -1, -1, 0, 1, 1, 1, 0};
} // namespace

int lbp_label(const Image& image, int x, int y) {
    if (x < 1 || x > image.width - 2 || y < 1 || y > image.height - 2)
        raise(Errc::border_pixel, "pixel (" + std::to_string(x) + "," + std::to_string(y) +
                                      ") has no full 3x3 neighborhood");
    const std::uint8_t center = image.at(x, y);
    int code = 0;
    for (int k = 0; k < 8; ++k) {
        code <<= 1;
        if (image.at(x + kNeighborDx[k], y + kNeighborDy[k]) >= center) code |= 1;
    }
    return code;
}

LbpLabelMap lbp_label_map(const Image& image) {
    LbpLabelMap map;
    map.width = image.width;
    map.height = image.height;
    map.labels.assign(static_cast<std::size_t>(image.width) * image.height, -1);
    for (int y = 1; y < image.height - 1; ++y)
        for (int x = 1; x < image.width - 1; ++x)
            map.labels[static_cast<std::size_t>(y) * image.width + x] =
                static_cast<std::int16_t>(lbp_label(image, x, y));
    return map;
}

LbpHistogram lbp_histogram(const Image& image, const RegionMask& mask, bool normalize) {
    const UniformTable& table = uniform_table();
    LbpHistogram hist;
    std::size_t used = 0;

    int y_lo = std::max(mask.y0, 1);
    int y_hi = std::min(mask.y0 + mask.height - 1, image.height - 2);
    int x_lo = std::max(mask.x0, 1);
    int x_hi = std::min(mask.x0 + mask.width - 1, image.width - 2);
    for (int y = y_lo; y <= y_hi; ++y) {
        for (int x = x_lo; x <= x_hi; ++x) {
            if (!mask.bits[static_cast<std::size_t>(y - mask.y0) * mask.width + (x - mask.x0)])
                continue;
            hist.bins[table[lbp_label(image, x, y)]] += 1.0;
            ++used;
        }
    }
    if (used == 0)
        raise(Errc::empty_effective_region,
              "mask '" + mask.name + "' has no pixels with a full 3x3 neighborhood");

    if (normalize) {
        double total = static_cast<double>(used);
        for (auto& b : hist.bins) b /= total;
        hist.normalized = true;
    }
    return hist;
}

} // namespace rfer
