#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rfer/landmarks.hpp"

namespace rfer {

// One polygon vertex: an affine combination of landmarks whose weights sum
// to 1. A plain landmark reference is the single-term case with weight 1.
struct WeightedLandmark {
    int landmark = 0;
    double w = 1.0;
};

struct Vertex {
    std::vector<WeightedLandmark> terms;
};

struct RegionDef {
    std::string name;
    std::vector<Vertex> vertices;
};

// Declarative polygonal face partition anchored on landmark indices.
// The whole-face mask, when enabled, is the union of all region masks.
struct RegionScheme {
    std::string name;
    bool include_whole_face = true;
    std::vector<RegionDef> regions;

    int region_index(const std::string& region_name) const;
    // number of masks build_regions will produce
    std::size_t mask_count() const { return regions.size() + (include_whole_face ? 1u : 0u); }
};

// Rasterized region: bounding box plus a row-major membership bitmask in
// bounding-box-local coordinates.
struct RegionMask {
    int region_index = -1;
    std::string name;
    int x0 = 0, y0 = 0;
    int width = 0, height = 0;
    std::vector<std::uint8_t> bits; // width*height entries, 1 = member
    std::size_t pixel_count = 0;

    bool contains(int x, int y) const {
        int lx = x - x0, ly = y - y0;
        if (lx < 0 || lx >= width || ly < 0 || ly >= height) return false;
        return bits[static_cast<std::size_t>(ly) * width + lx] != 0;
    }
};

struct Box {
    int x0 = 0, y0 = 0;
    int width = 0, height = 0;
};

// Turns a region definition into concrete 2D points.
std::vector<Point> resolve_vertices(const LandmarkSet& landmarks, const RegionDef& def);

// Pixel (x, y) is a member iff its center (x+0.5, y+0.5) falls inside the
// polygon under the even-odd rule; clipped to [0,w)x[0,h).
RegionMask rasterize_region(const std::vector<Point>& polygon, int image_width,
                            int image_height, int region_index);

// All scheme regions in order (overlaps resolved to the lowest index, so the
// results are pairwise disjoint), then the whole-face union mask if enabled.
std::vector<RegionMask> build_regions(const LandmarkSet& landmarks, const RegionScheme& scheme,
                                      int image_width, int image_height);

// rows x cols rectangular blocks exactly covering the box; remainder pixels
// go to the last row/column.
std::vector<RegionMask> partition_grid(const Box& box, int rows, int cols);

// Tight integer bounding box of the landmark hull, clipped to the image.
Box landmark_bounding_box(const LandmarkSet& landmarks, int image_width, int image_height);

RegionScheme load_region_scheme(const std::string& path);
RegionScheme parse_region_scheme(const std::string& json_text, const std::string& origin = "<memory>");
std::string region_scheme_to_json(const RegionScheme& scheme);

// Stable content hash used to pin trained models to the scheme they were
// trained with.
std::uint64_t region_scheme_hash(const RegionScheme& scheme);

} // namespace rfer
