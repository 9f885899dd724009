#pragma once

#include <array>
#include <string>

namespace rfer {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline constexpr int kNumLandmarks = 68;

// The 68 facial points in the standard annotation order: 0-16 jaw,
// 17-26 brows, 27-35 nose, 36-47 eyes, 48-67 lips.
struct LandmarkSet {
    std::array<Point, kNumLandmarks> points{};

    const Point& operator[](int i) const { return points[static_cast<std::size_t>(i)]; }
    Point& operator[](int i) { return points[static_cast<std::size_t>(i)]; }
};

// Accepts either 68 plain "x y" lines or the pts format (version/n_points
// header with a brace-delimited point block).
LandmarkSet parse_landmarks(const std::string& path);

LandmarkSet parse_landmarks_text(const std::string& text, const std::string& origin = "<memory>");

} // namespace rfer
