#pragma once

#include <array>

#include "rfer/geometry.hpp"
#include "rfer/landmarks.hpp"

namespace rfer {

// Region-shape statistics up to order 3 over a binary mask: raw spatial
// moments in absolute image coordinates, the centroid, central moments, and
// the 7 normalized central moments that form the per-region descriptor.
struct MomentSet {
    // m[j][i] = sum of x^j * y^i over member pixels, j + i <= 3
    std::array<std::array<double, 4>, 4> m{};
    double xbar = 0.0;
    double ybar = 0.0;
    double mu20 = 0.0, mu11 = 0.0, mu02 = 0.0;
    double mu30 = 0.0, mu21 = 0.0, mu12 = 0.0, mu03 = 0.0;
    // (nu20, nu11, nu02, nu30, nu21, nu12, nu03)
    std::array<double, 7> nu{};
};

inline constexpr int kMomentDescriptorSize = 7;

MomentSet compute_moments(const RegionMask& mask);

// Raw spatial moment in absolute coordinates; any j, i >= 0.
double spatial_moment(const RegionMask& mask, int j, int i);

Point centroid(const RegionMask& mask);

// Central moment for j + i <= 3. Within that order the result is exact:
// the numerator is evaluated in 128-bit integer arithmetic.
double central_moment(const RegionMask& mask, int j, int i);

std::array<double, kMomentDescriptorSize> normalized_central_moments(const RegionMask& mask);

} // namespace rfer
