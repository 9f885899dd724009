#include "rfer/moments.hpp"

#include <cmath>

#include "rfer/error.hpp"

namespace rfer {

namespace {

using i128 = __int128;

// Integer power sums over bounding-box-local coordinates. Keeping the
// accumulation in integers (and local coordinates small) is what makes
// mu10 = mu01 = 0 and translation invariance bit-exact.
struct LocalSums {
    i128 s[4][4] = {}; // s[j][i] = sum lx^j * ly^i, j + i <= 3
    long long n = 0;
    long long x0 = 0, y0 = 0;
};

LocalSums local_sums(const RegionMask& mask) {
    if (mask.pixel_count == 0) raise(Errc::empty_mask, "moments of an empty mask");
    LocalSums ls;
    ls.x0 = mask.x0;
    ls.y0 = mask.y0;
    for (int y = 0; y < mask.height; ++y) {
        const std::uint8_t* row = mask.bits.data() + static_cast<std::size_t>(y) * mask.width;
        long long ly = y;
        long long y2 = ly * ly, y3 = y2 * ly;
        for (int x = 0; x < mask.width; ++x) {
            if (!row[x]) continue;
            long long lx = x;
            long long x2 = lx * lx, x3 = x2 * lx;
            ls.s[0][0] += 1;
            ls.s[1][0] += lx;
            ls.s[0][1] += ly;
            ls.s[2][0] += x2;
            ls.s[1][1] += lx * ly;
            ls.s[0][2] += y2;
            ls.s[3][0] += x3;
            ls.s[2][1] += x2 * ly;
            ls.s[1][2] += lx * y2;
            ls.s[0][3] += y3;
        }
    }
    ls.n = static_cast<long long>(ls.s[0][0]);
    return ls;
}

constexpr long long kBinom[4][4] = {
    {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};

i128 ipow(long long base, int e) {
    i128 r = 1;
    for (int k = 0; k < e; ++k) r *= base;
    return r;
}

// Shift local power sums to absolute coordinates:
// m_ji = sum (lx + x0)^j (ly + y0)^i, expanded binomially. Exact integers.
i128 absolute_moment(const LocalSums& ls, int j, int i) {
    i128 total = 0;
    for (int k = 0; k <= j; ++k)
        for (int l = 0; l <= i; ++l)
            total += static_cast<i128>(kBinom[j][k]) * kBinom[i][l] * ipow(ls.x0, j - k) *
                     ipow(ls.y0, i - l) * ls.s[k][l];
    return total;
}

// Central-moment numerators N_ji = mu_ji * n^(j+i), exact in integers.
// Standard identities in terms of the local power sums.
struct CentralNumerators {
    i128 n20, n11, n02, n30, n21, n12, n03;
};

CentralNumerators central_numerators(const LocalSums& ls) {
    i128 n = ls.n;
    i128 s10 = ls.s[1][0], s01 = ls.s[0][1];
    i128 s20 = ls.s[2][0], s11 = ls.s[1][1], s02 = ls.s[0][2];
    i128 s30 = ls.s[3][0], s21 = ls.s[2][1], s12 = ls.s[1][2], s03 = ls.s[0][3];
    CentralNumerators c;
    c.n20 = n * s20 - s10 * s10;
    c.n11 = n * s11 - s10 * s01;
    c.n02 = n * s02 - s01 * s01;
    c.n30 = n * n * s30 - 3 * n * s10 * s20 + 2 * s10 * s10 * s10;
    c.n21 = n * n * s21 - 2 * n * s10 * s11 - n * s01 * s20 + 2 * s10 * s10 * s01;
    c.n12 = n * n * s12 - 2 * n * s01 * s11 - n * s10 * s02 + 2 * s01 * s01 * s10;
    c.n03 = n * n * s03 - 3 * n * s01 * s02 + 2 * s01 * s01 * s01;
    return c;
}

double to_d(i128 v) { return static_cast<double>(v); }

} // namespace

MomentSet compute_moments(const RegionMask& mask) {
    LocalSums ls = local_sums(mask);
    MomentSet ms;
    for (int j = 0; j <= 3; ++j)
        for (int i = 0; i + j <= 3; ++i)
            ms.m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                to_d(absolute_moment(ls, j, i));

    double n = static_cast<double>(ls.n);
    ms.xbar = ms.m[1][0] / n;
    ms.ybar = ms.m[0][1] / n;

    CentralNumerators c = central_numerators(ls);
    double n2 = n * n, n3 = n2 * n;
    ms.mu20 = to_d(c.n20) / n2;
    ms.mu11 = to_d(c.n11) / n2;
    ms.mu02 = to_d(c.n02) / n2;
    ms.mu30 = to_d(c.n30) / n3;
    ms.mu21 = to_d(c.n21) / n3;
    ms.mu12 = to_d(c.n12) / n3;
    ms.mu03 = to_d(c.n03) / n3;

    // nu_ji = mu_ji / n^((j+i)/2 + 1): n^2 at order 2, n^2.5 at order 3
    double d2 = n2;
    double d3 = n2 * std::sqrt(n);
    ms.nu = {ms.mu20 / d2, ms.mu11 / d2, ms.mu02 / d2,
             ms.mu30 / d3, ms.mu21 / d3, ms.mu12 / d3, ms.mu03 / d3};
    return ms;
}

double spatial_moment(const RegionMask& mask, int j, int i) {
    if (j < 0 || i < 0) raise(Errc::unsupported_order, "moment orders must be nonnegative");
    if (mask.pixel_count == 0) raise(Errc::empty_mask, "spatial moment of an empty mask");
    if (j + i <= 3) {
        LocalSums ls = local_sums(mask);
        return to_d(absolute_moment(ls, j, i));
    }
    // orders above the descriptor cap: plain accumulation
    double total = 0.0;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.bits[static_cast<std::size_t>(y) * mask.width + x]) continue;
            double px = mask.x0 + x, py = mask.y0 + y;
            double term = 1.0;
            for (int k = 0; k < j; ++k) term *= px;
            for (int k = 0; k < i; ++k) term *= py;
            total += term;
        }
    return total;
}

Point centroid(const RegionMask& mask) {
    LocalSums ls = local_sums(mask);
    double n = static_cast<double>(ls.n);
    return {to_d(absolute_moment(ls, 1, 0)) / n, to_d(absolute_moment(ls, 0, 1)) / n};
}

double central_moment(const RegionMask& mask, int j, int i) {
    if (j < 0 || i < 0) raise(Errc::unsupported_order, "moment orders must be nonnegative");
    if (j + i > 3)
        raise(Errc::unsupported_order,
              "central moments supported up to order 3, got " + std::to_string(j + i));
    LocalSums ls = local_sums(mask);
    if (j + i == 0) return static_cast<double>(ls.n);
    if (j + i == 1) return 0.0; // identically zero about the centroid
    CentralNumerators c = central_numerators(ls);
    double n = static_cast<double>(ls.n);
    double denom = (j + i == 2) ? n * n : n * n * n;
    if (j == 2 && i == 0) return to_d(c.n20) / denom;
    if (j == 1 && i == 1) return to_d(c.n11) / denom;
    if (j == 0 && i == 2) return to_d(c.n02) / denom;
    if (j == 3 && i == 0) return to_d(c.n30) / denom;
    if (j == 2 && i == 1) return to_d(c.n21) / denom;
    if (j == 1 && i == 2) return to_d(c.n12) / denom;
    return to_d(c.n03) / denom; // j == 0, i == 3
}

std::array<double, kMomentDescriptorSize> normalized_central_moments(const RegionMask& mask) {
    return compute_moments(mask).nu;
}

} // namespace rfer
