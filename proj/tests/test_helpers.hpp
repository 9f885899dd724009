#pragma once

// Shared fixtures for the test suites: a canonical 68-point face template,
// synthetic face images with class-dependent region textures, and the
// independent brute-force oracles the module tests check against.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rfer/geometry.hpp"
#include "rfer/image.hpp"
#include "rfer/landmarks.hpp"
#include "rfer/lbp.hpp"

namespace rfer::testing {

inline constexpr double kPi = 3.14159265358979323846;

// Synthetic but anatomically plausible 68-point face in a 256x256 frame,
// standard annotation order (jaw, brows, nose, eyes, lips).
inline LandmarkSet canonical_landmarks(double scale = 1.0, double dx = 0.0, double dy = 0.0) {
    LandmarkSet lm;
    auto set = [&](int i, double x, double y) {
        lm[i] = {x * scale + dx, y * scale + dy};
    };

    // jaw arc, left ear to right ear through the chin
    for (int i = 0; i <= 16; ++i) {
        double t = static_cast<double>(i) / 16.0;
        set(i, 128.0 - 80.0 * std::cos(kPi * t), 100.0 + 131.0 * std::sin(kPi * t));
    }
    // brows
    for (int j = 0; j < 5; ++j) {
        double s = static_cast<double>(j) / 4.0;
        set(17 + j, 66.0 + 52.0 * s, 88.0 - 6.0 * std::sin(kPi * s));
        set(22 + j, 138.0 + 52.0 * s, 88.0 - 6.0 * std::sin(kPi * (1.0 - s)));
    }
    // nose bridge and base
    set(27, 128, 100);
    set(28, 128, 112);
    set(29, 128, 124);
    set(30, 128, 136);
    set(31, 112, 148);
    set(32, 120, 150);
    set(33, 128, 152);
    set(34, 136, 150);
    set(35, 144, 148);
    // eyes
    set(36, 74, 100);
    set(37, 84, 93);
    set(38, 100, 93);
    set(39, 110, 100);
    set(40, 100, 107);
    set(41, 84, 107);
    set(42, 146, 100);
    set(43, 156, 93);
    set(44, 172, 93);
    set(45, 182, 100);
    set(46, 172, 107);
    set(47, 156, 107);
    // outer lip
    set(48, 94, 185);
    set(49, 105, 174);
    set(50, 117, 170);
    set(51, 128, 168);
    set(52, 139, 170);
    set(53, 151, 174);
    set(54, 162, 185);
    set(55, 151, 196);
    set(56, 139, 201);
    set(57, 128, 203);
    set(58, 117, 201);
    set(59, 105, 196);
    // inner lip
    set(60, 104, 185);
    set(61, 116, 180);
    set(62, 128, 178);
    set(63, 140, 180);
    set(64, 152, 185);
    set(65, 140, 190);
    set(66, 128, 192);
    set(67, 116, 190);
    return lm;
}

inline std::string landmarks_to_plain_text(const LandmarkSet& lm) {
    std::string out;
    char buf[80];
    for (int i = 0; i < kNumLandmarks; ++i) {
        std::snprintf(buf, sizeof(buf), "%.6f %.6f\n", lm[i].x, lm[i].y);
        out += buf;
    }
    return out;
}

// Deterministic pixel hash used as texture noise.
inline std::uint32_t pixel_hash(std::uint32_t x, std::uint32_t y, std::uint32_t salt) {
    std::uint32_t h = x * 0x8da6b343u + y * 0xd8163841u + salt * 0xcb1ab31fu;
    h ^= h >> 13;
    h *= 0x9e3779b1u;
    h ^= h >> 16;
    return h;
}

// Class-specific stripe texture: distinct orientation/period per class.
inline std::uint8_t class_texture(int cls, int x, int y) {
    int period = 3 + cls;
    int phase = (cls % 2 == 0) ? (x + 2 * y) : (2 * x - y + 1000);
    int v = ((phase % period) + period) % period;
    return v * 2 < period ? 220 : 40;
}

// Paints every polygon region of the scheme with a texture; the regions in
// `signal_regions` get the class texture, everything else a fixed neutral
// texture. Adds small deterministic noise so no two images are equal.
inline Image synthetic_face(const RegionScheme& scheme, const LandmarkSet& lm, int cls,
                            const std::vector<int>& signal_regions, std::uint32_t salt,
                            int width = 256, int height = 256) {
    Image img = make_image(width, height, 0);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            img.at(x, y) = static_cast<std::uint8_t>(128 + (pixel_hash(x, y, salt) % 21) - 10);

    auto masks = build_regions(lm, scheme, width, height);
    for (std::size_t r = 0; r < scheme.regions.size(); ++r) {
        bool is_signal = false;
        for (int s : signal_regions) is_signal |= s == static_cast<int>(r);
        const auto& m = masks[r];
        for (int my = 0; my < m.height; ++my)
            for (int mx = 0; mx < m.width; ++mx) {
                if (!m.bits[static_cast<std::size_t>(my) * m.width + mx]) continue;
                int x = m.x0 + mx, y = m.y0 + my;
                std::uint8_t base = is_signal ? class_texture(cls, x, y)
                                              : class_texture(-1, x, y);
                int noisy = base + static_cast<int>(pixel_hash(x, y, salt ^ 0xabcdu) % 9) - 4;
                img.at(x, y) = static_cast<std::uint8_t>(std::clamp(noisy, 0, 255));
            }
    }
    return img;
}

// --- oracles ---------------------------------------------------------------

// Point-in-polygon, even-odd rule, written as the classic per-point
// crossing test (the implementation uses a scanline).
inline bool oracle_point_in_polygon(const std::vector<Point>& poly, double px, double py) {
    bool inside = false;
    std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        double yi = poly[i].y, yj = poly[j].y;
        if ((yi > py) != (yj > py)) {
            double xi = poly[i].x, xj = poly[j].x;
            if (px < (xj - xi) * (py - yi) / (yj - yi) + xi) inside = !inside;
        }
    }
    return inside;
}

// Naive masked LBP histogram: double loop over the whole image, testing
// membership per pixel.
inline std::vector<double> oracle_lbp_histogram(const Image& img, const RegionMask& mask) {
    std::vector<double> bins(kLbpBins, 0.0);
    const UniformTable& table = uniform_table();
    for (int y = 1; y < img.height - 1; ++y)
        for (int x = 1; x < img.width - 1; ++x) {
            if (!mask.contains(x, y)) continue;
            int center = img.at(x, y);
            // clockwise from top-left, top-left most significant
            static const int ddx[8] = {-1, 0, 1, 1, 1, 0, -1, -1};
            static const int ddy[8] = {-1, -1, -1, 0, 1, 1, 1, 0};
            int code = 0;
            for (int k = 0; k < 8; ++k)
                if (img.at(x + ddx[k], y + ddy[k]) >= center) code |= 1 << (7 - k);
            bins[table[code]] += 1.0;
        }
    return bins;
}

struct OracleMoments {
    double m00, m10, m01;
    double xbar, ybar;
    double mu20, mu11, mu02, mu30, mu21, mu12, mu03;
    std::array<double, 7> nu;
};

// Direct two-pass evaluation of the moment definitions over absolute
// coordinates, independent of the production integer path.
inline OracleMoments oracle_moments(const RegionMask& mask) {
    OracleMoments o{};
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.bits[static_cast<std::size_t>(y) * mask.width + x]) continue;
            double px = mask.x0 + x, py = mask.y0 + y;
            o.m00 += 1.0;
            o.m10 += px;
            o.m01 += py;
        }
    o.xbar = o.m10 / o.m00;
    o.ybar = o.m01 / o.m00;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.bits[static_cast<std::size_t>(y) * mask.width + x]) continue;
            double cx = (mask.x0 + x) - o.xbar, cy = (mask.y0 + y) - o.ybar;
            o.mu20 += cx * cx;
            o.mu11 += cx * cy;
            o.mu02 += cy * cy;
            o.mu30 += cx * cx * cx;
            o.mu21 += cx * cx * cy;
            o.mu12 += cx * cy * cy;
            o.mu03 += cy * cy * cy;
        }
    double d2 = std::pow(o.m00, 2.0), d3 = std::pow(o.m00, 2.5);
    o.nu = {o.mu20 / d2, o.mu11 / d2, o.mu02 / d2,
            o.mu30 / d3, o.mu21 / d3, o.mu12 / d3, o.mu03 / d3};
    return o;
}

// Random simple-ish polygon: a star over jittered angles (always
// non-self-intersecting by construction).
inline std::vector<Point> random_star_polygon(std::mt19937_64& rng, double cx, double cy,
                                              double rmin, double rmax, int nverts) {
    std::uniform_real_distribution<double> radius(rmin, rmax);
    std::uniform_real_distribution<double> jitter(0.0, 1.0);
    std::vector<Point> poly;
    for (int i = 0; i < nverts; ++i) {
        double ang =
            2.0 * kPi * (static_cast<double>(i) + 0.8 * jitter(rng)) / static_cast<double>(nverts);
        double r = radius(rng);
        poly.push_back({cx + r * std::cos(ang), cy + r * std::sin(ang)});
    }
    return poly;
}

inline RegionMask rect_mask(int x0, int y0, int w, int h, int index = 0) {
    RegionMask m;
    m.region_index = index;
    m.name = "rect";
    m.x0 = x0;
    m.y0 = y0;
    m.width = w;
    m.height = h;
    m.bits.assign(static_cast<std::size_t>(w) * h, 1);
    m.pixel_count = static_cast<std::size_t>(w) * h;
    return m;
}

inline RegionMask disk_mask(int cx, int cy, int radius, int index = 0) {
    RegionMask m;
    m.region_index = index;
    m.name = "disk";
    m.x0 = cx - radius;
    m.y0 = cy - radius;
    m.width = 2 * radius + 1;
    m.height = 2 * radius + 1;
    m.bits.assign(static_cast<std::size_t>(m.width) * m.height, 0);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
            double ddx = x - radius, ddy = y - radius;
            if (ddx * ddx + ddy * ddy <= static_cast<double>(radius) * radius) {
                m.bits[static_cast<std::size_t>(y) * m.width + x] = 1;
                m.pixel_count++;
            }
        }
    return m;
}

inline RegionMask ellipse_mask(int cx, int cy, double rx, double ry, int index = 0) {
    RegionMask m;
    m.region_index = index;
    m.name = "ellipse";
    int irx = static_cast<int>(std::ceil(rx)), iry = static_cast<int>(std::ceil(ry));
    m.x0 = cx - irx;
    m.y0 = cy - iry;
    m.width = 2 * irx + 1;
    m.height = 2 * iry + 1;
    m.bits.assign(static_cast<std::size_t>(m.width) * m.height, 0);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
            double ex = (x - irx) / rx, ey = (y - iry) / ry;
            if (ex * ex + ey * ey <= 1.0) {
                m.bits[static_cast<std::size_t>(y) * m.width + x] = 1;
                m.pixel_count++;
            }
        }
    return m;
}

inline Image random_image(std::mt19937_64& rng, int w, int h) {
    Image img = make_image(w, h, 0);
    std::uniform_int_distribution<int> dist(0, 255);
    for (auto& p : img.data) p = static_cast<std::uint8_t>(dist(rng));
    return img;
}

inline std::string scheme_dir() {
#ifdef RFER_SCHEME_DIR
    return RFER_SCHEME_DIR;
#else
    return "schemes";
#endif
}

} // namespace rfer::testing
