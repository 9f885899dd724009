#include "rfer/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rfer/error.hpp"

using nlohmann::json;

namespace rfer {

int RegionScheme::region_index(const std::string& region_name) const {
    for (std::size_t i = 0; i < regions.size(); ++i)
        if (regions[i].name == region_name) return static_cast<int>(i);
    return -1;
}

std::vector<Point> resolve_vertices(const LandmarkSet& landmarks, const RegionDef& def) {
    std::vector<Point> poly;
    poly.reserve(def.vertices.size());
    for (std::size_t v = 0; v < def.vertices.size(); ++v) {
        const auto& terms = def.vertices[v].terms;
        if (terms.empty())
            raise(Errc::bad_weights, "region '" + def.name + "' vertex " + std::to_string(v) +
                                         " has no terms");
        double wsum = 0.0, x = 0.0, y = 0.0;
        for (const auto& t : terms) {
            if (t.landmark < 0 || t.landmark >= kNumLandmarks)
                raise(Errc::index_out_of_range,
                      "region '" + def.name + "' references landmark " +
                          std::to_string(t.landmark));
            wsum += t.w;
            x += t.w * landmarks[t.landmark].x;
            y += t.w * landmarks[t.landmark].y;
        }
        if (std::abs(wsum - 1.0) > 1e-9)
            raise(Errc::bad_weights, "region '" + def.name + "' vertex " + std::to_string(v) +
                                         " weights sum to " + std::to_string(wsum));
        poly.push_back({x, y});
    }
    return poly;
}

namespace {

// Even-odd scanline: x coordinates where the polygon boundary crosses the
// horizontal line at py, using the half-open rule (yi > py) != (yj > py).
void scanline_crossings(const std::vector<Point>& poly, double py, std::vector<double>& xs) {
    xs.clear();
    std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        double yi = poly[i].y, yj = poly[j].y;
        if ((yi > py) != (yj > py)) {
            double xi = poly[i].x, xj = poly[j].x;
            xs.push_back((xj - xi) * (py - yi) / (yj - yi) + xi);
        }
    }
    std::sort(xs.begin(), xs.end());
}

RegionMask mask_from_grid(const std::vector<std::uint8_t>& member, int gx0, int gy0, int gw,
                          int gh, int region_index) {
    int minx = gw, miny = gh, maxx = -1, maxy = -1;
    std::size_t count = 0;
    for (int y = 0; y < gh; ++y)
        for (int x = 0; x < gw; ++x)
            if (member[static_cast<std::size_t>(y) * gw + x]) {
                ++count;
                minx = std::min(minx, x);
                maxx = std::max(maxx, x);
                miny = std::min(miny, y);
                maxy = std::max(maxy, y);
            }
    RegionMask m;
    m.region_index = region_index;
    if (count == 0) return m; // caller decides how to report
    m.x0 = gx0 + minx;
    m.y0 = gy0 + miny;
    m.width = maxx - minx + 1;
    m.height = maxy - miny + 1;
    m.pixel_count = count;
    m.bits.assign(static_cast<std::size_t>(m.width) * m.height, 0);
    for (int y = miny; y <= maxy; ++y)
        for (int x = minx; x <= maxx; ++x)
            if (member[static_cast<std::size_t>(y) * gw + x])
                m.bits[static_cast<std::size_t>(y - miny) * m.width + (x - minx)] = 1;
    return m;
}

} // namespace

RegionMask rasterize_region(const std::vector<Point>& polygon, int image_width,
                            int image_height, int region_index) {
    if (polygon.size() < 3)
        raise(Errc::degenerate_polygon,
              "polygon has " + std::to_string(polygon.size()) + " vertices, need at least 3");
    for (const auto& p : polygon)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            raise(Errc::degenerate_polygon, "polygon has a non-finite vertex");

    double minx = polygon[0].x, maxx = minx, miny = polygon[0].y, maxy = miny;
    for (const auto& p : polygon) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
    }
    int x_lo = std::max(0, static_cast<int>(std::floor(minx)));
    int x_hi = std::min(image_width - 1, static_cast<int>(std::ceil(maxx)));
    int y_lo = std::max(0, static_cast<int>(std::floor(miny)));
    int y_hi = std::min(image_height - 1, static_cast<int>(std::ceil(maxy)));
    if (x_lo > x_hi || y_lo > y_hi)
        raise(Errc::degenerate_polygon, "polygon lies outside the image");

    int gw = x_hi - x_lo + 1, gh = y_hi - y_lo + 1;
    std::vector<std::uint8_t> member(static_cast<std::size_t>(gw) * gh, 0);
    std::vector<double> xs;
    for (int y = y_lo; y <= y_hi; ++y) {
        scanline_crossings(polygon, y + 0.5, xs);
        if (xs.empty()) continue;
        std::uint8_t* row = member.data() + static_cast<std::size_t>(y - y_lo) * gw;
        for (int x = x_lo; x <= x_hi; ++x) {
            double px = x + 0.5;
            // inside iff an odd number of crossings lie strictly to the right
            auto it = std::upper_bound(xs.begin(), xs.end(), px);
            if ((xs.end() - it) % 2 == 1) row[x - x_lo] = 1;
        }
    }

    RegionMask m = mask_from_grid(member, x_lo, y_lo, gw, gh, region_index);
    if (m.pixel_count == 0)
        raise(Errc::degenerate_polygon, "polygon covers no pixel centers after clipping");
    return m;
}

std::vector<RegionMask> build_regions(const LandmarkSet& landmarks, const RegionScheme& scheme,
                                      int image_width, int image_height) {
    if (scheme.regions.empty())
        raise(Errc::invalid_argument, "scheme '" + scheme.name + "' has no regions");

    std::vector<RegionMask> raw;
    raw.reserve(scheme.regions.size());
    for (std::size_t i = 0; i < scheme.regions.size(); ++i) {
        const auto& def = scheme.regions[i];
        try {
            auto poly = resolve_vertices(landmarks, def);
            raw.push_back(rasterize_region(poly, image_width, image_height,
                                           static_cast<int>(i)));
            raw.back().name = def.name;
        } catch (const Error& e) {
            if (e.code() == Errc::degenerate_polygon)
                throw Error(e.code(), "region '" + def.name + "': " + e.what());
            throw;
        }
    }

    // owner grid over the union bbox; first (lowest-index) region wins a pixel
    int ux0 = raw[0].x0, uy0 = raw[0].y0, ux1 = raw[0].x0 + raw[0].width - 1,
        uy1 = raw[0].y0 + raw[0].height - 1;
    for (const auto& m : raw) {
        ux0 = std::min(ux0, m.x0);
        uy0 = std::min(uy0, m.y0);
        ux1 = std::max(ux1, m.x0 + m.width - 1);
        uy1 = std::max(uy1, m.y0 + m.height - 1);
    }
    int uw = ux1 - ux0 + 1, uh = uy1 - uy0 + 1;
    std::vector<std::int16_t> owner(static_cast<std::size_t>(uw) * uh, -1);
    for (const auto& m : raw) {
        for (int y = 0; y < m.height; ++y)
            for (int x = 0; x < m.width; ++x) {
                if (!m.bits[static_cast<std::size_t>(y) * m.width + x]) continue;
                std::size_t gi = static_cast<std::size_t>(m.y0 + y - uy0) * uw + (m.x0 + x - ux0);
                if (owner[gi] < 0) owner[gi] = static_cast<std::int16_t>(m.region_index);
            }
    }

    std::vector<RegionMask> out;
    out.reserve(scheme.mask_count());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        std::vector<std::uint8_t> member(static_cast<std::size_t>(uw) * uh, 0);
        for (std::size_t g = 0; g < member.size(); ++g)
            if (owner[g] == static_cast<std::int16_t>(i)) member[g] = 1;
        RegionMask m = mask_from_grid(member, ux0, uy0, uw, uh, static_cast<int>(i));
        if (m.pixel_count == 0)
            raise(Errc::empty_region, "region '" + scheme.regions[i].name +
                                          "' is empty after overlap resolution");
        m.name = scheme.regions[i].name;
        out.push_back(std::move(m));
    }

    if (scheme.include_whole_face) {
        std::vector<std::uint8_t> member(static_cast<std::size_t>(uw) * uh, 0);
        for (std::size_t g = 0; g < member.size(); ++g)
            if (owner[g] >= 0) member[g] = 1;
        RegionMask m = mask_from_grid(member, ux0, uy0, uw, uh,
                                      static_cast<int>(scheme.regions.size()));
        m.name = "whole_face";
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<RegionMask> partition_grid(const Box& box, int rows, int cols) {
    if (rows < 1 || cols < 1)
        raise(Errc::invalid_argument, "grid needs rows >= 1 and cols >= 1");
    if (box.width <= 0 || box.height <= 0) raise(Errc::empty_box, "grid box is empty");
    if (box.width < cols || box.height < rows)
        raise(Errc::empty_box, "box " + std::to_string(box.width) + "x" +
                                   std::to_string(box.height) + " cannot hold a " +
                                   std::to_string(rows) + "x" + std::to_string(cols) + " grid");

    int bw = box.width / cols, bh = box.height / rows;
    std::vector<RegionMask> out;
    out.reserve(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            RegionMask m;
            m.region_index = r * cols + c;
            m.name = "grid_r" + std::to_string(r) + "_c" + std::to_string(c);
            m.x0 = box.x0 + c * bw;
            m.y0 = box.y0 + r * bh;
            m.width = (c == cols - 1) ? box.width - bw * (cols - 1) : bw;
            m.height = (r == rows - 1) ? box.height - bh * (rows - 1) : bh;
            m.pixel_count = static_cast<std::size_t>(m.width) * m.height;
            m.bits.assign(m.pixel_count, 1);
            out.push_back(std::move(m));
        }
    }
    return out;
}

Box landmark_bounding_box(const LandmarkSet& landmarks, int image_width, int image_height) {
    double minx = landmarks[0].x, maxx = minx, miny = landmarks[0].y, maxy = miny;
    for (int i = 0; i < kNumLandmarks; ++i) {
        minx = std::min(minx, landmarks[i].x);
        maxx = std::max(maxx, landmarks[i].x);
        miny = std::min(miny, landmarks[i].y);
        maxy = std::max(maxy, landmarks[i].y);
    }
    int x0 = std::max(0, static_cast<int>(std::floor(minx)));
    int y0 = std::max(0, static_cast<int>(std::floor(miny)));
    int x1 = std::min(image_width - 1, static_cast<int>(std::ceil(maxx)));
    int y1 = std::min(image_height - 1, static_cast<int>(std::ceil(maxy)));
    if (x0 > x1 || y0 > y1) raise(Errc::empty_box, "landmarks lie outside the image");
    return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

// --- scheme JSON ---------------------------------------------------------

namespace {

Vertex parse_vertex(const json& jv, const std::string& region, const std::string& origin) {
    Vertex v;
    if (jv.contains("landmark")) {
        v.terms.push_back({jv.at("landmark").get<int>(), 1.0});
    } else if (jv.contains("derived")) {
        for (const auto& jt : jv.at("derived"))
            v.terms.push_back({jt.at("landmark").get<int>(), jt.at("w").get<double>()});
    } else {
        raise(Errc::invalid_argument,
              origin + ": region '" + region + "' vertex needs 'landmark' or 'derived'");
    }
    return v;
}

void validate_scheme(const RegionScheme& s, const std::string& origin) {
    std::set<std::string> names;
    for (const auto& r : s.regions) {
        if (r.name.empty()) raise(Errc::invalid_argument, origin + ": region with empty name");
        if (!names.insert(r.name).second)
            raise(Errc::invalid_argument, origin + ": duplicate region name '" + r.name + "'");
        if (r.vertices.size() < 3)
            raise(Errc::invalid_argument, origin + ": region '" + r.name + "' has " +
                                              std::to_string(r.vertices.size()) +
                                              " vertices, need at least 3");
        for (const auto& v : r.vertices) {
            double wsum = 0.0;
            for (const auto& t : v.terms) {
                if (t.landmark < 0 || t.landmark >= kNumLandmarks)
                    raise(Errc::index_out_of_range, origin + ": region '" + r.name +
                                                        "' references landmark " +
                                                        std::to_string(t.landmark));
                wsum += t.w;
            }
            if (std::abs(wsum - 1.0) > 1e-9)
                raise(Errc::bad_weights, origin + ": region '" + r.name +
                                             "' has vertex weights summing to " +
                                             std::to_string(wsum));
        }
    }
}

std::string format_weight(double w) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", w);
    return buf;
}

} // namespace

RegionScheme parse_region_scheme(const std::string& json_text, const std::string& origin) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        raise(Errc::invalid_argument, origin + ": invalid JSON: " + e.what());
    }
    RegionScheme s;
    try {
        s.name = j.at("name").get<std::string>();
        s.include_whole_face = j.value("include_whole_face", true);
        for (const auto& jr : j.at("regions")) {
            RegionDef def;
            def.name = jr.at("name").get<std::string>();
            for (const auto& jv : jr.at("vertices"))
                def.vertices.push_back(parse_vertex(jv, def.name, origin));
            s.regions.push_back(std::move(def));
        }
    } catch (const json::exception& e) {
        raise(Errc::invalid_argument, origin + ": malformed scheme: " + e.what());
    }
    validate_scheme(s, origin);
    return s;
}

RegionScheme load_region_scheme(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        if (!std::filesystem::exists(path)) raise(Errc::file_not_found, path);
        raise(Errc::io_error, path + ": cannot open");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_region_scheme(buf.str(), path);
}

std::string region_scheme_to_json(const RegionScheme& scheme) {
    json j;
    j["name"] = scheme.name;
    j["include_whole_face"] = scheme.include_whole_face;
    j["regions"] = json::array();
    for (const auto& r : scheme.regions) {
        json jr;
        jr["name"] = r.name;
        jr["vertices"] = json::array();
        for (const auto& v : r.vertices) {
            if (v.terms.size() == 1 && v.terms[0].w == 1.0) {
                jr["vertices"].push_back(json{{"landmark", v.terms[0].landmark}});
            } else {
                json terms = json::array();
                for (const auto& t : v.terms)
                    terms.push_back(json{{"landmark", t.landmark}, {"w", t.w}});
                jr["vertices"].push_back(json{{"derived", terms}});
            }
        }
        j["regions"].push_back(std::move(jr));
    }
    return j.dump(2);
}

std::uint64_t region_scheme_hash(const RegionScheme& scheme) {
    // FNV-1a over a canonical rendering; whitespace and key order in the
    // source file do not affect the hash
    std::ostringstream canon;
    canon << "scheme:" << scheme.name << ";whole_face:" << scheme.include_whole_face << ";";
    for (const auto& r : scheme.regions) {
        canon << "region:" << r.name << "[";
        for (const auto& v : r.vertices) {
            canon << "(";
            for (const auto& t : v.terms)
                canon << t.landmark << "*" << format_weight(t.w) << ",";
            canon << ")";
        }
        canon << "]";
    }
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canon.str()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace rfer
