#include "rfer/landmarks.hpp"

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "rfer/error.hpp"

namespace rfer {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

bool parse_point_line(const std::string& line, Point& p) {
    std::istringstream ss(line);
    double x, y;
    if (!(ss >> x >> y)) return false;
    std::string rest;
    if (ss >> rest) return false; // trailing garbage
    p = {x, y};
    return true;
}

LandmarkSet from_points(const std::vector<Point>& pts, const std::string& origin) {
    if (pts.size() != kNumLandmarks)
        raise(Errc::wrong_point_count, origin + ": expected 68 points, got " +
                                           std::to_string(pts.size()));
    LandmarkSet lm;
    for (int i = 0; i < kNumLandmarks; ++i) {
        if (!std::isfinite(pts[i].x) || !std::isfinite(pts[i].y))
            raise(Errc::non_finite_coordinate,
                  origin + ": point " + std::to_string(i) + " is not finite");
        lm[i] = pts[static_cast<std::size_t>(i)];
    }
    return lm;
}

LandmarkSet parse_pts(const std::vector<std::string>& lines, const std::string& origin) {
    long declared = -1;
    std::size_t i = 0;
    // header lines until '{'
    for (; i < lines.size(); ++i) {
        std::string l = trim(lines[i]);
        if (l == "{") {
            ++i;
            break;
        }
        if (l.rfind("n_points:", 0) == 0) {
            try {
                declared = std::stol(trim(l.substr(9)));
            } catch (const std::exception&) {
                raise(Errc::malformed_line, origin + ": bad n_points header '" + l + "'");
            }
        }
        // "version:" and blank lines are ignored
    }
    if (declared >= 0 && declared != kNumLandmarks)
        raise(Errc::wrong_point_count,
              origin + ": n_points declares " + std::to_string(declared) + ", expected 68");

    std::vector<Point> pts;
    for (; i < lines.size(); ++i) {
        std::string l = trim(lines[i]);
        if (l.empty()) continue;
        if (l == "}") break;
        Point p;
        if (!parse_point_line(l, p))
            raise(Errc::malformed_line, origin + ": cannot parse point line '" + l + "'");
        pts.push_back(p);
    }
    return from_points(pts, origin);
}

} // namespace

LandmarkSet parse_landmarks_text(const std::string& text, const std::string& origin) {
    std::vector<std::string> lines;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);

    for (const auto& l : lines) {
        std::string t = trim(l);
        if (t.empty()) continue;
        if (t.rfind("version:", 0) == 0 || t.rfind("n_points:", 0) == 0 || t == "{")
            return parse_pts(lines, origin);
        break;
    }

    // plain format: one "x y" pair per non-empty line
    std::vector<Point> pts;
    for (const auto& l : lines) {
        std::string t = trim(l);
        if (t.empty()) continue;
        Point p;
        if (!parse_point_line(t, p))
            raise(Errc::malformed_line, origin + ": cannot parse point line '" + t + "'");
        pts.push_back(p);
    }
    return from_points(pts, origin);
}

LandmarkSet parse_landmarks(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        if (!std::filesystem::exists(path)) raise(Errc::file_not_found, path);
        raise(Errc::io_error, path + ": cannot open");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_landmarks_text(buf.str(), path);
}

} // namespace rfer
