#include "rfer/manifest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rfer/error.hpp"

namespace fs = std::filesystem;

namespace rfer {

namespace {

// Minimal CSV field splitter; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string resolve(const std::string& base_dir, const std::string& p) {
    if (p.empty() || base_dir.empty()) return p;
    fs::path fp(p);
    if (fp.is_absolute()) return p;
    return (fs::path(base_dir) / fp).lexically_normal().string();
}

} // namespace

int DatasetManifest::class_index(const std::string& label) const {
    auto it = std::find(classes.begin(), classes.end(), label);
    return it == classes.end() ? -1 : static_cast<int>(it - classes.begin());
}

std::vector<int> DatasetManifest::label_indices() const {
    std::vector<int> idx;
    idx.reserve(samples.size());
    for (const auto& s : samples) idx.push_back(class_index(s.label));
    return idx;
}

std::vector<std::size_t> DatasetManifest::class_counts() const {
    std::vector<std::size_t> counts(classes.size(), 0);
    for (const auto& s : samples) counts[static_cast<std::size_t>(class_index(s.label))]++;
    return counts;
}

DatasetManifest parse_manifest_csv(const std::string& text, const std::string& base_dir,
                                   const std::string& origin) {
    std::istringstream ss(text);
    std::string line;
    if (!std::getline(ss, line)) raise(Errc::empty_manifest, origin + ": no header row");

    auto header = split_csv_row(line);
    auto col = [&](const std::string& name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            raise(Errc::missing_column, origin + ": header lacks column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    std::size_t ci = col("image"), cl = col("landmarks"), cb = col("label");

    DatasetManifest m;
    std::set<std::pair<std::string, std::string>> seen;
    std::size_t row_no = 1;
    while (std::getline(ss, line)) {
        ++row_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_row(line);
        if (fields.size() != header.size())
            raise(Errc::unreadable_row, origin + ": row " + std::to_string(row_no) + " has " +
                                            std::to_string(fields.size()) + " fields, expected " +
                                            std::to_string(header.size()));
        Sample s;
        s.image_path = resolve(base_dir, fields[ci]);
        s.landmark_path = resolve(base_dir, fields[cl]);
        s.label = fields[cb];
        if (fields[ci].empty() || s.label.empty())
            raise(Errc::unreadable_row,
                  origin + ": row " + std::to_string(row_no) + " has empty image or label");
        if (!seen.insert({s.image_path, s.label}).second)
            raise(Errc::unreadable_row, origin + ": row " + std::to_string(row_no) +
                                            " duplicates (image,label) pair '" + fields[ci] +
                                            "','" + s.label + "'");
        if (m.class_index(s.label) < 0) m.classes.push_back(s.label);
        m.samples.push_back(std::move(s));
    }
    if (m.samples.empty()) raise(Errc::empty_manifest, origin + ": no data rows");
    return m;
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        if (!fs::exists(path)) raise(Errc::file_not_found, path);
        raise(Errc::io_error, path + ": cannot open");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string dir = fs::path(path).parent_path().string();
    return parse_manifest_csv(buf.str(), dir, path);
}

} // namespace rfer
