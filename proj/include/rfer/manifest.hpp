#pragma once

#include <string>
#include <vector>

namespace rfer {

struct Sample {
    std::string image_path;
    std::string landmark_path;
    std::string label;
};

// Inventory of one dataset: samples plus the label set in first-appearance
// order. Relative paths are resolved against the manifest's directory.
struct DatasetManifest {
    std::vector<Sample> samples;
    std::vector<std::string> classes;

    int class_index(const std::string& label) const;
    std::vector<int> label_indices() const;
    std::vector<std::size_t> class_counts() const;
};

// CSV with header `image,landmarks,label`.
DatasetManifest load_manifest(const std::string& path);

DatasetManifest parse_manifest_csv(const std::string& text, const std::string& base_dir,
                                   const std::string& origin = "<memory>");

} // namespace rfer
