#include "rfer/pipeline.hpp"

#include "rfer/error.hpp"
#include "rfer/image.hpp"
#include "rfer/landmarks.hpp"
#include "rfer/util.hpp"

namespace rfer {

namespace {

FeatureDataset assemble(const DatasetManifest& manifest,
                        const std::function<FeatureVector(const Sample&)>& extract_one) {
    if (manifest.samples.empty()) raise(Errc::empty_manifest, "manifest has no samples");

    std::vector<FeatureVector> rows(manifest.samples.size());
    parallel_for(manifest.samples.size(),
                 [&](std::size_t i) { rows[i] = extract_one(manifest.samples[i]); });

    FeatureDataset ds;
    ds.layout = rows[0].layout;
    ds.classes = manifest.classes;
    ds.labels = manifest.label_indices();
    ds.X = Matrix(rows.size(), ds.layout.dim());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!(rows[i].layout == ds.layout))
            raise(Errc::layout_mismatch,
                  "sample " + std::to_string(i) + " produced a different feature layout");
        std::copy(rows[i].values.begin(), rows[i].values.end(), ds.X.row(i));
    }
    return ds;
}

} // namespace

FeatureDataset extract_dataset(const DatasetManifest& manifest, const RegionScheme& scheme,
                               const std::vector<int>& mask_indices, FeatureKind kinds) {
    return assemble(manifest, [&](const Sample& s) {
        Image img = load_grayscale_image(s.image_path);
        LandmarkSet lm = parse_landmarks(s.landmark_path);
        return extract_features(img, lm, scheme, mask_indices, kinds);
    });
}

FeatureDataset extract_grid_dataset(const DatasetManifest& manifest, int rows, int cols,
                                    FeatureKind kinds) {
    return assemble(manifest, [&](const Sample& s) {
        Image img = load_grayscale_image(s.image_path);
        LandmarkSet lm = parse_landmarks(s.landmark_path);
        Box box = landmark_bounding_box(lm, img.width, img.height);
        auto masks = partition_grid(box, rows, cols);
        std::vector<int> all(masks.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
        return extract_from_masks(img, masks, all, kinds);
    });
}

void write_features_csv(std::ostream& out, const FeatureDataset& ds,
                        const DatasetManifest& manifest) {
    out << "label";
    for (const auto& b : ds.layout.blocks) {
        const char* kind = b.kind == BlockKind::lbp ? "lbp" : "ncm";
        for (std::size_t i = 0; i < b.length; ++i)
            out << "," << b.region << ":" << kind << ":" << i;
    }
    out << "\n";
    out.precision(17);
    for (std::size_t r = 0; r < ds.X.rows; ++r) {
        out << manifest.samples[r].label;
        const double* row = ds.X.row(r);
        for (std::size_t c = 0; c < ds.X.cols; ++c) out << "," << row[c];
        out << "\n";
    }
}

nlohmann::json evaluation_json(const CVResult& cv, const FoldAssignment& folds,
                               const std::vector<std::string>& classes) {
    nlohmann::json j;
    j["protocol"] = "stratified-k-fold";
    j["seed"] = folds.seed;
    j["folds"] = folds.k;
    j["per_fold_accuracy"] = cv.per_fold_accuracy;
    j["mean_accuracy"] = cv.mean_accuracy;
    j["weighted_accuracy"] = cv.weighted_accuracy;
    j["class_order"] = classes;
    j["confusion_matrix"] = cv.confusion.counts;
    return j;
}

} // namespace rfer
