// rfer: landmark-region facial expression recognition pipeline.
// Subcommands: extract | train | grid-search | select-regions | evaluate |
// predict | inspect-regions

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rfer/error.hpp"
#include "rfer/eval.hpp"
#include "rfer/features.hpp"
#include "rfer/geometry.hpp"
#include "rfer/image.hpp"
#include "rfer/landmarks.hpp"
#include "rfer/lbp.hpp"
#include "rfer/manifest.hpp"
#include "rfer/model_io.hpp"
#include "rfer/moments.hpp"
#include "rfer/pipeline.hpp"
#include "rfer/selection.hpp"
#include "rfer/svm.hpp"

using nlohmann::json;
using namespace rfer;

namespace {

struct CommonOpts {
    std::string manifest_path;
    std::string scheme_path;
    std::string grid_spec; // "RxC", grid baseline instead of a scheme
    std::string features = "both";
    std::string regions = "all";
    std::string selected_file = "selected.json";
    bool no_whole_face = false;
    int folds = 5;
    std::uint64_t seed = 42;
    bool as_json = false;
};

FeatureKind parse_kinds(const std::string& s) {
    if (s == "lbp") return FeatureKind::lbp;
    if (s == "ncm") return FeatureKind::ncm;
    if (s == "both") return FeatureKind::both;
    raise(Errc::invalid_argument, "--features must be lbp, ncm or both");
}

std::pair<int, int> parse_grid_spec(const std::string& s) {
    auto x = s.find('x');
    if (x == std::string::npos)
        raise(Errc::invalid_argument, "--grid expects ROWSxCOLS, e.g. 5x6");
    try {
        return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
    } catch (const std::exception&) {
        raise(Errc::invalid_argument, "--grid expects ROWSxCOLS, e.g. 5x6");
    }
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> vals;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        vals.push_back(std::stod(tok));
    }
    return vals;
}

// Scheme-region indices named by --regions, widened to mask indices (adds
// the whole-face mask unless disabled).
std::vector<int> resolve_mask_indices(const RegionScheme& scheme, const CommonOpts& opt) {
    std::vector<int> scheme_regions;
    if (opt.regions == "all") {
        for (std::size_t i = 0; i < scheme.regions.size(); ++i)
            scheme_regions.push_back(static_cast<int>(i));
    } else if (opt.regions == "selected") {
        std::ifstream in(opt.selected_file);
        if (!in) raise(Errc::file_not_found, opt.selected_file);
        json j = json::parse(in);
        if (j.contains("scheme_hash") &&
            j["scheme_hash"].get<std::uint64_t>() != region_scheme_hash(scheme))
            raise(Errc::scheme_mismatch,
                  opt.selected_file + " was produced with a different scheme");
        for (int idx : j.at("selected").get<std::vector<int>>()) scheme_regions.push_back(idx);
    } else {
        std::stringstream ss(opt.regions);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            try {
                scheme_regions.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                raise(Errc::invalid_argument, "--regions: cannot parse index '" + tok + "'");
            }
        }
    }
    for (int idx : scheme_regions)
        if (idx < 0 || static_cast<std::size_t>(idx) >= scheme.regions.size())
            raise(Errc::index_out_of_range,
                  "--regions index " + std::to_string(idx) + " out of range");
    if (scheme.include_whole_face && !opt.no_whole_face)
        scheme_regions.push_back(static_cast<int>(scheme.regions.size()));
    return scheme_regions;
}

struct LoadedDataset {
    FeatureDataset ds;
    RegionScheme scheme; // empty regions when grid mode
    bool grid_mode = false;
    int grid_rows = 0, grid_cols = 0;
    std::vector<int> mask_indices;
    FeatureKind kinds = FeatureKind::both;
};

LoadedDataset load_dataset(const CommonOpts& opt) {
    if (opt.manifest_path.empty()) raise(Errc::invalid_argument, "--manifest is required");
    DatasetManifest manifest = load_manifest(opt.manifest_path);
    LoadedDataset out;
    out.kinds = parse_kinds(opt.features);
    if (!opt.grid_spec.empty()) {
        auto [rows, cols] = parse_grid_spec(opt.grid_spec);
        out.grid_mode = true;
        out.grid_rows = rows;
        out.grid_cols = cols;
        out.ds = extract_grid_dataset(manifest, rows, cols, out.kinds);
        out.mask_indices.resize(static_cast<std::size_t>(rows) * cols);
        for (std::size_t i = 0; i < out.mask_indices.size(); ++i)
            out.mask_indices[i] = static_cast<int>(i);
    } else {
        if (opt.scheme_path.empty())
            raise(Errc::invalid_argument, "either --scheme or --grid is required");
        out.scheme = load_region_scheme(opt.scheme_path);
        out.mask_indices = resolve_mask_indices(out.scheme, opt);
        out.ds = extract_dataset(manifest, out.scheme, out.mask_indices, out.kinds);
    }
    return out;
}

TrainParams make_params(double c, double gamma, std::uint64_t seed, std::size_t dim) {
    TrainParams p;
    p.C = c;
    p.gamma = gamma > 0.0 ? gamma : 1.0 / static_cast<double>(dim);
    p.seed = seed;
    return p;
}

// --- subcommands ------------------------------------------------------------

int cmd_extract(const CommonOpts& opt, const std::string& out_path,
                const std::string& dump_lbp_dir, const std::string& dump_moments_path) {
    DatasetManifest manifest = load_manifest(opt.manifest_path);
    LoadedDataset ld = load_dataset(opt);

    if (!dump_lbp_dir.empty()) {
        std::filesystem::create_directories(dump_lbp_dir);
        for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
            Image img = load_grayscale_image(manifest.samples[i].image_path);
            LbpLabelMap map = lbp_label_map(img);
            Image vis = make_image(map.width, map.height, 0);
            for (std::size_t p = 0; p < map.labels.size(); ++p)
                vis.data[p] = map.labels[p] < 0 ? 0 : static_cast<std::uint8_t>(map.labels[p]);
            auto stem = std::filesystem::path(manifest.samples[i].image_path).stem().string();
            write_pgm(dump_lbp_dir + "/" + stem + "_lbp.pgm", vis);
        }
    }
    if (!dump_moments_path.empty()) {
        json dump = json::array();
        for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
            Image img = load_grayscale_image(manifest.samples[i].image_path);
            LandmarkSet lm = parse_landmarks(manifest.samples[i].landmark_path);
            std::vector<RegionMask> masks;
            if (ld.grid_mode) {
                Box box = landmark_bounding_box(lm, img.width, img.height);
                masks = partition_grid(box, ld.grid_rows, ld.grid_cols);
            } else {
                masks = build_regions(lm, ld.scheme, img.width, img.height);
            }
            json sample;
            sample["image"] = manifest.samples[i].image_path;
            sample["regions"] = json::array();
            for (int idx : ld.mask_indices) {
                const auto& m = masks[static_cast<std::size_t>(idx)];
                sample["regions"].push_back(
                    {{"name", m.name}, {"nu", normalized_central_moments(m)}});
            }
            dump.push_back(std::move(sample));
        }
        std::ofstream out(dump_moments_path);
        out << dump.dump(2) << "\n";
    }

    if (out_path.empty() || out_path == "-") {
        write_features_csv(std::cout, ld.ds, manifest);
    } else {
        std::ofstream out(out_path);
        if (!out) raise(Errc::io_error, out_path + ": cannot open for writing");
        write_features_csv(out, ld.ds, manifest);
    }
    return 0;
}

int cmd_train(const CommonOpts& opt, double c, double gamma, const std::string& model_path) {
    LoadedDataset ld = load_dataset(opt);
    TrainParams params = make_params(c, gamma, opt.seed, ld.ds.X.cols);

    ScalingStats stats = fit_scaling(ld.ds.X);
    Matrix Xs = apply_scaling(stats, ld.ds.X);
    SvmModel svm = train_multiclass_ova(Xs, ld.ds.labels, ld.ds.classes, params);

    SavedModel model;
    model.source = ld.grid_mode ? MaskSource::grid : MaskSource::scheme;
    model.scheme = ld.scheme;
    model.grid_rows = ld.grid_rows;
    model.grid_cols = ld.grid_cols;
    model.kinds = ld.kinds;
    model.mask_indices = ld.mask_indices;
    model.scaling = stats;
    model.svm = std::move(svm);
    save_model(model_path, model);

    std::size_t sv_total = 0;
    bool all_converged = true;
    for (const auto& bm : model.svm.binaries) {
        sv_total += bm.support_vectors.rows;
        all_converged &= bm.converged;
    }
    if (opt.as_json) {
        json j{{"model", model_path},
               {"classes", model.svm.classes},
               {"dim", ld.ds.X.cols},
               {"samples", ld.ds.X.rows},
               {"C", params.C},
               {"gamma", params.gamma},
               {"support_vectors", sv_total},
               {"converged", all_converged}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "trained " << model.svm.classes.size() << "-class model on "
                  << ld.ds.X.rows << " samples (dim " << ld.ds.X.cols << ", C=" << params.C
                  << ", gamma=" << params.gamma << ", " << sv_total << " SVs"
                  << (all_converged ? "" : ", WARNING: sweep limit hit") << ") -> "
                  << model_path << "\n";
    }
    return 0;
}

int cmd_grid_search(const CommonOpts& opt, double gamma_unused, const std::string& c_grid_s,
                    const std::string& gamma_grid_s) {
    (void)gamma_unused;
    LoadedDataset ld = load_dataset(opt);
    auto c_grid = c_grid_s.empty() ? default_c_grid() : parse_double_list(c_grid_s);
    auto gamma_grid =
        gamma_grid_s.empty() ? default_gamma_grid() : parse_double_list(gamma_grid_s);

    FoldAssignment folds = stratified_kfold(ld.ds.labels, opt.folds, opt.seed);
    TrainParams base;
    base.seed = opt.seed;
    GridSearchResult res =
        grid_search(ld.ds.X, ld.ds.labels, ld.ds.classes, folds, c_grid, gamma_grid, base);

    if (opt.as_json) {
        json j{{"c_grid", res.c_grid},
               {"gamma_grid", res.gamma_grid},
               {"best_c", res.best_c},
               {"best_gamma", res.best_gamma},
               {"best_accuracy", res.best_accuracy}};
        j["accuracy"] = json::array();
        for (std::size_t ci = 0; ci < res.c_grid.size(); ++ci) {
            json row = json::array();
            for (std::size_t gi = 0; gi < res.gamma_grid.size(); ++gi)
                row.push_back(res.accuracy.at(ci, gi));
            j["accuracy"].push_back(std::move(row));
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("%12s", "C \\ gamma");
        for (double g : res.gamma_grid) std::printf(" %9.3g", g);
        std::printf("\n");
        for (std::size_t ci = 0; ci < res.c_grid.size(); ++ci) {
            std::printf("%12.3g", res.c_grid[ci]);
            for (std::size_t gi = 0; gi < res.gamma_grid.size(); ++gi)
                std::printf(" %9.4f", res.accuracy.at(ci, gi));
            std::printf("\n");
        }
        std::printf("best: C=%g gamma=%g accuracy=%.4f\n", res.best_c, res.best_gamma,
                    res.best_accuracy);
    }
    return 0;
}

int cmd_select_regions(const CommonOpts& opt, const std::string& seed_region_name,
                       double epsilon, std::size_t max_regions, double c, double gamma,
                       const std::string& trace_path, const std::string& selected_path) {
    if (opt.grid_spec.empty() && opt.scheme_path.empty())
        raise(Errc::invalid_argument, "--scheme is required");
    if (!opt.grid_spec.empty())
        raise(Errc::invalid_argument, "region selection needs a scheme, not a grid");

    LoadedDataset ld = load_dataset(opt);
    int seed_region = ld.scheme.region_index(seed_region_name);
    if (seed_region < 0)
        raise(Errc::seed_not_in_scheme,
              "scheme has no region named '" + seed_region_name + "'");

    int whole_face = -1;
    if (ld.scheme.include_whole_face && !opt.no_whole_face)
        whole_face = static_cast<int>(ld.scheme.regions.size());

    FoldAssignment folds = stratified_kfold(ld.ds.labels, opt.folds, opt.seed);
    TrainParams params = make_params(c, gamma, opt.seed, ld.ds.X.cols);
    SelectionConfig cfg{ld.ds.X,  ld.ds.layout, ld.ds.labels, ld.ds.classes,
                        folds,    params,       whole_face};

    SelectionTrace trace = greedy_forward_select(cfg, seed_region, epsilon, max_regions);
    json jtrace = selection_trace_json(trace, ld.ds.layout);

    if (!trace_path.empty()) {
        std::ofstream out(trace_path);
        if (!out) raise(Errc::io_error, trace_path + ": cannot open for writing");
        out << jtrace.dump(2) << "\n";
    }
    if (!selected_path.empty()) {
        std::vector<int> sorted = trace.selected;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::string> names;
        for (int id : sorted) names.push_back(ld.scheme.regions[id].name);
        json jsel{{"scheme", ld.scheme.name},
                  {"scheme_hash", region_scheme_hash(ld.scheme)},
                  {"selected", sorted},
                  {"selected_names", names},
                  {"keep_whole_face", whole_face >= 0}};
        std::ofstream out(selected_path);
        if (!out) raise(Errc::io_error, selected_path + ": cannot open for writing");
        out << jsel.dump(2) << "\n";
    }

    if (opt.as_json) {
        std::cout << jtrace.dump(2) << "\n";
    } else {
        std::cout << "seed '" << seed_region_name << "' accuracy " << trace.seed_accuracy
                  << "\n";
        for (const auto& s : trace.steps) {
            std::cout << (s.accepted ? "  + " : "  x ")
                      << ld.ds.layout.region_name(s.chosen_region) << " -> " << s.best_accuracy
                      << (s.accepted ? "" : " (stop)") << "\n";
        }
        std::cout << "selected " << trace.selected.size() << " regions, " << trace.total_cv_runs
                  << " CV runs\n";
    }
    return 0;
}

int cmd_evaluate(const CommonOpts& opt, double c, double gamma) {
    LoadedDataset ld = load_dataset(opt);
    FoldAssignment folds = stratified_kfold(ld.ds.labels, opt.folds, opt.seed);
    TrainParams params = make_params(c, gamma, opt.seed, ld.ds.X.cols);
    CVResult cv = cross_validate(ld.ds.X, ld.ds.labels, ld.ds.classes, folds, params);

    if (opt.as_json) {
        std::cout << evaluation_json(cv, folds, ld.ds.classes).dump(2) << "\n";
    } else {
        std::cout << report_text(cv.confusion);
        std::cout << "per-fold accuracy:";
        for (double a : cv.per_fold_accuracy) std::printf(" %.4f", a);
        std::printf("\nmean accuracy (unweighted): %.4f\n", cv.mean_accuracy);
        std::printf("aggregate accuracy (weighted): %.4f\n", cv.weighted_accuracy);
    }
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& image_path,
                const std::string& landmarks_path, bool as_json) {
    SavedModel model = load_model(model_path);
    Image img = load_grayscale_image(image_path);
    LandmarkSet lm = parse_landmarks(landmarks_path);
    auto [idx, values] = predict_sample(model, img, lm);

    if (as_json) {
        json j{{"label", model.svm.classes[static_cast<std::size_t>(idx)]},
               {"classes", model.svm.classes},
               {"decision_values", values}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << model.svm.classes[static_cast<std::size_t>(idx)] << "\n";
        for (std::size_t k = 0; k < values.size(); ++k)
            std::printf("  %-12s %+.6f\n", model.svm.classes[k].c_str(), values[k]);
    }
    return 0;
}

int cmd_inspect_regions(const std::string& scheme_path, const std::string& image_path,
                        const std::string& landmarks_path, const std::string& out_path) {
    RegionScheme scheme = load_region_scheme(scheme_path);
    Image img = load_grayscale_image(image_path);
    LandmarkSet lm = parse_landmarks(landmarks_path);
    auto masks = build_regions(lm, scheme, img.width, img.height);

    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(img.width) * img.height * 3);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = img.data[i];

    auto mark = [&](int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        std::size_t i = (static_cast<std::size_t>(y) * img.width + x) * 3;
        rgb[i] = r;
        rgb[i + 1] = g;
        rgb[i + 2] = b;
    };
    for (const auto& m : masks) {
        bool whole = m.name == "whole_face";
        for (int y = 0; y < m.height; ++y)
            for (int x = 0; x < m.width; ++x) {
                if (!m.bits[static_cast<std::size_t>(y) * m.width + x]) continue;
                int ax = m.x0 + x, ay = m.y0 + y;
                bool boundary = !m.contains(ax - 1, ay) || !m.contains(ax + 1, ay) ||
                                !m.contains(ax, ay - 1) || !m.contains(ax, ay + 1);
                if (!boundary) continue;
                if (whole)
                    mark(ax, ay, 0, 255, 0);
                else
                    mark(ax, ay, 255, 0, 0);
            }
    }

    if (out_path.size() >= 4 && out_path.substr(out_path.size() - 4) == ".pgm") {
        Image overlay = img;
        for (const auto& m : masks)
            for (int y = 0; y < m.height; ++y)
                for (int x = 0; x < m.width; ++x) {
                    if (!m.bits[static_cast<std::size_t>(y) * m.width + x]) continue;
                    int ax = m.x0 + x, ay = m.y0 + y;
                    bool boundary = !m.contains(ax - 1, ay) || !m.contains(ax + 1, ay) ||
                                    !m.contains(ax, ay - 1) || !m.contains(ax, ay + 1);
                    if (boundary) overlay.at(ax, ay) = 255;
                }
        write_pgm(out_path, overlay);
    } else {
        write_png_rgb(out_path, img.width, img.height, rgb);
    }
    std::cout << "wrote " << out_path << " (" << masks.size() << " masks)\n";
    return 0;
}

void add_common(CLI::App* cmd, CommonOpts& opt, bool with_dataset = true) {
    if (with_dataset) {
        cmd->add_option("--manifest", opt.manifest_path, "dataset manifest CSV");
        cmd->add_option("--scheme", opt.scheme_path, "region scheme JSON");
        cmd->add_option("--grid", opt.grid_spec, "grid baseline ROWSxCOLS instead of a scheme");
        cmd->add_option("--features", opt.features, "lbp|ncm|both (default both)");
        cmd->add_option("--regions", opt.regions,
                        "all|selected|<comma-separated scheme region indices>");
        cmd->add_option("--selected-file", opt.selected_file,
                        "selection output consumed by --regions selected");
        cmd->add_flag("--no-whole-face", opt.no_whole_face,
                      "drop the whole-face block even if the scheme enables it");
    }
    cmd->add_option("--folds", opt.folds, "cross-validation folds (default 5)");
    cmd->add_option("--seed", opt.seed, "RNG seed (default 42)");
    cmd->add_flag("--json", opt.as_json, "machine-readable JSON output");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"region-specific facial expression recognition pipeline"};
    app.require_subcommand(1);

    CommonOpts opt;
    std::string out_path, dump_lbp_dir, dump_moments_path;
    std::string model_path = "model.bin", image_path, landmarks_path;
    std::string c_grid_s, gamma_grid_s;
    std::string seed_region = "mouth";
    std::string trace_path, selected_out = "selected.json";
    double C = 1.0, gamma = 0.0; // gamma <= 0 resolves to 1/dim
    double epsilon = 0.0;
    std::size_t max_regions = 0;

    auto* extract = app.add_subcommand("extract", "extract feature vectors to CSV");
    add_common(extract, opt);
    extract->add_option("--out", out_path, "output CSV path (default stdout)");
    extract->add_option("--dump-lbp", dump_lbp_dir, "write per-image LBP label maps (PGM)");
    extract->add_option("--dump-moments", dump_moments_path, "write per-region nu vectors (JSON)");

    auto* train = app.add_subcommand("train", "train a one-vs-all RBF-SVM model");
    add_common(train, opt);
    train->add_option("--C", C, "SVM penalty (default 1)");
    train->add_option("--gamma", gamma, "RBF width (default 1/dim)");
    train->add_option("--model", model_path, "output model path");

    auto* gs = app.add_subcommand("grid-search", "cross-validated C/gamma grid search");
    add_common(gs, opt);
    gs->add_option("--c-grid", c_grid_s, "comma-separated C values (default 2^-5..2^15)");
    gs->add_option("--gamma-grid", gamma_grid_s,
                   "comma-separated gamma values (default 2^-15..2^3)");

    auto* sel = app.add_subcommand("select-regions", "greedy forward region selection");
    add_common(sel, opt);
    sel->add_option("--seed-region", seed_region, "seed region name (default mouth)");
    sel->add_option("--epsilon", epsilon, "minimum accuracy improvement to continue");
    sel->add_option("--max-regions", max_regions, "stop after this many regions (0 = no cap)");
    sel->add_option("--C", C, "SVM penalty for scoring (default 1)");
    sel->add_option("--gamma", gamma, "RBF width for scoring (default 1/dim)");
    sel->add_option("--trace", trace_path, "write the full selection trace JSON here");
    sel->add_option("--selected-out", selected_out, "write selected.json here");
    sel->get_option("--features")->default_str("lbp");

    auto* ev = app.add_subcommand("evaluate", "stratified k-fold evaluation");
    add_common(ev, opt);
    ev->add_option("--C", C, "SVM penalty (default 1)");
    ev->add_option("--gamma", gamma, "RBF width (default 1/dim)");

    auto* pr = app.add_subcommand("predict", "predict one sample");
    pr->add_option("--model", model_path, "trained model file")->required();
    pr->add_option("--image", image_path, "input image (PGM/PNG)")->required();
    pr->add_option("--landmarks", landmarks_path, "68-point landmark file")->required();
    pr->add_flag("--json", opt.as_json, "machine-readable JSON output");

    auto* ir = app.add_subcommand("inspect-regions", "render region boundaries over an image");
    ir->add_option("--scheme", opt.scheme_path, "region scheme JSON")->required();
    ir->add_option("--image", image_path, "input image")->required();
    ir->add_option("--landmarks", landmarks_path, "68-point landmark file")->required();
    ir->add_option("--out", out_path, "output overlay (PNG, or PGM by extension)")->required();

    // select-regions defaults to LBP-only scoring
    CLI11_PARSE(app, argc, argv);
    if (sel->parsed() && !sel->get_option("--features")->count()) opt.features = "lbp";

    try {
        if (extract->parsed()) return cmd_extract(opt, out_path, dump_lbp_dir, dump_moments_path);
        if (train->parsed()) return cmd_train(opt, C, gamma, model_path);
        if (gs->parsed()) return cmd_grid_search(opt, gamma, c_grid_s, gamma_grid_s);
        if (sel->parsed())
            return cmd_select_regions(opt, seed_region, epsilon, max_regions, C, gamma,
                                      trace_path, selected_out);
        if (ev->parsed()) return cmd_evaluate(opt, C, gamma);
        if (pr->parsed()) return cmd_predict(model_path, image_path, landmarks_path, opt.as_json);
        if (ir->parsed()) return cmd_inspect_regions(opt.scheme_path, image_path,
                                                     landmarks_path, out_path);
        std::cerr << "UnknownSubcommand\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
