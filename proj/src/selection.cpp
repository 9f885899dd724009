#include "rfer/selection.hpp"

#include <algorithm>
#include <set>

#include "rfer/error.hpp"
#include "rfer/util.hpp"

namespace rfer {

Matrix subset_columns(const Matrix& X, const FeatureLayout& layout,
                      const std::vector<int>& region_ids) {
    std::set<int> wanted(region_ids.begin(), region_ids.end());
    std::vector<std::size_t> cols;
    for (const auto& b : layout.blocks) {
        if (!wanted.count(b.region_index)) continue;
        for (std::size_t c = 0; c < b.length; ++c) cols.push_back(b.offset + c);
    }
    if (cols.empty()) raise(Errc::invalid_argument, "column subset is empty");
    Matrix out(X.rows, cols.size());
    for (std::size_t r = 0; r < X.rows; ++r) {
        const double* src = X.row(r);
        double* dst = out.row(r);
        for (std::size_t c = 0; c < cols.size(); ++c) dst[c] = src[cols[c]];
    }
    return out;
}

namespace {

std::vector<int> selectable_regions(const SelectionConfig& cfg) {
    std::vector<int> ids = cfg.layout.region_ids();
    if (cfg.always_include_region >= 0)
        ids.erase(std::remove(ids.begin(), ids.end(), cfg.always_include_region), ids.end());
    if (ids.empty()) raise(Errc::invalid_argument, "layout has no selectable regions");
    return ids;
}

double score_regions(const SelectionConfig& cfg, std::vector<int> region_ids) {
    if (cfg.always_include_region >= 0) region_ids.push_back(cfg.always_include_region);
    Matrix sub = subset_columns(cfg.X, cfg.layout, region_ids);
    return cross_validate(sub, cfg.labels, cfg.classes, cfg.folds, cfg.params).mean_accuracy;
}

} // namespace

std::vector<std::pair<int, double>> rank_single_regions(const SelectionConfig& cfg) {
    std::vector<int> ids = selectable_regions(cfg);
    std::vector<std::pair<int, double>> scores(ids.size());
    parallel_for(ids.size(), [&](std::size_t i) {
        scores[i] = {ids[i], score_regions(cfg, {ids[i]})};
    });
    std::stable_sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return scores;
}

SelectionTrace greedy_forward_select(const SelectionConfig& cfg, int seed_region,
                                     double epsilon, std::size_t max_regions) {
    std::vector<int> remaining = selectable_regions(cfg);
    if (std::find(remaining.begin(), remaining.end(), seed_region) == remaining.end())
        raise(Errc::seed_not_in_scheme,
              "seed region " + std::to_string(seed_region) + " is not a selectable region");

    SelectionTrace trace;
    trace.seed_region = seed_region;
    trace.selected = {seed_region};
    remaining.erase(std::remove(remaining.begin(), remaining.end(), seed_region),
                    remaining.end());

    trace.seed_accuracy = score_regions(cfg, trace.selected);
    trace.total_cv_runs = 1;
    double best = trace.seed_accuracy;

    while (!remaining.empty()) {
        if (max_regions > 0 && trace.selected.size() >= max_regions) break;

        SelectionStep step;
        step.candidate_scores.resize(remaining.size());
        parallel_for(remaining.size(), [&](std::size_t i) {
            std::vector<int> candidate = trace.selected;
            candidate.push_back(remaining[i]);
            step.candidate_scores[i] = {remaining[i], score_regions(cfg, candidate)};
        });
        trace.total_cv_runs += remaining.size();

        // argmax with ties toward the lower region id; candidates are kept
        // in ascending id order
        step.chosen_region = step.candidate_scores[0].first;
        step.best_accuracy = step.candidate_scores[0].second;
        for (const auto& [id, acc] : step.candidate_scores) {
            if (acc > step.best_accuracy) {
                step.best_accuracy = acc;
                step.chosen_region = id;
            }
        }

        step.accepted = step.best_accuracy > best + epsilon;
        int chosen = step.chosen_region;
        bool accepted = step.accepted;
        trace.steps.push_back(std::move(step));
        if (!accepted) break;

        best = trace.steps.back().best_accuracy;
        trace.selected.push_back(chosen);
        remaining.erase(std::remove(remaining.begin(), remaining.end(), chosen),
                        remaining.end());
    }
    return trace;
}

nlohmann::json selection_trace_json(const SelectionTrace& trace, const FeatureLayout& layout) {
    nlohmann::json j;
    j["seed_region"] = trace.seed_region;
    j["seed_region_name"] = layout.region_name(trace.seed_region);
    j["seed_accuracy"] = trace.seed_accuracy;
    j["total_cv_runs"] = trace.total_cv_runs;
    j["steps"] = nlohmann::json::array();
    for (const auto& s : trace.steps) {
        nlohmann::json js;
        js["accepted"] = s.accepted;
        js["chosen_region"] = s.chosen_region;
        js["chosen_region_name"] = layout.region_name(s.chosen_region);
        js["best_accuracy"] = s.best_accuracy;
        js["candidates"] = nlohmann::json::array();
        for (const auto& [id, acc] : s.candidate_scores)
            js["candidates"].push_back(
                {{"region", id}, {"name", layout.region_name(id)}, {"accuracy", acc}});
        j["steps"].push_back(std::move(js));
    }
    j["selected"] = trace.selected;
    std::vector<std::string> names;
    for (int id : trace.selected) names.push_back(layout.region_name(id));
    j["selected_names"] = names;
    return j;
}

} // namespace rfer
