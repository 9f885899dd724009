#include "rfer/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "rfer/error.hpp"
#include "rfer/util.hpp"

namespace rfer {

// --- folds -------------------------------------------------------------------

std::vector<std::size_t> FoldAssignment::fold_sizes() const {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    for (int f : fold_of) sizes[static_cast<std::size_t>(f)]++;
    return sizes;
}

FoldAssignment stratified_kfold(const std::vector<int>& labels, int k, std::uint64_t seed) {
    if (k < 2) raise(Errc::invalid_argument, "k must be at least 2");
    if (labels.empty()) raise(Errc::invalid_argument, "no samples to assign");

    int nclasses = *std::max_element(labels.begin(), labels.end()) + 1;
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(nclasses));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0) raise(Errc::invalid_argument, "negative class index");
        members[static_cast<std::size_t>(labels[i])].push_back(i);
    }

    FoldAssignment fa;
    fa.k = k;
    fa.seed = seed;
    fa.fold_of.assign(labels.size(), -1);
    for (int c = 0; c < nclasses; ++c) {
        auto& idx = members[static_cast<std::size_t>(c)];
        if (idx.size() < static_cast<std::size_t>(k))
            raise(Errc::class_too_small, "class " + std::to_string(c) + " has " +
                                             std::to_string(idx.size()) +
                                             " samples, needs at least " + std::to_string(k));
        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
        seeded_shuffle(idx, rng);
        for (std::size_t j = 0; j < idx.size(); ++j)
            fa.fold_of[idx[j]] = static_cast<int>(j % static_cast<std::size_t>(k));
    }
    return fa;
}

// --- confusion matrix ----------------------------------------------------------

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> cls) : classes(std::move(cls)) {
    counts.assign(classes.size(), std::vector<std::size_t>(classes.size(), 0));
}

std::size_t ConfusionMatrix::total() const {
    std::size_t t = 0;
    for (const auto& row : counts) t += std::accumulate(row.begin(), row.end(), std::size_t{0});
    return t;
}

std::size_t ConfusionMatrix::trace() const {
    std::size_t t = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
    return t;
}

double ConfusionMatrix::accuracy() const {
    std::size_t t = total();
    return t == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(t);
}

std::vector<std::size_t> ConfusionMatrix::row_sums() const {
    std::vector<std::size_t> sums;
    sums.reserve(counts.size());
    for (const auto& row : counts)
        sums.push_back(std::accumulate(row.begin(), row.end(), std::size_t{0}));
    return sums;
}

// --- cross validation ------------------------------------------------------------

CVResult cross_validate(const Matrix& X, const std::vector<int>& labels,
                        const std::vector<std::string>& classes, const FoldAssignment& folds,
                        const TrainParams& params) {
    std::size_t n = X.rows;
    if (labels.size() != n || folds.fold_of.size() != n)
        raise(Errc::invalid_argument, "labels/folds do not match the sample count");
    if (folds.k < 2) raise(Errc::invalid_argument, "need at least 2 folds");

    CVResult res;
    res.confusion = ConfusionMatrix(classes);
    res.predictions.assign(n, -1);
    res.per_fold_accuracy.assign(static_cast<std::size_t>(folds.k), 0.0);

    parallel_for(static_cast<std::size_t>(folds.k), [&](std::size_t f) {
        std::vector<std::size_t> train_idx, test_idx;
        for (std::size_t i = 0; i < n; ++i)
            (folds.fold_of[i] == static_cast<int>(f) ? test_idx : train_idx).push_back(i);
        if (train_idx.empty() || test_idx.empty())
            raise(Errc::invalid_argument, "fold " + std::to_string(f) + " is empty");

        // classes actually present in this training split
        std::set<int> present;
        for (std::size_t i : train_idx) present.insert(labels[i]);

        if (present.size() == 1) {
            // degenerate split: constant predictor
            int only = *present.begin();
            for (std::size_t i : test_idx) res.predictions[i] = only;
        } else {
            Matrix Xtr(train_idx.size(), X.cols);
            std::vector<int> ytr(train_idx.size());
            std::vector<int> local_of_global(classes.size(), -1);
            std::vector<std::string> local_classes;
            std::vector<int> global_of_local;
            for (int g : present) {
                local_of_global[static_cast<std::size_t>(g)] =
                    static_cast<int>(local_classes.size());
                local_classes.push_back(classes[static_cast<std::size_t>(g)]);
                global_of_local.push_back(g);
            }

            for (std::size_t r = 0; r < train_idx.size(); ++r) {
                std::copy(X.row(train_idx[r]), X.row(train_idx[r]) + X.cols, Xtr.row(r));
                ytr[r] = local_of_global[static_cast<std::size_t>(labels[train_idx[r]])];
            }

            ScalingStats stats = fit_scaling(Xtr);
            Matrix Xs = apply_scaling(stats, Xtr);
            TrainParams p = params;
            p.seed = mix_seed(params.seed, 1000 + f);
            SvmModel model = train_multiclass_ova(Xs, ytr, local_classes, p);

            std::vector<double> x(X.cols);
            for (std::size_t i : test_idx) {
                std::copy(X.row(i), X.row(i) + X.cols, x.begin());
                apply_scaling(stats, x.data(), x.size());
                res.predictions[i] = global_of_local[static_cast<std::size_t>(predict(model, x))];
            }
        }

        std::size_t hits = 0;
        for (std::size_t i : test_idx) hits += res.predictions[i] == labels[i];
        res.per_fold_accuracy[f] =
            static_cast<double>(hits) / static_cast<double>(test_idx.size());
    });

    for (std::size_t i = 0; i < n; ++i) res.confusion.add(labels[i], res.predictions[i]);
    res.mean_accuracy =
        std::accumulate(res.per_fold_accuracy.begin(), res.per_fold_accuracy.end(), 0.0) /
        static_cast<double>(folds.k);
    res.weighted_accuracy = res.confusion.accuracy();
    return res;
}

// --- reporting ---------------------------------------------------------------------

std::string report_text(const ConfusionMatrix& matrix) {
    std::string out;
    char buf[64];
    std::size_t w = 8;
    for (const auto& c : matrix.classes) w = std::max(w, c.size() + 2);

    auto pad = [&](const std::string& s) {
        std::string p = s;
        while (p.size() < w) p.insert(p.begin(), ' ');
        return p;
    };

    out += pad("");
    for (const auto& c : matrix.classes) out += pad(c);
    out += "\n";
    auto sums = matrix.row_sums();
    for (std::size_t r = 0; r < matrix.classes.size(); ++r) {
        out += pad(matrix.classes[r]);
        for (std::size_t c = 0; c < matrix.classes.size(); ++c) {
            double pct = sums[r] == 0 ? 0.0
                                      : 100.0 * static_cast<double>(matrix.counts[r][c]) /
                                            static_cast<double>(sums[r]);
            std::snprintf(buf, sizeof(buf), "%.1f", pct);
            out += pad(buf);
        }
        out += "\n";
    }
    std::snprintf(buf, sizeof(buf), "%.2f%% (%zu/%zu)", 100.0 * matrix.accuracy(),
                  matrix.trace(), matrix.total());
    out += "overall accuracy: ";
    out += buf;
    out += "\n";
    return out;
}

nlohmann::json report_json(const ConfusionMatrix& matrix) {
    nlohmann::json j;
    j["class_order"] = matrix.classes;
    j["counts"] = matrix.counts;
    auto sums = matrix.row_sums();
    std::vector<double> recall;
    for (std::size_t r = 0; r < matrix.classes.size(); ++r)
        recall.push_back(sums[r] == 0 ? 0.0
                                      : static_cast<double>(matrix.counts[r][r]) /
                                            static_cast<double>(sums[r]));
    j["per_class_recall"] = recall;
    j["overall_accuracy"] = matrix.accuracy();
    return j;
}

} // namespace rfer
