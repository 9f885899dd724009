#include "rfer/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rfer/error.hpp"
#include "rfer/eval.hpp"
#include "rfer/util.hpp"

namespace rfer {

double rbf_kernel(const double* x, const double* z, std::size_t dim, double gamma) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        double d = x[i] - z[i];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

double rbf_kernel(const std::vector<double>& x, const std::vector<double>& z, double gamma) {
    if (x.size() != z.size())
        raise(Errc::length_mismatch, "kernel arguments have lengths " +
                                         std::to_string(x.size()) + " and " +
                                         std::to_string(z.size()));
    if (!(gamma > 0.0)) raise(Errc::invalid_argument, "gamma must be positive");
    return rbf_kernel(x.data(), z.data(), x.size(), gamma);
}

// --- kernel cache ---------------------------------------------------------

KernelCache::KernelCache(const Matrix& X, double gamma, std::size_t full_threshold,
                         std::size_t lru_capacity)
    : X_(X), gamma_(gamma), n_(X.rows), full_(X.rows <= full_threshold),
      lru_capacity_(std::max<std::size_t>(lru_capacity, 2)) {
    if (full_) {
        gram_.resize(n_ * n_);
        for (std::size_t i = 0; i < n_; ++i) {
            gram_[i * n_ + i] = 1.0;
            for (std::size_t j = i + 1; j < n_; ++j) {
                double k = rbf_kernel(X_.row(i), X_.row(j), X_.cols, gamma_);
                gram_[i * n_ + j] = k;
                gram_[j * n_ + i] = k;
            }
        }
    }
}

void KernelCache::compute_row(std::size_t i, double* out) const {
    for (std::size_t j = 0; j < n_; ++j)
        out[j] = rbf_kernel(X_.row(i), X_.row(j), X_.cols, gamma_);
}

const double* KernelCache::row(std::size_t i) {
    if (full_) return gram_.data() + i * n_;
    auto it = lru_index_.find(i);
    if (it != lru_index_.end()) {
        lru_rows_.splice(lru_rows_.begin(), lru_rows_, it->second);
        return lru_rows_.front().second.data();
    }
    if (lru_rows_.size() >= lru_capacity_) {
        lru_index_.erase(lru_rows_.back().first);
        lru_rows_.pop_back();
    }
    lru_rows_.emplace_front(i, std::vector<double>(n_));
    compute_row(i, lru_rows_.front().second.data());
    lru_index_[i] = lru_rows_.begin();
    return lru_rows_.front().second.data();
}

// --- binary SMO ------------------------------------------------------------

double decision(const BinaryModel& model, const double* x, std::size_t dim) {
    if (dim != model.support_vectors.cols)
        raise(Errc::length_mismatch, "input has " + std::to_string(dim) +
                                         " dims, model expects " +
                                         std::to_string(model.support_vectors.cols));
    double sum = model.bias;
    for (std::size_t i = 0; i < model.support_vectors.rows; ++i)
        sum += model.alpha_y[i] * rbf_kernel(model.support_vectors.row(i), x, dim, model.gamma);
    return sum;
}

double decision(const BinaryModel& model, const std::vector<double>& x) {
    return decision(model, x.data(), x.size());
}

namespace {

struct SmoState {
    const Matrix& X;
    const std::vector<int>& y;
    KernelCache& cache;
    double C;
    double tol;
    std::vector<double> alpha;
    std::vector<double> f; // current decision values, bias included
    double b = 0.0;
    const SmoObserver& observer;

    bool violates_kkt(std::size_t i) const {
        double r = y[i] * f[i] - 1.0;
        return (r < -tol && alpha[i] < C) || (r > tol && alpha[i] > 0.0);
    }

    // Analytic two-variable step (Platt). Returns false when the pair gives
    // no usable progress.
    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        double a1 = alpha[i1], a2 = alpha[i2];
        double y1 = y[i1], y2 = y[i2];
        double E1 = f[i1] - y1, E2 = f[i2] - y2;
        double s = y1 * y2;

        double L, H;
        if (y1 != y2) {
            L = std::max(0.0, a2 - a1);
            H = std::min(C, C + a2 - a1);
        } else {
            L = std::max(0.0, a1 + a2 - C);
            H = std::min(C, a1 + a2);
        }
        if (L >= H) return false;

        const double* row1 = cache.row(i1);
        double k11 = row1[i1], k12 = row1[i2];
        double k22 = cache.row(i2)[i2];
        double eta = k11 + k22 - 2.0 * k12;

        double a2_new;
        if (eta > 0.0) {
            a2_new = a2 + y2 * (E1 - E2) / eta;
            a2_new = std::clamp(a2_new, L, H);
        } else {
            // flat direction: evaluate the objective at both clip ends
            double g1 = y1 * (E1 - b) - a1 * k11 - s * a2 * k12;
            double g2 = y2 * (E2 - b) - s * a1 * k12 - a2 * k22;
            double L1 = a1 + s * (a2 - L);
            double H1 = a1 + s * (a2 - H);
            double psiL =
                L1 * g1 + L * g2 + 0.5 * L1 * L1 * k11 + 0.5 * L * L * k22 + s * L * L1 * k12;
            double psiH =
                H1 * g1 + H * g2 + 0.5 * H1 * H1 * k11 + 0.5 * H * H * k22 + s * H * H1 * k12;
            const double eps = 1e-12;
            if (psiL < psiH - eps)
                a2_new = L;
            else if (psiL > psiH + eps)
                a2_new = H;
            else
                return false;
        }
        if (std::abs(a2_new - a2) < 1e-10 * (a2_new + a2 + 1e-10)) return false;

        double a1_new = a1 + s * (a2 - a2_new);
        // clip overshoot while preserving the equality constraint exactly
        if (a1_new < 0.0) {
            a2_new += s * a1_new;
            a1_new = 0.0;
        } else if (a1_new > C) {
            a2_new += s * (a1_new - C);
            a1_new = C;
        }

        double d1 = a1_new - a1, d2 = a2_new - a2;
        double b1 = b - E1 - y1 * d1 * k11 - y2 * d2 * k12;
        double b2 = b - E2 - y1 * d1 * k12 - y2 * d2 * k22;
        double b_new;
        if (a1_new > 0.0 && a1_new < C)
            b_new = b1;
        else if (a2_new > 0.0 && a2_new < C)
            b_new = b2;
        else
            b_new = 0.5 * (b1 + b2);
        double db = b_new - b;

        alpha[i1] = a1_new;
        alpha[i2] = a2_new;
        b = b_new;

        // refresh decision values; two passes keep cache row pointers valid
        std::size_t n = f.size();
        double c1 = y1 * d1;
        const double* r1 = cache.row(i1);
        for (std::size_t k = 0; k < n; ++k) f[k] += c1 * r1[k];
        double c2 = y2 * d2;
        const double* r2 = cache.row(i2);
        for (std::size_t k = 0; k < n; ++k) f[k] += c2 * r2[k];
        for (std::size_t k = 0; k < n; ++k) f[k] += db;

        if (observer) observer(alpha, b);
        return true;
    }
};

} // namespace

BinaryModel train_binary_smo(const Matrix& X, const std::vector<int>& y,
                             const TrainParams& params, KernelCache* cache,
                             const SmoObserver& on_update) {
    std::size_t n = X.rows;
    if (n < 2 || y.size() != n)
        raise(Errc::invalid_argument, "need at least 2 labeled samples, got " +
                                          std::to_string(n) + " rows and " +
                                          std::to_string(y.size()) + " labels");
    bool has_pos = false, has_neg = false;
    for (int v : y) {
        if (v == 1) has_pos = true;
        else if (v == -1) has_neg = true;
        else raise(Errc::invalid_argument, "labels must be +1 or -1");
    }
    if (!has_pos || !has_neg)
        raise(Errc::single_class_input, "training data contains a single class");
    for (double v : X.data)
        if (!std::isfinite(v)) raise(Errc::non_finite_feature, "training matrix has a non-finite value");
    if (!(params.C > 0.0) || !(params.gamma > 0.0) || !(params.tol > 0.0))
        raise(Errc::invalid_argument, "C, gamma and tol must be positive");

    std::unique_ptr<KernelCache> owned;
    if (!cache) {
        owned = std::make_unique<KernelCache>(X, params.gamma);
        cache = owned.get();
    }

    SmoState st{X, y, *cache, params.C, params.tol, std::vector<double>(n, 0.0),
                std::vector<double>(n, 0.0), 0.0, on_update};

    std::mt19937_64 rng(params.seed);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    std::size_t max_passes = params.max_passes ? params.max_passes : 10 * n;
    bool converged = false;
    for (std::size_t sweep = 0; sweep < max_passes; ++sweep) {
        seeded_shuffle(perm, rng);
        std::size_t changed = 0, violators = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!st.violates_kkt(i)) continue;
            ++violators;
            for (std::size_t j : perm) {
                if (j == i) continue;
                if (st.take_step(i, j)) {
                    ++changed;
                    break;
                }
            }
        }
        if (violators == 0) {
            converged = true;
            break;
        }
        if (changed == 0) break; // violators remain but no pair makes progress
    }

    BinaryModel model;
    model.gamma = params.gamma;
    model.C = params.C;
    model.bias = st.b;
    model.converged = converged;
    std::vector<std::size_t> sv;
    for (std::size_t i = 0; i < n; ++i)
        if (st.alpha[i] > 1e-12) sv.push_back(i);
    model.support_vectors = Matrix(sv.size(), X.cols);
    model.alpha_y.resize(sv.size());
    for (std::size_t k = 0; k < sv.size(); ++k) {
        std::copy(X.row(sv[k]), X.row(sv[k]) + X.cols, model.support_vectors.row(k));
        model.alpha_y[k] = st.alpha[sv[k]] * y[sv[k]];
    }
    return model;
}

double smo_dual_objective(const Matrix& X, const std::vector<int>& y,
                          const std::vector<double>& alpha, double gamma) {
    std::size_t n = X.rows;
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) obj += alpha[i];
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (alpha[j] == 0.0) continue;
            obj -= 0.5 * alpha[i] * alpha[j] * y[i] * y[j] *
                   rbf_kernel(X.row(i), X.row(j), X.cols, gamma);
        }
    }
    return obj;
}

// --- one-vs-all ------------------------------------------------------------

std::vector<double> decision_values(const SvmModel& model, const double* x, std::size_t dim) {
    std::vector<double> vals;
    vals.reserve(model.binaries.size());
    for (const auto& bm : model.binaries) vals.push_back(decision(bm, x, dim));
    return vals;
}

int predict(const SvmModel& model, const double* x, std::size_t dim) {
    auto vals = decision_values(model, x, dim);
    std::size_t best = 0;
    for (std::size_t k = 1; k < vals.size(); ++k)
        if (vals[k] > vals[best]) best = k;
    return static_cast<int>(best);
}

int predict(const SvmModel& model, const std::vector<double>& x) {
    return predict(model, x.data(), x.size());
}

SvmModel train_multiclass_ova(const Matrix& X, const std::vector<int>& labels,
                              const std::vector<std::string>& classes,
                              const TrainParams& params) {
    if (classes.size() < 2)
        raise(Errc::single_class_input, "one-vs-all needs at least 2 classes");
    if (labels.size() != X.rows)
        raise(Errc::invalid_argument, "label count does not match sample count");

    KernelCache cache(X, params.gamma);
    SvmModel model;
    model.classes = classes;
    model.binaries.resize(classes.size());

    auto train_one = [&](std::size_t k, KernelCache* shared) {
        std::vector<int> y(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i)
            y[i] = labels[i] == static_cast<int>(k) ? 1 : -1;
        TrainParams p = params;
        p.seed = mix_seed(params.seed, k);
        model.binaries[k] = train_binary_smo(X, y, p, shared);
    };

    if (cache.full()) {
        // Gram matrix is read-only once built; per-class training can share it
        parallel_for(classes.size(), [&](std::size_t k) { train_one(k, &cache); });
    } else {
        for (std::size_t k = 0; k < classes.size(); ++k) train_one(k, &cache);
    }
    return model;
}

// --- grid search -------------------------------------------------------------

std::vector<double> default_c_grid() {
    std::vector<double> g;
    for (int e = -5; e <= 15; e += 2) g.push_back(std::ldexp(1.0, e));
    return g;
}

std::vector<double> default_gamma_grid() {
    std::vector<double> g;
    for (int e = -15; e <= 3; e += 2) g.push_back(std::ldexp(1.0, e));
    return g;
}

GridSearchResult grid_search(const Matrix& X, const std::vector<int>& labels,
                             const std::vector<std::string>& classes,
                             const FoldAssignment& folds, const std::vector<double>& c_grid,
                             const std::vector<double>& gamma_grid, const TrainParams& base) {
    if (c_grid.empty() || gamma_grid.empty())
        raise(Errc::invalid_argument, "grids must be nonempty");

    GridSearchResult res;
    res.c_grid = c_grid;
    res.gamma_grid = gamma_grid;
    std::sort(res.c_grid.begin(), res.c_grid.end());
    std::sort(res.gamma_grid.begin(), res.gamma_grid.end());
    res.accuracy = Matrix(res.c_grid.size(), res.gamma_grid.size());

    std::size_t cells = res.c_grid.size() * res.gamma_grid.size();
    parallel_for(cells, [&](std::size_t cell) {
        std::size_t ci = cell / res.gamma_grid.size();
        std::size_t gi = cell % res.gamma_grid.size();
        TrainParams p = base;
        p.C = res.c_grid[ci];
        p.gamma = res.gamma_grid[gi];
        CVResult cv = cross_validate(X, labels, classes, folds, p);
        res.accuracy.at(ci, gi) = cv.mean_accuracy;
    });

    res.best_accuracy = -1.0;
    for (std::size_t ci = 0; ci < res.c_grid.size(); ++ci)
        for (std::size_t gi = 0; gi < res.gamma_grid.size(); ++gi)
            if (res.accuracy.at(ci, gi) > res.best_accuracy) {
                res.best_accuracy = res.accuracy.at(ci, gi);
                res.best_c = res.c_grid[ci];
                res.best_gamma = res.gamma_grid[gi];
            }
    return res;
}

} // namespace rfer
