#pragma once

#include <cstdint>
#include <functional>
#include <list>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "rfer/features.hpp"
#include "rfer/folds.hpp"

namespace rfer {

double rbf_kernel(const double* x, const double* z, std::size_t dim, double gamma);
double rbf_kernel(const std::vector<double>& x, const std::vector<double>& z, double gamma);

struct TrainParams {
    double C = 1.0;
    double gamma = 0.5;
    double tol = 1e-3;       // KKT tolerance
    std::size_t max_passes = 0; // sweep limit; 0 means 10 * n
    std::uint64_t seed = 42;
};

// Gram values for one training set. Full matrix up to `full_threshold`
// rows, an LRU row cache beyond that.
class KernelCache {
public:
    KernelCache(const Matrix& X, double gamma, std::size_t full_threshold = 4096,
                std::size_t lru_capacity = 512);

    // Pointer to row i (n entries). In LRU mode it is valid only until the
    // next row() call.
    const double* row(std::size_t i);
    double gamma() const { return gamma_; }
    bool full() const { return full_; }
    std::size_t size() const { return n_; }

private:
    const Matrix& X_;
    double gamma_;
    std::size_t n_;
    bool full_;
    std::vector<double> gram_; // full mode
    std::size_t lru_capacity_;
    std::list<std::pair<std::size_t, std::vector<double>>> lru_rows_;
    std::unordered_map<std::size_t, decltype(lru_rows_)::iterator> lru_index_;

    void compute_row(std::size_t i, double* out) const;
};

// Soft-margin binary RBF-SVM in the kernel expansion: only support vectors
// (alpha > 1e-12) are retained.
struct BinaryModel {
    Matrix support_vectors;
    std::vector<double> alpha_y; // signed dual coefficients alpha_i * y_i
    double bias = 0.0;
    double gamma = 0.0;
    double C = 0.0;
    bool converged = true; // false when the sweep limit was hit first
};

// Raw decision value sum_i alpha_i y_i k(s_i, x) + b; the caller applies
// sign or argmax.
double decision(const BinaryModel& model, const double* x, std::size_t dim);
double decision(const BinaryModel& model, const std::vector<double>& x);

// Called after every accepted SMO pair update; diagnostics hook for
// objective tracing.
using SmoObserver = std::function<void(const std::vector<double>& alpha, double bias)>;

// Simplified SMO: sweep all indices, and for each KKT violator pick the
// second index from a seeded random permutation. Deterministic for a fixed
// seed and data order.
BinaryModel train_binary_smo(const Matrix& X, const std::vector<int>& y,
                             const TrainParams& params, KernelCache* cache = nullptr,
                             const SmoObserver& on_update = nullptr);

// Dual objective sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
double smo_dual_objective(const Matrix& X, const std::vector<int>& y,
                          const std::vector<double>& alpha, double gamma);

struct SvmModel {
    std::vector<std::string> classes;
    std::vector<BinaryModel> binaries; // one per class, in class order
};

std::vector<double> decision_values(const SvmModel& model, const double* x, std::size_t dim);
// argmax over per-class decision values; ties go to the earlier class.
int predict(const SvmModel& model, const double* x, std::size_t dim);
int predict(const SvmModel& model, const std::vector<double>& x);

// One binary model per class (class vs rest), sharing one kernel cache.
SvmModel train_multiclass_ova(const Matrix& X, const std::vector<int>& labels,
                              const std::vector<std::string>& classes,
                              const TrainParams& params);

struct GridSearchResult {
    double best_c = 0.0;
    double best_gamma = 0.0;
    double best_accuracy = 0.0;
    std::vector<double> c_grid;
    std::vector<double> gamma_grid;
    Matrix accuracy; // rows = C values, cols = gamma values
};

// libsvm-guide default grids: C = 2^-5..2^15, gamma = 2^-15..2^3, step 2^2.
std::vector<double> default_c_grid();
std::vector<double> default_gamma_grid();

// Exhaustive CV over the grid; ties resolved toward smaller C, then smaller
// gamma. Fold assignment is fixed across all cells.
GridSearchResult grid_search(const Matrix& X, const std::vector<int>& labels,
                             const std::vector<std::string>& classes,
                             const FoldAssignment& folds, const std::vector<double>& c_grid,
                             const std::vector<double>& gamma_grid, const TrainParams& base);

} // namespace rfer
