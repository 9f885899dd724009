#pragma once

#include <cstdint>
#include <vector>

namespace rfer {

// Stratified fold assignment: per class, samples are shuffled by seed and
// dealt round-robin, so per-class fold sizes differ by at most one.
struct FoldAssignment {
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<int> fold_of; // per-sample fold index in [0, k)

    std::vector<std::size_t> fold_sizes() const;
};

FoldAssignment stratified_kfold(const std::vector<int>& labels, int k, std::uint64_t seed);

} // namespace rfer
