#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace rfer {

// Mixes a salt into a base seed so sub-tasks (per-class trainers, per-fold
// shuffles) get decorrelated but reproducible streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Fisher-Yates with an explicit draw. std::shuffle's distribution is
// implementation-defined, which would break cross-platform determinism.
template <typename T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

// Runs f(i) for i in [0, n). Independent work items only; results must be
// written to disjoint slots. Nested calls degrade to serial execution.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f,
                  unsigned max_threads = 0);

} // namespace rfer
