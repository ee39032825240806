// rng.hpp
// Seeded random source with stable per-trial seed derivation.

#pragma once

#include <cstdint>
#include <random>

namespace crsp {

// SplitMix64 finalizer, used as a stable 64-bit mixing function.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Seed for one trial, derived from the master seed and the trial index.
// The mapping is fixed: reruns with the same master seed reproduce every
// trial exactly, and trials can be generated in any order.
constexpr std::uint64_t trial_seed(std::uint64_t master_seed,
                                   std::uint64_t trial_index) noexcept {
    return mix64(master_seed ^ mix64(trial_index));
}

// Deterministic uniform source. One instance per trial; never shared.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : gen_(seed) {}

    static RandomSource for_trial(std::uint64_t master_seed,
                                  std::uint64_t trial_index) {
        return RandomSource(trial_seed(master_seed, trial_index));
    }

    // Uniform double in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 gen_;
};

}  // namespace crsp
