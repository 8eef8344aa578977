#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "etuk/sparse_matrix.hpp"

namespace etuk {

// Seeded generator with platform-independent derived draws (the standard
// distributions are implementation-defined, so they are avoided here).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, bound), bound > 0. Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t bound);

    // Uniform real in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    template <class T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    // k distinct labels from [0, m), sorted (Floyd's algorithm).
    std::vector<label_t> sample_distinct(std::size_t m, std::size_t k);

private:
    std::mt19937_64 engine_;
};

}  // namespace etuk
