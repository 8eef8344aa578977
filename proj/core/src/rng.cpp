#include "etuk/rng.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

namespace etuk {

std::uint64_t Rng::below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
}

std::vector<label_t> Rng::sample_distinct(std::size_t m, std::size_t k) {
    std::vector<label_t> out;
    out.reserve(k);
    if (2 * k >= m) {
        // Dense case: partial Fisher-Yates over all labels.
        std::vector<label_t> all(m);
        for (std::size_t j = 0; j < m; ++j) all[j] = static_cast<label_t>(j);
        for (std::size_t i = 0; i < k; ++i) {
            const auto r = i + static_cast<std::size_t>(below(m - i));
            std::swap(all[i], all[r]);
            out.push_back(all[i]);
        }
    } else {
        std::unordered_set<label_t> chosen;
        chosen.reserve(2 * k);
        for (std::size_t j = m - k; j < m; ++j) {
            const auto t = static_cast<label_t>(below(j + 1));
            const auto pick = chosen.count(t) ? static_cast<label_t>(j) : t;
            chosen.insert(pick);
            out.push_back(pick);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace etuk
