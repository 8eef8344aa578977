#include "etuk/select_top_k.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "etuk/errors.hpp"

namespace etuk {
namespace {

bool better(const GainEntry& a, const GainEntry& b) {
    if (a.gain != b.gain) return a.gain > b.gain;
    return a.label < b.label;
}

}  // namespace

PredictionRow select_top_k(std::span<const double> gains, std::size_t k) {
    if (k > gains.size())
        throw ConfigError("cannot select " + std::to_string(k) + " of " + std::to_string(gains.size()) + " labels");
    std::vector<label_t> order(gains.size());
    std::iota(order.begin(), order.end(), label_t{0});
    auto cmp = [&](label_t a, label_t b) { return better({a, gains[a]}, {b, gains[b]}); };
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), cmp);
    order.resize(k);
    return PredictionRow(std::move(order));
}

PredictionRow select_top_k(std::span<const GainEntry> gains, std::size_t k, std::size_t m) {
    if (k > m) throw ConfigError("cannot select " + std::to_string(k) + " of " + std::to_string(m) + " labels");
    std::vector<label_t> out;
    out.reserve(k);
    if (gains.size() >= k) {
        std::vector<GainEntry> tmp(gains.begin(), gains.end());
        std::nth_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(k), tmp.end(), better);
        for (std::size_t e = 0; e < k; ++e) out.push_back(tmp[e].label);
        return PredictionRow(std::move(out));
    }
    for (const auto& g : gains) out.push_back(g.label);
    std::vector<label_t> taken = out;
    std::sort(taken.begin(), taken.end());
    for (label_t j = 0; out.size() < k; ++j)
        if (!std::binary_search(taken.begin(), taken.end(), j)) out.push_back(j);
    return PredictionRow(std::move(out));
}

}  // namespace etuk
