#include "etuk/weights.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "etuk/errors.hpp"

namespace etuk {

std::vector<double> weight_compute(const WeightScheme& scheme, std::size_t k) {
    if (k == 0) throw ConfigError("weights require k >= 1");
    for (double pr : scheme.priors)
        if (!(pr >= 0.0 && pr <= 1.0)) throw ConfigError("label priors must lie in [0, 1]");

    std::vector<double> w(scheme.priors.size(), 0.0);
    const double n_train = static_cast<double>(scheme.n_train);

    if (scheme.kind == WeightKind::propensity) {
        if (scheme.n_train < 1) throw ConfigError("propensity weights require n_train >= 1");
        const double c = (std::log(n_train) - 1.0) * std::pow(scheme.b + 1.0, scheme.a);
        for (std::size_t j = 0; j < w.size(); ++j)
            w[j] = (1.0 + c * std::pow(n_train * scheme.priors[j] + scheme.b, -scheme.a)) / static_cast<double>(k);
        return w;
    }

    const double floor = scheme.n_train > 0 ? 1.0 / n_train : 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        const double pr = std::max(scheme.priors[j], floor);
        if (pr <= 0.0) throw ConfigError("zero prior for label " + std::to_string(j) + " and no n_train to floor it");
        w[j] = scheme.kind == WeightKind::power_law ? std::pow(pr, -scheme.beta_exp) : -std::log(pr);
    }
    const double top = w.empty() ? 0.0 : *std::max_element(w.begin(), w.end());
    if (top > 0.0)
        for (double& x : w) x /= top;
    return w;
}

namespace {

double parse_param(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError("malformed weight-scheme parameter '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto c = s.find(':');
        out.push_back(s.substr(0, c));
        if (c == std::string_view::npos) break;
        s.remove_prefix(c + 1);
    }
    return out;
}

}  // namespace

WeightScheme parse_weight_scheme(std::string_view text, std::size_t n_train, std::vector<double> priors) {
    const auto parts = split(text);
    WeightScheme s;
    s.n_train = n_train;
    s.priors = std::move(priors);
    if (parts[0] == "propensity") {
        s.kind = WeightKind::propensity;
        if (parts.size() == 3) {
            s.a = parse_param(parts[1]);
            s.b = parse_param(parts[2]);
        } else if (parts.size() != 1) {
            throw ConfigError("expected 'propensity' or 'propensity:<a>:<b>'");
        }
    } else if (parts[0] == "power") {
        s.kind = WeightKind::power_law;
        if (parts.size() == 2)
            s.beta_exp = parse_param(parts[1]);
        else if (parts.size() != 1)
            throw ConfigError("expected 'power' or 'power:<beta>'");
    } else if (parts[0] == "log" && parts.size() == 1) {
        s.kind = WeightKind::log;
    } else {
        throw ConfigError("unknown weight scheme '" + std::string(text) + "'");
    }
    return s;
}

}  // namespace etuk
