#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "etuk/metric.hpp"

namespace etuk {

// Per-label constants of the bound
//   |psi(t,p,q) - psi(t',p',q')| <= T(q)|t - t'| + Q(q)|p - p'| + P(q)|q - q'|
// evaluated at q = q_hat[j] and scaled like label_utility (1/m for macro
// families). Only T and P enter the approximation bound, so Q is not kept.
struct LipschitzProfile {
    std::vector<double> t_const;
    std::vector<double> p_const;
};

// Supported: macro-recall, macro-F-beta, instance precision, hamming,
// weighted, and mixtures of these. Macro-precision and coverage have no such
// constants; they and q_hat[j] == 0 for the q-dependent families raise
// CapabilityError.
//
// Macro-F-beta, psi = (1+b^2) t / (b^2 q + p) with D = b^2 q + p >= b^2 q:
//   |t/D - t'/D'| <= |t - t'| / D + (t'/D') |D - D'| / D, and t'/D' <= 1/(1+b^2)
// because t' <= min(p', q'). Hence T = (1+b^2)/(b^2 q) and the q-term
// (1+b^2) * b^2 / ((1+b^2) b^2 q) = 1/q, i.e. P = 1/q (Q = 1/(b^2 q)).
LipschitzProfile lipschitz_profile(const MetricSpec& metric, std::span<const double> q_hat);

// (1 / (2 sqrt(n))) * sum_j (T_j + P_j): bound on the gap between the exact
// expected utility and its semi-empirical approximation.
double approximation_bound(const LipschitzProfile& profile, std::size_t n);

}  // namespace etuk
