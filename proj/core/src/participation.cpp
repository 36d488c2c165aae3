#include "skyfeel/participation.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace skyfeel {

namespace {

void check_profile(const SensingProfile& profile) {
    if (profile.q.empty())
        throw std::invalid_argument("participation: empty sensing profile");
    if (profile.q.size() > kMaxEnumerationUavs)
        throw std::invalid_argument("participation: enumeration capped at K = 20");
    bool any_positive = false;
    for (double qk : profile.q) {
        if (!(qk >= 0.0 && qk <= 1.0))
            throw std::domain_error("participation: q must be in [0, 1]");
        if (qk > 0.0) any_positive = true;
    }
    if (!any_positive)
        throw std::domain_error("participation: all q are zero, conditioning event impossible");
}

// Shared enumeration over all non-empty participation patterns. `inv_weight`
// maps the participant count l to the per-member weight (1/l or 1/l^2).
template <typename SubsetWeight>
std::vector<double> enumerate_weights(const SensingProfile& profile,
                                      SubsetWeight inv_weight) {
    check_profile(profile);
    const std::size_t k = profile.q.size();
    const std::uint64_t patterns = std::uint64_t{1} << k;

    double prob_empty = 1.0;
    for (double qk : profile.q) prob_empty *= 1.0 - qk;
    const double norm = 1.0 - prob_empty;

    std::vector<double> weights(k, 0.0);
    for (std::uint64_t mask = 1; mask < patterns; ++mask) {
        double p = 1.0;
        for (std::size_t i = 0; i < k; ++i)
            p *= (mask >> i) & 1 ? profile.q[i] : 1.0 - profile.q[i];
        if (p == 0.0) continue;
        const double w = p * inv_weight(std::popcount(mask)) / norm;
        for (std::size_t i = 0; i < k; ++i)
            if ((mask >> i) & 1) weights[i] += w;
    }
    return weights;
}

}  // namespace

std::vector<double> enumerate_alpha(const SensingProfile& profile) {
    return enumerate_weights(profile, [](int l) { return 1.0 / l; });
}

std::vector<double> enumerate_beta(const SensingProfile& profile) {
    return enumerate_weights(profile,
                             [](int l) { return 1.0 / (static_cast<double>(l) * l); });
}

UniformClosedForms uniform_closed_forms(std::size_t k_uavs, double q, double q_min) {
    if (k_uavs == 0) throw std::invalid_argument("uniform_closed_forms: K must be >= 1");
    if (!(q > 0.0 && q <= 1.0) || !(q_min > 0.0 && q_min <= 1.0))
        throw std::domain_error("uniform_closed_forms: q, q_min must be in (0, 1]");
    const double k = static_cast<double>(k_uavs);
    UniformClosedForms f;
    f.chi = 1.0 - std::pow(1.0 - q_min, k);
    f.alpha = 1.0 / k;
    f.beta_bound = 2.0 / (k * k * f.chi * q);
    f.gamma_bound = 2.0 / (k * std::pow(q, k));
    return f;
}

double m22_coefficient_uniform(std::size_t k_uavs, double q) {
    if (k_uavs < 2)
        throw std::invalid_argument("m22_coefficient_uniform: needs K >= 2");
    if (!(q > 0.0 && q <= 1.0))
        throw std::domain_error("m22_coefficient_uniform: q must be in (0, 1]");
    const double k = static_cast<double>(k_uavs);
    double binom = k * (k - 1.0) / 2.0;  // C(K, 2), then updated in the loop
    double numer = 0.0, denom = 0.0;
    for (std::size_t l = 2; l <= k_uavs; ++l) {
        const double tail = std::pow(1.0 - q, k - static_cast<double>(l));
        numer += binom * tail;
        denom += binom * tail * std::pow(q, static_cast<double>(l));
        binom *= (k - static_cast<double>(l)) / (static_cast<double>(l) + 1.0);
    }
    return (2.0 / k) * numer / denom;
}

}  // namespace skyfeel
