#pragma once

#include <cstddef>
#include <vector>

namespace skyfeel {

/// Per-UAV successful-sensing probabilities for one round.
struct SensingProfile {
    std::vector<double> q;

    std::size_t size() const { return q.size(); }
};

/// Maximum K for exact 2^K pattern enumeration.
inline constexpr std::size_t kMaxEnumerationUavs = 20;

/// Exact aggregation weights alpha_k: conditioned on at least one UAV
/// participating, alpha_k sums the pattern probabilities of every subset
/// containing k weighted by 1/|subset|. The weights always sum to 1.
std::vector<double> enumerate_alpha(const SensingProfile& profile);

/// Exact second-moment weights beta_k: as alpha_k but weighted by
/// 1/|subset|^2.
std::vector<double> enumerate_beta(const SensingProfile& profile);

/// Closed forms available when every UAV shares the sensing probability q.
/// chi = 1 - (1 - q_min)^K enters the beta bound.
struct UniformClosedForms {
    double alpha = 0.0;        // 1/K
    double beta_bound = 0.0;   // 2 / (K^2 * chi * q)
    double gamma_bound = 0.0;  // 2 / (K * q^K)
    double chi = 0.0;
};

UniformClosedForms uniform_closed_forms(std::size_t k_uavs, double q, double q_min);

/// Exact uniform-q coefficient of the cross-term (the line before the
/// q^l >= q^K relaxation): (2/K) * sum_{l>=2} C(K,l)(1-q)^{K-l} /
/// sum_{l>=2} C(K,l)(1-q)^{K-l} q^l. Never exceeds the gamma bound; equal
/// at q = 1. Requires K >= 2.
double m22_coefficient_uniform(std::size_t k_uavs, double q);

}  // namespace skyfeel
