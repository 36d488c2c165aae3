#include "skyfeel/convergence.hpp"

#include <algorithm>
#include <cmath>

namespace skyfeel {

void LearningConstants::validate(std::size_t k_uavs) const {
    if (!(strong_convexity_mu > 0.0) || strong_convexity_mu > smoothness_l)
        throw std::domain_error("LearningConstants: need 0 < mu <= L");
    if (!(eta > 0.0 && eta < 1.0 / (4.0 * smoothness_l)))
        throw InfeasibleBound("LearningConstants: step size must satisfy 0 < eta < 1/(4L)");
    if (sigma2.size() != k_uavs || lambda2.size() != k_uavs)
        throw std::invalid_argument("LearningConstants: sigma2/lambda2 must have one entry per UAV");
    for (double s : sigma2)
        if (s < 0.0) throw std::domain_error("LearningConstants: sigma2 must be >= 0");
    for (double l : lambda2)
        if (l < 0.0) throw std::domain_error("LearningConstants: lambda2 must be >= 0");
    if (!(initial_gap >= 0.0)) throw std::domain_error("LearningConstants: initial gap must be >= 0");
    if (!(epsilon > 0.0)) throw std::domain_error("LearningConstants: epsilon must be > 0");
}

double contraction_factor(const LearningConstants& c) {
    if (!(c.eta > 0.0 && c.eta < 1.0 / (4.0 * c.smoothness_l)))
        throw InfeasibleBound("contraction_factor: eta must satisfy 0 < eta < 1/(4L)");
    return 1.0 - c.strong_convexity_mu * c.eta * (1.0 - 4.0 * c.smoothness_l * c.eta);
}

BoundState bound_state(const LearningConstants& c, double g) {
    if (g < 0.0) throw std::domain_error("bound_state: G must be >= 0");
    BoundState s;
    s.contraction_a = contraction_factor(c);
    s.noise_g = g;
    s.bias_floor = g / (1.0 - s.contraction_a);
    return s;
}

namespace {

void check_delta(const std::vector<double>& delta, std::size_t k) {
    if (delta.size() != k)
        throw std::invalid_argument("G bound: delta must have one entry per UAV");
    for (double d : delta)
        if (!(d > 0.0)) throw std::domain_error("G bound: delta must be positive");
}

}  // namespace

double g_uniform_bound(const LearningConstants& c, const std::vector<double>& delta,
                       double q, double q_min) {
    const std::size_t k_uavs = delta.size();
    c.validate(k_uavs);
    check_delta(delta, k_uavs);
    const auto forms = uniform_closed_forms(k_uavs, q, q_min);
    const double k = static_cast<double>(k_uavs);

    double sum_noise = 0.0, sum_noise2 = 0.0, sum_het = 0.0;
    for (std::size_t i = 0; i < k_uavs; ++i) {
        sum_noise += c.sigma2[i] / delta[i] + c.lambda2[i];
        sum_noise2 += c.sigma2[i] / delta[i] + 2.0 * c.lambda2[i];
        sum_het += c.lambda2[i];
    }
    const double l = c.smoothness_l, eta = c.eta;
    return eta / k * sum_noise +
           2.0 * l * eta * eta / (k * k * forms.chi * q) * sum_noise2 +
           4.0 * l * eta * eta / (k * std::pow(q, k - 2.0)) * sum_het;
}

double g_general(const LearningConstants& c, const std::vector<double>& delta,
                 const SensingProfile& profile) {
    const std::size_t k_uavs = profile.q.size();
    c.validate(k_uavs);
    check_delta(delta, k_uavs);

    const auto alpha = enumerate_alpha(profile);
    const auto beta = enumerate_beta(profile);
    const double k = static_cast<double>(k_uavs);

    double q_bar = 0.0, q_min = 1.0;
    for (double qk : profile.q) {
        q_bar += qk;
        q_min = std::min(q_min, qk);
    }
    q_bar /= k;
    if (!(q_min > 0.0))
        throw std::domain_error("g_general: every q must be positive");
    // exact non-uniform gamma is not available; use the conservative bound
    const double gamma = 2.0 / (k * std::pow(q_min, k));

    double sum_alpha2 = 0.0, sum_noise = 0.0;
    for (std::size_t i = 0; i < k_uavs; ++i) {
        sum_alpha2 += alpha[i] * alpha[i];
        sum_noise += c.sigma2[i] / delta[i] + c.lambda2[i];
    }

    const double l = c.smoothness_l, eta = c.eta;
    double g = eta * sum_alpha2 * sum_noise;
    for (std::size_t i = 0; i < k_uavs; ++i) {
        g += l * eta * eta * beta[i] * (c.sigma2[i] / delta[i] + 2.0 * c.lambda2[i]);
        const double spread = (profile.q[i] - q_bar) * (profile.q[i] - q_bar) + q_bar * q_bar;
        g += 2.0 * l * eta * eta * gamma * spread * c.lambda2[i];
    }
    return g;
}

double phi(std::size_t n, double contraction_a, double g, double lambda0) {
    if (!(contraction_a > 0.0 && contraction_a < 1.0))
        throw std::domain_error("phi: contraction factor must be in (0, 1)");
    const double a_n = std::pow(contraction_a, static_cast<double>(n));
    return g * (1.0 - a_n) / (1.0 - contraction_a) + a_n * lambda0;
}

std::size_t min_rounds(double epsilon, double contraction_a, double lambda0,
                       double g_max) {
    if (!(contraction_a > 0.0 && contraction_a < 1.0))
        throw std::domain_error("min_rounds: contraction factor must be in (0, 1)");
    const double one_minus_a = 1.0 - contraction_a;
    if (!(lambda0 * one_minus_a - g_max > 0.0))
        throw InfeasibleBound("min_rounds: initial gap too small, lambda(1-A) must exceed G_max");
    if (!(epsilon * one_minus_a - g_max > 0.0))
        throw InfeasibleBound("min_rounds: epsilon at or below the bias floor G_max/(1-A)");
    if (epsilon >= lambda0) return 0;
    const double ratio = (epsilon * one_minus_a - g_max) / (lambda0 * one_minus_a - g_max);
    const double n = std::log(ratio) / std::log(contraction_a);
    return static_cast<std::size_t>(std::max(0.0, std::ceil(n)));
}

}  // namespace skyfeel
