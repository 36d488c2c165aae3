#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "skyfeel/participation.hpp"

namespace skyfeel {

/// Constants of the learning problem (Assumptions 1-4). eta must satisfy
/// 0 < eta < 1/(4L) for the contraction to hold.
struct LearningConstants {
    double eta = 0.1;                 // step size
    double smoothness_l = 1.0;        // L
    double strong_convexity_mu = 0.5; // mu
    std::vector<double> sigma2;       // per-UAV gradient-noise variance sigma_k^2
    std::vector<double> lambda2;      // per-UAV heterogeneity Lambda_k^2
    double initial_gap = 1.0;         // lambda = E[F(w0) - F(w*)]
    double epsilon = 0.05;            // target optimality gap

    void validate(std::size_t k_uavs) const;
};

/// Derived quantities of the optimality-gap recursion
/// gap(n+1) <= A * gap(n) + G.
struct BoundState {
    double contraction_a = 0.0;  // A = 1 - mu*eta*(1 - 4*L*eta)
    double noise_g = 0.0;        // per-round additive term G
    double bias_floor = 0.0;     // G / (1 - A)
};

/// Thrown when a gap target is unreachable (epsilon below the bias floor,
/// or the learning-rate constraint is violated).
class InfeasibleBound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A = 1 - mu*eta*(1 - 4*L*eta); in (0,1) under the step-size constraint.
double contraction_factor(const LearningConstants& c);

/// Packages the recursion state for a given per-round term G.
BoundState bound_state(const LearningConstants& c, double g);

/// Closed-form upper bound on G for a uniform sensing probability q:
///   (eta/K) sum(sigma^2/delta + Lambda^2)
/// + (2 L eta^2 / (K^2 chi q)) sum(sigma^2/delta + 2 Lambda^2)
/// + (4 L eta^2 / (K q^{K-2})) sum(Lambda^2),
/// with chi = 1 - (1 - q_min)^K.
double g_uniform_bound(const LearningConstants& c, const std::vector<double>& delta,
                       double q, double q_min);

/// General G with exact enumerated alpha/beta weights and the cross-term
/// bound 2/(K * q_min^K) applied to the ((q_k - qbar)^2 + qbar^2) factors.
double g_general(const LearningConstants& c, const std::vector<double>& delta,
                 const SensingProfile& profile);

/// Optimality-gap bound after n rounds:
/// Phi(n) = G * (1 - A^n) / (1 - A) + A^n * lambda.
double phi(std::size_t n, double contraction_a, double g, double lambda0);

/// Smallest round count N with Phi(N) <= epsilon when G = g_max:
/// ceil(log_A((eps(1-A) - g_max) / (lambda(1-A) - g_max))).
/// Throws InfeasibleBound when epsilon lies at or below the bias floor
/// g_max/(1-A), or when lambda(1-A) <= g_max.
std::size_t min_rounds(double epsilon, double contraction_a, double lambda0,
                       double g_max);

}  // namespace skyfeel
