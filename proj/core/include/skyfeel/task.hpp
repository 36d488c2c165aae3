#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "skyfeel/rng.hpp"

namespace skyfeel {

/// Synthetic strongly convex federated task with analytically known optimum:
/// per-UAV quadratics F_k(w) = 1/2 (w - c_k)' H_k (w - c_k) with diagonal
/// Hessians, plus additive Gaussian gradient noise of total variance
/// sigma_k^2 / delta per stochastic draw. All constants of Assumptions 1-4
/// are exact by construction.
struct SyntheticTask {
    std::size_t num_uavs = 0;
    std::size_t dim = 0;
    std::vector<std::vector<double>> h_diag;   // per-UAV Hessian diagonal
    std::vector<std::vector<double>> centers;  // per-UAV optimum c_k
    std::vector<double> sigma;                 // per-UAV noise scale sigma_k
    std::vector<double> w0;                    // initial model
    bool equal_hessians = true;

    // derived constants (fill via finalize())
    std::vector<double> w_star;
    double f_star = 0.0;
    double smoothness_l = 0.0;
    double strong_convexity_mu = 0.0;
    std::vector<double> lambda2;  // ||grad F_k(w*) - grad F(w*)||^2, exact
    double initial_gap = 0.0;     // F(w0) - F(w*)

    /// Recomputes every derived constant from the primary fields.
    void finalize();

    /// Exact local gradient of F_k at w.
    void local_grad(std::size_t k, const std::vector<double>& w,
                    std::vector<double>& out) const;

    /// Stochastic gradient: local gradient plus Gaussian noise with total
    /// variance sigma_k^2 / delta (split evenly over coordinates).
    void stochastic_grad(std::size_t k, const std::vector<double>& w, double delta,
                         Rng& rng, std::vector<double>& out) const;

    double loss(const std::vector<double>& w) const;
    double gap(const std::vector<double>& w) const { return loss(w) - f_star; }
};

/// Deterministic factory: equal diagonal Hessians with spectrum in
/// [mu, l] (top two coordinates pinned at l), local optima displaced on a
/// circle in the top eigenplane so the heterogeneity constants are uniform
/// and exact, and an initial point scaled to hit `initial_gap`.
SyntheticTask make_task(std::size_t k_uavs, std::size_t dim, double heterogeneity,
                        const std::vector<double>& sigma, std::uint64_t seed,
                        double smoothness_l = 1.0, double strong_convexity_mu = 1.0,
                        double initial_gap = 1.0);

/// Empirical estimates of the assumption constants, for cross-checking the
/// analytic values of a task.
struct ConstantEstimates {
    std::vector<double> sigma2;
    std::vector<double> lambda2;
    double smoothness_l = 0.0;
    double strong_convexity_mu = 0.0;
};

ConstantEstimates estimate_constants(const SyntheticTask& task,
                                     const std::vector<double>& w_ref, double batch,
                                     std::size_t draws, std::uint64_t seed = 0);

}  // namespace skyfeel
