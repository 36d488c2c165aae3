#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skyfeel/airspace.hpp"
#include "skyfeel/convergence.hpp"
#include "skyfeel/latency.hpp"

namespace skyfeel {

/// Joint deployment / resource decision for one scene.
struct ResourcePlan {
    std::vector<double> delta;         // per-UAV batch size (integers in final plans)
    std::vector<double> bandwidth_hz;  // per-UAV uplink sub-channel, sums to B_c
    std::vector<Position> positions;   // per-UAV hover position
    double q_s = 0.0;                  // common successful-sensing probability
    double theta_s_deg = 0.0;          // corresponding sensing elevation angle
    double t_max_s = 0.0;              // per-round latency
    std::size_t n_rounds = 0;          // selected round count N*
    double objective_s = 0.0;          // N* * t_max
};

enum class NSweepMode {
    kExhaustive,  // every integer in [N_min, N_max]; the reference mode
    kGeometric,   // xAbout 5% grid, then refine around the best candidate
};

struct SolverSettings {
    double tol_tmax_s = 1e-6;       // tau: alternation stop rule on T_max
    double tol_root_rel = 1e-9;     // relative tolerance of all bisections
    std::size_t max_bisect_iter = 200;
    std::size_t max_alternations = 100;
    std::size_t n_max = 2000;       // largest candidate round count
    double delta_max = 256.0;       // batch-size cap (also used for G_max)
    double delta_min = 1.0;
    double delta_init = 32.0;
    NSweepMode n_sweep = NSweepMode::kExhaustive;
    std::string subproblem_order = "bdu";  // b=bandwidth, d=batch, u=position
    unsigned threads = 0;           // 0: hardware concurrency
};

/// Baseline restrictions layered on top of the alternating loop.
struct PlanLocks {
    std::optional<double> position_elevation_deg;  // pin all UAVs at this sensing angle
    bool ideal_sensing = false;                    // force q_s = 1, hover over targets
    bool equal_bandwidth = false;                  // B_k = B_c / K
    std::optional<double> fixed_delta;             // uniform pinned batch size
};

/// Raised when a plan (or a subproblem at a given N) has no solution.
/// `constraint` names the binding constraint for the machine-readable report.
class InfeasiblePlan : public std::runtime_error {
public:
    InfeasiblePlan(std::string constraint, const std::string& detail)
        : std::runtime_error(detail), constraint_(std::move(constraint)) {}
    const std::string& constraint() const { return constraint_; }

private:
    std::string constraint_;
};

struct BandwidthSolution {
    std::vector<double> bandwidth_hz;
    double t_max_s = 0.0;
};

struct BatchSolution {
    std::vector<double> delta;
    double t_max_s = 0.0;
};

struct PositionSolution {
    double q_s = 0.0;
    double theta_s_deg = 0.0;
    std::vector<Position> positions;
    double t_max_s = 0.0;
};

/// Bandwidth subproblem: minimal common latency at fixed batch sizes
/// and positions. Outer bisection on T_max, inner monotone bisection per UAV
/// inverting B -> B*log2(1 + p*h/(B*N0)). At the optimum every UAV's
/// expected latency equals T_max and the bandwidths sum to B_c.
BandwidthSolution solve_bandwidth(const std::vector<double>& delta,
                                  const std::vector<Position>& positions, double q_s,
                                  const Scene& scene, const ComputeParams& compute,
                                  const SolverSettings& settings);

/// Batch-size subproblem: minimal latency at fixed positions/bandwidth such that
/// the optimality-gap bound meets epsilon after n_rounds. The equal-latency
/// parametrisation delta_k(T) = (T - q*D0/r_k) / (T0 + q*xi/f) turns the gap
/// equation into a scalar root-find in T, solved by bisection.
BatchSolution solve_batchsize(const std::vector<Position>& positions,
                              const std::vector<double>& bandwidth_hz, double q_s,
                              std::size_t n_rounds, const LearningConstants& consts,
                              const Scene& scene, const ComputeParams& compute,
                              const SolverSettings& settings);

/// Position subproblem: minimal q_s meeting the gap-derived and theta0-derived lower bounds,
/// with closed-form placement for that q_s and the resulting latency.
PositionSolution solve_position(const std::vector<double>& delta,
                                const std::vector<double>& bandwidth_hz,
                                std::size_t n_rounds, const LearningConstants& consts,
                                const Scene& scene, const ComputeParams& compute,
                                const SolverSettings& settings);

/// Full alternating optimization: sweep N over [N_min, N_max], alternate
/// the three subproblems per candidate until the latency change drops below tau, pick
/// N* = argmin N * T_max(N), ceil the batch sizes and re-balance bandwidth.
ResourcePlan run_bbpo(const Scene& scene, const LearningConstants& consts,
                      const ComputeParams& compute, const SolverSettings& settings,
                      const PlanLocks& locks = {});

/// Independent feasibility audit of an emitted plan against the original
/// constraint set. Violations are listed as human-readable strings; an empty
/// list means the plan passed.
struct PlanAudit {
    bool feasible = false;
    double phi_at_n = 0.0;
    double epsilon = 0.0;
    double latency_ratio = 1.0;          // max/min expected per-UAV latency
    double bandwidth_sum_rel_err = 0.0;
    double min_theta_s_deg = 0.0;
    double q_spread = 0.0;               // max |q_k(u_k) - q_s|
    std::vector<double> expected_latency_s;
    std::vector<std::string> violations;
};

PlanAudit audit_plan(const ResourcePlan& plan, const Scene& scene,
                     const LearningConstants& consts, const ComputeParams& compute,
                     const SolverSettings& settings);

/// Expected per-UAV round latencies for a full plan (helper shared by the
/// solvers, the audit, and the simulator).
std::vector<double> plan_expected_latencies(const ResourcePlan& plan, const Scene& scene,
                                            const ComputeParams& compute);

}  // namespace skyfeel
