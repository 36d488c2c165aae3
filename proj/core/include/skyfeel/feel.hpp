#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skyfeel/bbpo.hpp"
#include "skyfeel/latency.hpp"
#include "skyfeel/task.hpp"

namespace skyfeel {

/// What to charge for a round in which every UAV failed to sense. The model
/// itself never changes: the update is skipped either way.
enum class AllFailPolicy {
    kCountRound,  // latency = max_k T0 * delta_k (sensing still happened)
    kSkipRound,   // latency = 0
};

/// Resolved per-UAV inputs of the training loop; positions and radio are
/// already folded into sensing probabilities and uplink rates.
struct RoundSetup {
    std::vector<double> delta;
    std::vector<double> q;
    std::vector<double> rate_bps;
    double eta = 0.1;
    AllFailPolicy all_fail = AllFailPolicy::kCountRound;
};

/// Builds a RoundSetup from an emitted plan: q_k from the sensing elevation
/// of each hover position, rates from the channel model.
RoundSetup round_setup_from_plan(const ResourcePlan& plan, const Scene& scene,
                                 double eta, AllFailPolicy policy);

struct RoundOutcome {
    std::vector<unsigned char> participated;
    std::size_t participants = 0;
    std::vector<UavTiming> timings;
    double round_latency_s = 0.0;
};

/// One federated round: i.i.d. Bernoulli(q_k) participation, one SGD draw
/// per participant, plain average of participant gradients, global step.
/// An all-fail round leaves the model unchanged. Non-participants keep
/// their previous gradient in `stale_grads` (state is kept for inspection;
/// the aggregate never reads it).
///
/// Consumes a fixed amount of randomness (K uniforms + K*dim normals) per
/// call regardless of the participation pattern, so coupled runs stay
/// aligned.
RoundOutcome run_round(std::vector<double>& w,
                       std::vector<std::vector<double>>& stale_grads,
                       const SyntheticTask& task, const RoundSetup& setup,
                       const ComputeParams& compute, Rng& rng);

struct TraceRow {
    std::size_t round = 0;
    double gap = 0.0;
    std::size_t participants = 0;
    double round_latency_s = 0.0;
    double cumulative_time_s = 0.0;
};

struct TrainingTrace {
    std::size_t replication = 0;
    std::vector<TraceRow> rows;
};

/// Monte Carlo training: `replications` independent runs of `rounds` rounds
/// each, with per-replication RNG streams derived from (seed, replication).
/// Replications execute in parallel; traces are identical for any thread
/// count.
std::vector<TrainingTrace> run_training(const SyntheticTask& task,
                                        const RoundSetup& setup,
                                        const ComputeParams& compute,
                                        std::size_t rounds, std::size_t replications,
                                        std::uint64_t seed, unsigned threads = 0);

/// Mean gap per round across replications (index 0 <-> round 1).
std::vector<double> mean_gap_curve(const std::vector<TrainingTrace>& traces);

struct BaselineOptions {
    double position_elevation_deg = 45.0;  // det-uavposition
    double fixed_delta = 64.0;             // eq-batchsize
};

/// Named baseline plans; free variables are solved by the same subproblem
/// machinery as the full optimizer.
ResourcePlan baseline_preset(const std::string& name, const Scene& scene,
                             const LearningConstants& consts,
                             const ComputeParams& compute,
                             const SolverSettings& settings,
                             const BaselineOptions& options = {});

}  // namespace skyfeel
