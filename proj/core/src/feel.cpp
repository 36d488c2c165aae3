#include "skyfeel/feel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "skyfeel/parallel.hpp"

namespace skyfeel {

RoundSetup round_setup_from_plan(const ResourcePlan& plan, const Scene& scene,
                                 double eta, AllFailPolicy policy) {
    const std::size_t k_uavs = scene.num_uavs();
    if (plan.positions.size() != k_uavs || plan.delta.size() != k_uavs ||
        plan.bandwidth_hz.size() != k_uavs)
        throw std::invalid_argument("round_setup_from_plan: plan does not match scene");
    RoundSetup setup;
    setup.eta = eta;
    setup.all_fail = policy;
    setup.delta = plan.delta;
    setup.q.resize(k_uavs);
    setup.rate_bps.resize(k_uavs);
    // q_s = 1 marks an ideal-sensing plan: participation is assumed, not
    // drawn from the hover geometry
    const bool ideal = plan.q_s >= 1.0;
    for (std::size_t k = 0; k < k_uavs; ++k) {
        const double theta = elevation_angle_deg(plan.positions[k], scene.targets[k]);
        setup.q[k] = ideal ? 1.0 : los_probability(theta, scene.env_sensing);
        setup.rate_bps[k] = uplink_rate(plan.positions[k], plan.bandwidth_hz[k], scene, k);
    }
    return setup;
}

RoundOutcome run_round(std::vector<double>& w,
                       std::vector<std::vector<double>>& stale_grads,
                       const SyntheticTask& task, const RoundSetup& setup,
                       const ComputeParams& compute, Rng& rng) {
    const std::size_t k_uavs = task.num_uavs;
    if (setup.delta.size() != k_uavs || setup.q.size() != k_uavs)
        throw std::invalid_argument("run_round: setup does not match task");
    if (stale_grads.size() != k_uavs)
        stale_grads.assign(k_uavs, std::vector<double>(task.dim, 0.0));

    RoundOutcome out;
    out.participated.resize(k_uavs);
    out.timings.resize(k_uavs);

    // fixed randomness budget per round: K uniforms, then K*dim normals
    for (std::size_t k = 0; k < k_uavs; ++k)
        out.participated[k] = rng.bernoulli(setup.q[k]) ? 1 : 0;

    std::vector<double> aggregate(task.dim, 0.0);
    std::vector<double> g(task.dim);
    for (std::size_t k = 0; k < k_uavs; ++k) {
        task.stochastic_grad(k, w, setup.delta[k], rng, g);
        if (out.participated[k]) {
            ++out.participants;
            stale_grads[k] = g;
            for (std::size_t i = 0; i < task.dim; ++i) aggregate[i] += g[i];
        }
    }

    if (out.participants > 0) {
        const double inv = 1.0 / static_cast<double>(out.participants);
        for (std::size_t i = 0; i < task.dim; ++i)
            w[i] -= setup.eta * aggregate[i] * inv;
    }

    for (std::size_t k = 0; k < k_uavs; ++k) {
        const bool on = out.participated[k] != 0;
        auto& t = out.timings[k];
        t.participated = on;
        t.sense_s = sensing_time(setup.delta[k], compute);
        t.compute_s = compute_time(setup.delta[k], on, compute);
        t.upload_s = on ? upload_time(setup.rate_bps[k], true, compute) : 0.0;
    }
    out.round_latency_s = round_latency(out.timings);
    if (out.participants == 0 && setup.all_fail == AllFailPolicy::kSkipRound)
        out.round_latency_s = 0.0;
    return out;
}

std::vector<TrainingTrace> run_training(const SyntheticTask& task,
                                        const RoundSetup& setup,
                                        const ComputeParams& compute,
                                        std::size_t rounds, std::size_t replications,
                                        std::uint64_t seed, unsigned threads) {
    if (rounds == 0 || replications == 0)
        throw std::invalid_argument("run_training: rounds and replications must be >= 1");

    std::vector<TrainingTrace> traces(replications);
    parallel_for(replications, threads, [&](std::size_t rep) {
        Rng rng(seed, rep);
        std::vector<double> w = task.w0;
        std::vector<std::vector<double>> stale(task.num_uavs,
                                               std::vector<double>(task.dim, 0.0));
        TrainingTrace trace;
        trace.replication = rep;
        trace.rows.reserve(rounds);
        double clock = 0.0;
        for (std::size_t n = 1; n <= rounds; ++n) {
            const auto outcome = run_round(w, stale, task, setup, compute, rng);
            clock += outcome.round_latency_s;
            trace.rows.push_back(TraceRow{n, task.gap(w), outcome.participants,
                                          outcome.round_latency_s, clock});
        }
        traces[rep] = std::move(trace);
    });
    return traces;
}

std::vector<double> mean_gap_curve(const std::vector<TrainingTrace>& traces) {
    if (traces.empty()) return {};
    const std::size_t rounds = traces.front().rows.size();
    std::vector<double> mean(rounds, 0.0);
    for (const auto& trace : traces) {
        if (trace.rows.size() != rounds)
            throw std::invalid_argument("mean_gap_curve: ragged traces");
        for (std::size_t i = 0; i < rounds; ++i) mean[i] += trace.rows[i].gap;
    }
    for (double& v : mean) v /= static_cast<double>(traces.size());
    return mean;
}

ResourcePlan baseline_preset(const std::string& name, const Scene& scene,
                             const LearningConstants& consts,
                             const ComputeParams& compute,
                             const SolverSettings& settings,
                             const BaselineOptions& options) {
    PlanLocks locks;
    if (name == "det-uavposition") {
        locks.position_elevation_deg = options.position_elevation_deg;
    } else if (name == "eq-bandwidth") {
        locks.equal_bandwidth = true;
    } else if (name == "eq-batchsize") {
        locks.fixed_delta = options.fixed_delta;
    } else if (name == "bbpo-ideal") {
        locks.ideal_sensing = true;
    } else if (name == "bbpo") {
        // unrestricted; the reference scheme itself
    } else {
        throw std::invalid_argument("baseline_preset: unknown name '" + name + "'");
    }
    return run_bbpo(scene, consts, compute, settings, locks);
}

}  // namespace skyfeel
