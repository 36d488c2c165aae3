#include "skyfeel/bbpo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "skyfeel/log.hpp"
#include "skyfeel/parallel.hpp"

namespace skyfeel {

namespace {

constexpr double kInfinite = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.6931471805599453;

struct LinkBudget {
    double snr_scale = 0.0;  // p * h / N0; rate(B) = B * log2(1 + snr_scale / B)
    double rate_cap = 0.0;   // B -> inf limit: snr_scale / ln 2
};

LinkBudget link_budget(const Position& uav, const Scene& scene, std::size_t k) {
    LinkBudget lb;
    lb.snr_scale =
        scene.tx_power_w(k) * channel_gain(uav, scene) / scene.radio.noise_psd_w_per_hz;
    lb.rate_cap = lb.snr_scale / kLn2;
    return lb;
}

double rate_at(const LinkBudget& lb, double bandwidth_hz) {
    return bandwidth_hz * std::log2(1.0 + lb.snr_scale / bandwidth_hz);
}

/// Minimum bandwidth achieving `rate_req` on this link, by monotone
/// bisection; infinity when the rate exceeds the link's capacity limit.
double bandwidth_for_rate(const LinkBudget& lb, double rate_req, double hint_hi,
                          const SolverSettings& settings) {
    if (rate_req <= 0.0) return 0.0;
    if (rate_req >= lb.rate_cap * (1.0 - 1e-12)) return kInfinite;
    double hi = std::max(hint_hi, 1.0);
    std::size_t guard = 0;
    while (rate_at(lb, hi) < rate_req) {
        hi *= 2.0;
        if (++guard > 200) return kInfinite;
    }
    double lo = 0.0;
    for (std::size_t it = 0; it < settings.max_bisect_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (rate_at(lb, mid) < rate_req)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= settings.tol_root_rel * hi) break;
    }
    return hi;
}

std::vector<double> expected_latencies(const std::vector<double>& delta,
                                       const std::vector<double>& bandwidth_hz,
                                       const std::vector<LinkBudget>& links, double q_s,
                                       const ComputeParams& compute) {
    std::vector<double> lat(delta.size());
    for (std::size_t k = 0; k < delta.size(); ++k)
        lat[k] = expected_round_latency(delta[k], q_s, rate_at(links[k], bandwidth_hz[k]),
                                        compute);
    return lat;
}

std::vector<LinkBudget> link_budgets(const std::vector<Position>& positions,
                                     const Scene& scene) {
    std::vector<LinkBudget> links(positions.size());
    for (std::size_t k = 0; k < positions.size(); ++k)
        links[k] = link_budget(positions[k], scene, k);
    return links;
}

/// Right-hand side of the gap equation at N rounds:
/// (1 - A)(eps - lambda * A^N) / (1 - A^N).
double gap_equation_rhs(const LearningConstants& consts, double contraction_a,
                        std::size_t n_rounds) {
    const double a_n = std::pow(contraction_a, static_cast<double>(n_rounds));
    return (1.0 - contraction_a) * (consts.epsilon - consts.initial_gap * a_n) /
           (1.0 - a_n);
}

struct GapCoefficients {
    double sigma_coeff = 0.0;  // eta/K + 2 L eta^2 / (K^2 chi q)
    double het_const = 0.0;    // J: heterogeneity part, independent of delta
};

GapCoefficients gap_coefficients(const LearningConstants& consts, std::size_t k_uavs,
                                 double q_s, double q_min_scene) {
    const double k = static_cast<double>(k_uavs);
    const double chi = 1.0 - std::pow(1.0 - q_min_scene, k);
    const double l = consts.smoothness_l, eta = consts.eta;
    double sum_lambda2 = 0.0;
    for (double v : consts.lambda2) sum_lambda2 += v;
    GapCoefficients gc;
    gc.sigma_coeff = eta / k + 2.0 * l * eta * eta / (k * k * chi * q_s);
    gc.het_const = (eta / k + 4.0 * l * eta * eta / (k * k * chi * q_s) +
                    4.0 * l * eta * eta / (k * std::pow(q_s, k - 2.0))) *
                   sum_lambda2;
    return gc;
}

}  // namespace

BandwidthSolution solve_bandwidth(const std::vector<double>& delta,
                                  const std::vector<Position>& positions, double q_s,
                                  const Scene& scene, const ComputeParams& compute,
                                  const SolverSettings& settings) {
    const std::size_t k_uavs = delta.size();
    if (k_uavs == 0 || positions.size() != k_uavs)
        throw std::invalid_argument("solve_bandwidth: delta/positions size mismatch");
    const double b_c = scene.radio.total_bandwidth_hz;
    const auto links = link_budgets(positions, scene);

    std::vector<double> fixed_part(k_uavs);  // sensing + expected compute time
    double t_lo = 0.0;
    for (std::size_t k = 0; k < k_uavs; ++k) {
        if (!(links[k].snr_scale > 0.0))
            throw InfeasiblePlan("rate", "solve_bandwidth: zero-capacity link for UAV " +
                                             std::to_string(k));
        fixed_part[k] = sensing_time(delta[k], compute) +
                        q_s * compute_time(delta[k], true, compute);
        t_lo = std::max(t_lo, fixed_part[k] + q_s * compute.payload_bits / links[k].rate_cap);
    }

    // total bandwidth needed to meet a common latency target
    auto required = [&](double t, std::vector<double>* out) {
        double total = 0.0;
        for (std::size_t k = 0; k < k_uavs; ++k) {
            const double slack = t - fixed_part[k];
            if (slack <= 0.0) return kInfinite;
            const double rate_req = q_s * compute.payload_bits / slack;
            const double b = bandwidth_for_rate(links[k], rate_req, b_c / k_uavs, settings);
            if (!std::isfinite(b)) return kInfinite;
            total += b;
            if (out) (*out)[k] = b;
        }
        return total;
    };

    // upper starting point: the latency of an equal split is always feasible
    double t_hi = 0.0;
    for (std::size_t k = 0; k < k_uavs; ++k)
        t_hi = std::max(t_hi, fixed_part[k] + q_s * compute.payload_bits /
                                                  rate_at(links[k], b_c / k_uavs));
    t_hi *= 1.0 + 1e-9;  // keep the start strictly on the feasible side
    for (std::size_t it = 0; it < settings.max_bisect_iter; ++it) {
        const double mid = 0.5 * (t_lo + t_hi);
        if (required(mid, nullptr) > b_c)
            t_lo = mid;
        else
            t_hi = mid;
        if (t_hi - t_lo <= settings.tol_root_rel * t_hi) break;
    }

    BandwidthSolution sol;
    sol.bandwidth_hz.resize(k_uavs);
    if (!std::isfinite(required(t_hi, &sol.bandwidth_hz)))
        throw InfeasiblePlan("bandwidth", "solve_bandwidth: no finite latency is achievable");
    double total = 0.0;
    for (double b : sol.bandwidth_hz) total += b;
    for (double& b : sol.bandwidth_hz) b *= b_c / total;  // close the budget exactly

    const auto lat = expected_latencies(delta, sol.bandwidth_hz, links, q_s, compute);
    sol.t_max_s = *std::max_element(lat.begin(), lat.end());
    return sol;
}

BatchSolution solve_batchsize(const std::vector<Position>& positions,
                              const std::vector<double>& bandwidth_hz, double q_s,
                              std::size_t n_rounds, const LearningConstants& consts,
                              const Scene& scene, const ComputeParams& compute,
                              const SolverSettings& settings) {
    const std::size_t k_uavs = positions.size();
    consts.validate(k_uavs);
    if (bandwidth_hz.size() != k_uavs)
        throw std::invalid_argument("solve_batchsize: bandwidth size mismatch");
    if (n_rounds == 0)
        throw std::invalid_argument("solve_batchsize: n_rounds must be >= 1");

    const auto links = link_budgets(positions, scene);
    const double slope = compute.unit_sense_time_s +
                         q_s * compute.cycles_per_sample / compute.cpu_hz;  // d latency / d delta
    std::vector<double> upload(k_uavs);  // q * D0 / r_k
    double max_upload = 0.0;
    for (std::size_t k = 0; k < k_uavs; ++k) {
        const double r = rate_at(links[k], bandwidth_hz[k]);
        if (!(r > 0.0))
            throw InfeasiblePlan("rate", "solve_batchsize: zero rate for UAV " +
                                             std::to_string(k));
        upload[k] = q_s * compute.payload_bits / r;
        max_upload = std::max(max_upload, upload[k]);
    }

    const double contraction_a = contraction_factor(consts);
    const double rhs = gap_equation_rhs(consts, contraction_a, n_rounds);
    const double q_min_scene = los_probability(scene.theta0_deg, scene.env_sensing);
    const auto gc = gap_coefficients(consts, k_uavs, q_s, q_min_scene);

    auto delta_at = [&](double t, std::size_t k) {
        return std::min((t - upload[k]) / slope, settings.delta_max);
    };
    auto sigma_term = [&](double t) {
        double s = 0.0;
        for (std::size_t k = 0; k < k_uavs; ++k) s += consts.sigma2[k] / delta_at(t, k);
        return gc.sigma_coeff * s;
    };

    // feasibility: even with every batch at delta_max the bound must reach eps
    double sigma_floor = 0.0;
    for (double s2 : consts.sigma2) sigma_floor += s2 / settings.delta_max;
    sigma_floor *= gc.sigma_coeff;
    if (!(rhs - gc.het_const > sigma_floor))
        throw InfeasiblePlan(
            "gap", "solve_batchsize: epsilon unreachable at N = " + std::to_string(n_rounds));

    const double t_floor = max_upload + slope * settings.delta_min;
    double t_star = t_floor;
    if (sigma_term(t_floor) > rhs - gc.het_const) {
        double t_lo = t_floor;
        double t_hi = std::max(2.0 * t_floor, t_floor + slope);
        std::size_t guard = 0;
        while (sigma_term(t_hi) > rhs - gc.het_const) {
            t_hi *= 2.0;
            if (++guard > 200)
                throw InfeasiblePlan("gap", "solve_batchsize: gap equation root not bracketed");
        }
        for (std::size_t it = 0; it < settings.max_bisect_iter; ++it) {
            const double mid = 0.5 * (t_lo + t_hi);
            if (sigma_term(mid) > rhs - gc.het_const)
                t_lo = mid;
            else
                t_hi = mid;
            if (t_hi - t_lo <= settings.tol_root_rel * t_hi) break;
        }
        t_star = t_hi;
    }

    BatchSolution sol;
    sol.delta.resize(k_uavs);
    double t_max = 0.0;
    for (std::size_t k = 0; k < k_uavs; ++k) {
        sol.delta[k] = std::max(delta_at(t_star, k), settings.delta_min);
        t_max = std::max(t_max, upload[k] + slope * sol.delta[k]);
    }
    sol.t_max_s = t_max;
    return sol;
}

PositionSolution solve_position(const std::vector<double>& delta,
                                const std::vector<double>& bandwidth_hz,
                                std::size_t n_rounds, const LearningConstants& consts,
                                const Scene& scene, const ComputeParams& compute,
                                const SolverSettings& settings) {
    const std::size_t k_uavs = delta.size();
    consts.validate(k_uavs);
    if (bandwidth_hz.size() != k_uavs || scene.targets.size() != k_uavs)
        throw std::invalid_argument("solve_position: size mismatch");
    if (n_rounds == 0)
        throw std::invalid_argument("solve_position: n_rounds must be >= 1");

    const double contraction_a = contraction_factor(consts);
    const double rhs = gap_equation_rhs(consts, contraction_a, n_rounds);
    const double q_theta0 = los_probability(scene.theta0_deg, scene.env_sensing);
    const double q_ceiling = los_probability(90.0, scene.env_sensing);

    // gap-derived lower bound: the smallest q with G(delta, q) within the
    // per-round budget. G is strictly decreasing in q, so a monotone
    // bisection finds it exactly. A closed form that relaxes q^(K-2) at
    // q_min overshoots whenever the batch step left no slack.
    auto g_at = [&](double q) {
        return g_uniform_bound(consts, delta, q, q_theta0);
    };
    if (!(rhs > 0.0) || g_at(q_ceiling) > rhs)
        throw InfeasiblePlan("gap",
                             "solve_position: gap constraint unsatisfiable for any "
                             "elevation at N = " +
                                 std::to_string(n_rounds));
    double q_star = q_theta0;
    if (g_at(q_theta0) > rhs) {
        double lo = q_theta0, hi = q_ceiling;
        for (std::size_t it = 0; it < settings.max_bisect_iter; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (g_at(mid) > rhs)
                lo = mid;
            else
                hi = mid;
            if (hi - lo <= settings.tol_root_rel * hi) break;
        }
        q_star = hi;
    }

    PositionSolution sol;
    sol.q_s = q_star;
    sol.theta_s_deg = theta_from_qs(q_star, scene.env_sensing);
    sol.positions.resize(k_uavs);
    double t_max = 0.0;
    for (std::size_t i = 0; i < k_uavs; ++i) {
        const Position& v = scene.targets[i];
        const double dz = scene.uav_altitude_m - v.z;
        const double standoff =
            sol.theta_s_deg >= 90.0 ? 0.0 : dz / std::tan(deg_to_rad(sol.theta_s_deg));
        const double ground = horizontal_distance(v, scene.server);
        if (ground > 0.0 && standoff >= ground)
            throw InfeasiblePlan("geometry",
                                 "solve_position: standoff reaches past the server for UAV " +
                                     std::to_string(i));
        sol.positions[i] = optimal_position(q_star, v, scene);
        const double rate = uplink_rate(sol.positions[i], bandwidth_hz[i], scene, i);
        t_max = std::max(t_max, expected_round_latency(delta[i], q_star, rate, compute));
    }
    sol.t_max_s = t_max;
    return sol;
}

namespace {

/// State of one alternation run at a fixed round count.
struct Alternation {
    std::vector<double> delta;
    std::vector<double> bandwidth_hz;
    std::vector<Position> positions;
    double q_s = 0.0;
    double theta_s_deg = 0.0;
    double t_max_s = kInfinite;
};

std::vector<Position> overhead_positions(const Scene& scene) {
    std::vector<Position> pos(scene.targets.size());
    for (std::size_t k = 0; k < pos.size(); ++k)
        pos[k] = Position{scene.targets[k].x, scene.targets[k].y, scene.uav_altitude_m};
    return pos;
}

std::vector<Position> elevation_positions(double q, const Scene& scene) {
    std::vector<Position> pos(scene.targets.size());
    for (std::size_t k = 0; k < pos.size(); ++k)
        pos[k] = optimal_position(q, scene.targets[k], scene);
    return pos;
}

double max_latency(const Alternation& st, const Scene& scene,
                   const ComputeParams& compute) {
    const auto links = link_budgets(st.positions, scene);
    const auto lat = expected_latencies(st.delta, st.bandwidth_hz, links, st.q_s, compute);
    return *std::max_element(lat.begin(), lat.end());
}

/// Verifies the gap constraint for pinned batch sizes (eq-batchsize lock).
void check_gap_feasible(const std::vector<double>& delta, double q_s,
                        std::size_t n_rounds, const LearningConstants& consts,
                        const Scene& scene) {
    const double contraction_a = contraction_factor(consts);
    const double q_min_scene = los_probability(scene.theta0_deg, scene.env_sensing);
    const double g = g_uniform_bound(consts, delta, q_s, q_min_scene);
    const double bound = phi(n_rounds, contraction_a, g, consts.initial_gap);
    if (bound > consts.epsilon * (1.0 + 1e-9))
        throw InfeasiblePlan("gap", "pinned batch size misses epsilon at N = " +
                                        std::to_string(n_rounds));
}

Alternation alternate_at(std::size_t n_rounds, const Scene& scene,
                         const LearningConstants& consts, const ComputeParams& compute,
                         const SolverSettings& settings, const PlanLocks& locks) {
    const std::size_t k_uavs = scene.num_uavs();
    const double b_c = scene.radio.total_bandwidth_hz;

    Alternation st;
    st.delta.assign(k_uavs, locks.fixed_delta.value_or(settings.delta_init));
    st.bandwidth_hz.assign(k_uavs, b_c / static_cast<double>(k_uavs));
    if (locks.ideal_sensing) {
        // sensing assumed to always succeed: q = 1 everywhere in the
        // formulas, while the hover positions still sit at the lowest
        // admissible sensing angle for the best uplink
        st.q_s = 1.0;
        st.theta_s_deg = scene.theta0_deg;
        st.positions = elevation_positions(los_probability(scene.theta0_deg, scene.env_sensing),
                                           scene);
    } else if (locks.position_elevation_deg) {
        st.theta_s_deg = *locks.position_elevation_deg;
        st.q_s = los_probability(st.theta_s_deg, scene.env_sensing);
        st.positions = st.theta_s_deg >= 90.0 ? overhead_positions(scene)
                                              : elevation_positions(st.q_s, scene);
    } else {
        // start at the minimum admissible sensing angle: hovering over the
        // targets is also feasible but is a stuck fixed point of the
        // alternation (the position step cannot lower q once the batch step
        // has made the gap constraint tight)
        st.theta_s_deg = scene.theta0_deg;
        st.q_s = los_probability(scene.theta0_deg, scene.env_sensing);
        st.positions = elevation_positions(st.q_s, scene);
    }

    double t_prev = max_latency(st, scene, compute);
    bool converged_at_all = false;
    for (std::size_t iter = 0; iter < settings.max_alternations; ++iter) {
        double t_cur = t_prev;
        for (char step : settings.subproblem_order) {
            switch (step) {
                case 'b': {
                    if (locks.equal_bandwidth) {
                        st.bandwidth_hz.assign(k_uavs, b_c / static_cast<double>(k_uavs));
                        t_cur = max_latency(st, scene, compute);
                    } else {
                        auto sol = solve_bandwidth(st.delta, st.positions, st.q_s, scene,
                                                   compute, settings);
                        st.bandwidth_hz = std::move(sol.bandwidth_hz);
                        t_cur = sol.t_max_s;
                    }
                    break;
                }
                case 'd': {
                    if (locks.fixed_delta) {
                        check_gap_feasible(st.delta, st.q_s, n_rounds, consts, scene);
                        t_cur = max_latency(st, scene, compute);
                    } else {
                        auto sol = solve_batchsize(st.positions, st.bandwidth_hz, st.q_s,
                                                   n_rounds, consts, scene, compute,
                                                   settings);
                        st.delta = std::move(sol.delta);
                        t_cur = sol.t_max_s;
                    }
                    break;
                }
                case 'u': {
                    if (locks.ideal_sensing || locks.position_elevation_deg) {
                        if (!locks.ideal_sensing)
                            check_gap_feasible(st.delta, st.q_s, n_rounds, consts, scene);
                        t_cur = max_latency(st, scene, compute);
                    } else {
                        auto sol = solve_position(st.delta, st.bandwidth_hz, n_rounds,
                                                  consts, scene, compute, settings);
                        st.q_s = sol.q_s;
                        st.theta_s_deg = sol.theta_s_deg;
                        st.positions = std::move(sol.positions);
                        t_cur = sol.t_max_s;
                    }
                    break;
                }
                default:
                    throw std::invalid_argument("subproblem_order must be a permutation of 'bdu'");
            }
        }
        // descent holds once every constraint has been solved at least once;
        // the first pass may legitimately raise T to reach feasibility
        if (iter > 0 && t_cur > t_prev * (1.0 + 1e-9) + 1e-12)
            throw std::logic_error("bbpo: alternation increased T_max");
        const bool converged = std::abs(t_cur - t_prev) <= settings.tol_tmax_s;
        t_prev = t_cur;
        if (converged) {
            converged_at_all = true;
            break;
        }
    }
    if (!converged_at_all)
        log_warn("bbpo: alternation at N = " + std::to_string(n_rounds) +
                 " hit the iteration cap before meeting tau");
    st.t_max_s = t_prev;
    return st;
}

std::vector<std::size_t> sweep_candidates(std::size_t n_min, std::size_t n_max,
                                          NSweepMode mode) {
    std::vector<std::size_t> out;
    if (mode == NSweepMode::kExhaustive) {
        out.reserve(n_max - n_min + 1);
        for (std::size_t n = n_min; n <= n_max; ++n) out.push_back(n);
        return out;
    }
    std::set<std::size_t> grid;
    double v = static_cast<double>(n_min);
    while (v < static_cast<double>(n_max)) {
        grid.insert(static_cast<std::size_t>(v));
        v = std::max(v * 1.05, v + 1.0);
    }
    grid.insert(n_max);
    out.assign(grid.begin(), grid.end());
    return out;
}

}  // namespace

std::vector<double> plan_expected_latencies(const ResourcePlan& plan, const Scene& scene,
                                            const ComputeParams& compute) {
    const auto links = link_budgets(plan.positions, scene);
    return expected_latencies(plan.delta, plan.bandwidth_hz, links, plan.q_s, compute);
}

ResourcePlan run_bbpo(const Scene& scene, const LearningConstants& consts,
                      const ComputeParams& compute, const SolverSettings& settings,
                      const PlanLocks& locks) {
    const std::size_t k_uavs = scene.num_uavs();
    if (k_uavs == 0) throw std::invalid_argument("run_bbpo: scene has no targets");
    consts.validate(k_uavs);
    std::string order = settings.subproblem_order;
    std::sort(order.begin(), order.end());
    if (order != "bdu")
        throw std::invalid_argument("run_bbpo: subproblem_order must be a permutation of 'bdu'");

    const double contraction_a = contraction_factor(consts);
    const double q_min_scene = los_probability(scene.theta0_deg, scene.env_sensing);
    const std::vector<double> delta_max_vec(k_uavs, settings.delta_max);
    const double g_max = g_uniform_bound(consts, delta_max_vec, 1.0, q_min_scene);

    std::size_t n_min = 1;
    try {
        n_min = std::max<std::size_t>(1, min_rounds(consts.epsilon, contraction_a,
                                                    consts.initial_gap, g_max));
    } catch (const InfeasibleBound& e) {
        throw InfeasiblePlan("gap", e.what());
    }
    if (n_min > settings.n_max)
        throw InfeasiblePlan("n-max", "run_bbpo: N_min = " + std::to_string(n_min) +
                                          " exceeds N_max = " + std::to_string(settings.n_max));

    auto sweep_once = [&](const std::vector<std::size_t>& candidates,
                          std::vector<std::optional<Alternation>>& results,
                          std::vector<std::string>& reasons) {
        results.assign(candidates.size(), std::nullopt);
        reasons.assign(candidates.size(), {});
        parallel_for(candidates.size(), settings.threads, [&](std::size_t i) {
            try {
                results[i] = alternate_at(candidates[i], scene, consts, compute, settings,
                                          locks);
            } catch (const InfeasiblePlan& e) {
                reasons[i] = std::string(e.constraint()) + ": " + e.what();
            }
        });
    };

    auto candidates = sweep_candidates(n_min, settings.n_max, settings.n_sweep);
    std::vector<std::optional<Alternation>> results;
    std::vector<std::string> reasons;
    sweep_once(candidates, results, reasons);

    auto best_of = [&](const std::vector<std::size_t>& cand,
                       const std::vector<std::optional<Alternation>>& res) {
        std::size_t best = cand.size();
        double best_obj = kInfinite;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            if (!res[i]) continue;
            const double obj = static_cast<double>(cand[i]) * res[i]->t_max_s;
            if (obj < best_obj) {
                best_obj = obj;
                best = i;
            }
        }
        return best;
    };

    std::size_t best = best_of(candidates, results);
    if (best == candidates.size()) {
        std::string reason = "no feasible N in sweep";
        for (auto it = reasons.rbegin(); it != reasons.rend(); ++it)
            if (!it->empty()) {
                reason = *it;
                break;
            }
        throw InfeasiblePlan("sweep", "run_bbpo: " + reason);
    }

    if (settings.n_sweep == NSweepMode::kGeometric) {
        // refine exhaustively around the coarse winner
        const std::size_t center = candidates[best];
        const std::size_t span = std::max<std::size_t>(2, center / 20);
        const std::size_t lo = std::max(n_min, center > span ? center - span : n_min);
        const std::size_t hi = std::min(settings.n_max, center + span);
        std::vector<std::size_t> refine;
        for (std::size_t n = lo; n <= hi; ++n) refine.push_back(n);
        std::vector<std::optional<Alternation>> refine_results;
        std::vector<std::string> refine_reasons;
        sweep_once(refine, refine_results, refine_reasons);
        const std::size_t rbest = best_of(refine, refine_results);
        if (rbest < refine.size()) {
            candidates = std::move(refine);
            results = std::move(refine_results);
            best = rbest;
        }
    }

    const Alternation& won = *results[best];
    ResourcePlan plan;
    plan.n_rounds = candidates[best];
    plan.delta.resize(k_uavs);
    for (std::size_t k = 0; k < k_uavs; ++k)
        plan.delta[k] = std::ceil(won.delta[k] - 1e-9);
    plan.positions = won.positions;
    plan.q_s = won.q_s;
    plan.theta_s_deg = won.theta_s_deg;

    // integer batches change sensing/compute time, so re-balance bandwidth to
    // restore the equal-latency optimum before emitting
    if (locks.equal_bandwidth) {
        plan.bandwidth_hz.assign(k_uavs,
                                 scene.radio.total_bandwidth_hz / static_cast<double>(k_uavs));
        const auto lat = plan_expected_latencies(plan, scene, compute);
        plan.t_max_s = *std::max_element(lat.begin(), lat.end());
    } else {
        auto balanced =
            solve_bandwidth(plan.delta, plan.positions, plan.q_s, scene, compute, settings);
        plan.bandwidth_hz = std::move(balanced.bandwidth_hz);
        plan.t_max_s = balanced.t_max_s;
    }
    plan.objective_s = static_cast<double>(plan.n_rounds) * plan.t_max_s;
    return plan;
}

PlanAudit audit_plan(const ResourcePlan& plan, const Scene& scene,
                     const LearningConstants& consts, const ComputeParams& compute,
                     const SolverSettings& settings) {
    PlanAudit audit;
    audit.epsilon = consts.epsilon;
    const std::size_t k_uavs = scene.num_uavs();
    auto fail = [&audit](const std::string& what) { audit.violations.push_back(what); };

    if (plan.delta.size() != k_uavs || plan.bandwidth_hz.size() != k_uavs ||
        plan.positions.size() != k_uavs) {
        fail("plan arrays do not match the scene's UAV count");
        audit.feasible = false;
        return audit;
    }

    for (std::size_t k = 0; k < k_uavs; ++k) {
        if (plan.delta[k] < 1.0 || std::abs(plan.delta[k] - std::round(plan.delta[k])) > 1e-9)
            fail("delta[" + std::to_string(k) + "] is not a positive integer");
        if (plan.bandwidth_hz[k] <= 0.0)
            fail("bandwidth[" + std::to_string(k) + "] is not positive");
    }

    double b_sum = 0.0;
    for (double b : plan.bandwidth_hz) b_sum += b;
    audit.bandwidth_sum_rel_err =
        std::abs(b_sum - scene.radio.total_bandwidth_hz) / scene.radio.total_bandwidth_hz;
    if (audit.bandwidth_sum_rel_err > 1e-6) fail("bandwidth does not sum to B_c");

    audit.min_theta_s_deg = 90.0;
    audit.q_spread = 0.0;
    const double q_first =
        los_probability(elevation_angle_deg(plan.positions[0], scene.targets[0]),
                        scene.env_sensing);
    for (std::size_t k = 0; k < k_uavs; ++k) {
        const double theta = elevation_angle_deg(plan.positions[k], scene.targets[k]);
        audit.min_theta_s_deg = std::min(audit.min_theta_s_deg, theta);
        const double qk = los_probability(theta, scene.env_sensing);
        audit.q_spread = std::max(audit.q_spread, std::abs(qk - q_first));
    }
    if (audit.min_theta_s_deg < scene.theta0_deg - 1e-6)
        fail("sensing elevation angle below theta0");
    if (audit.q_spread > 1e-8) fail("realized q_s differs across UAVs");
    // plans with q_s = 1 declare the ideal-sensing assumption rather than
    // the realized LOS probability
    if (plan.q_s < 1.0 && std::abs(plan.q_s - q_first) > 1e-8)
        fail("plan q_s does not match the realized sensing probability");

    audit.expected_latency_s = plan_expected_latencies(plan, scene, compute);
    const double lat_max =
        *std::max_element(audit.expected_latency_s.begin(), audit.expected_latency_s.end());
    const double lat_min =
        *std::min_element(audit.expected_latency_s.begin(), audit.expected_latency_s.end());
    audit.latency_ratio = lat_max / lat_min;
    if (lat_max > plan.t_max_s * (1.0 + 1e-6)) fail("expected latency exceeds T_max");

    try {
        const double contraction_a = contraction_factor(consts);
        const double q_min_scene = los_probability(scene.theta0_deg, scene.env_sensing);
        const double g =
            g_uniform_bound(consts, plan.delta, std::min(plan.q_s, 1.0), q_min_scene);
        audit.phi_at_n = phi(plan.n_rounds, contraction_a, g, consts.initial_gap);
        if (audit.phi_at_n > consts.epsilon * (1.0 + 1e-9))
            fail("optimality-gap bound misses epsilon");
    } catch (const std::exception& e) {
        fail(std::string("gap bound evaluation failed: ") + e.what());
    }

    if (std::abs(plan.objective_s - static_cast<double>(plan.n_rounds) * plan.t_max_s) >
        1e-6 * std::max(1.0, plan.objective_s))
        fail("objective is not N * T_max");

    (void)settings;
    audit.feasible = audit.violations.empty();
    return audit;
}

}  // namespace skyfeel
