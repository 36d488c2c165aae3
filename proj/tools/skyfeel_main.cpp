// skyfeel — UAV deployment and sensing/compute/communication resource
// planning for federated edge learning, with Monte Carlo validation of the
// convergence bounds and a micro-Doppler sensing-quality study.
//
// Subcommands: optimize, simulate, weights, sense-sweep, verify.
// Exit codes: 0 success, 1 infeasible (JSON reason block on stdout),
// 2 usage/config error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "skyfeel/config.hpp"
#include "skyfeel/csv.hpp"
#include "skyfeel/feel.hpp"
#include "skyfeel/log.hpp"
#include "skyfeel/plan_io.hpp"
#include "skyfeel/sensing.hpp"
#include "skyfeel/verify.hpp"
#include "skyfeel/version.hpp"

namespace {

using namespace skyfeel;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

Config load_config_or_default(const std::string& path) {
    return path.empty() ? default_config() : load_config(path);
}

int cmd_optimize(const std::string& config_path, const std::string& out_path,
                 const std::string& baseline, std::uint64_t seed, unsigned threads) {
    Config cfg = load_config_or_default(config_path);
    cfg.solver.threads = threads;
    const Scene scene = cfg.build_scene();
    const LearningConstants consts = cfg.build_learning();

    ResourcePlan plan;
    try {
        BaselineOptions options;
        options.position_elevation_deg = cfg.sim.baseline_theta_deg;
        options.fixed_delta = cfg.sim.baseline_delta;
        plan = baseline_preset(baseline, scene, consts, cfg.compute, cfg.solver, options);
    } catch (const InfeasiblePlan& e) {
        std::cout << infeasibility_report(e.constraint(), e.what()) << "\n";
        return kExitInfeasible;
    }

    PlanDocument doc;
    doc.config = cfg;
    doc.plan = plan;
    doc.seed = seed;
    doc.audit = audit_plan(plan, scene, consts, cfg.compute, cfg.solver);
    if (!out_path.empty()) write_plan(out_path, doc);

    std::cout << "plan: N* = " << plan.n_rounds << ", T_max = " << format_double(plan.t_max_s)
              << " s, objective = " << format_double(plan.objective_s) << " s, q_s = "
              << format_double(plan.q_s) << ", theta_s = " << format_double(plan.theta_s_deg)
              << " deg\n";
    if (!doc.audit.feasible) {
        std::ostringstream detail;
        for (const auto& v : doc.audit.violations) detail << v << "; ";
        std::cout << infeasibility_report("audit", detail.str()) << "\n";
        return kExitInfeasible;
    }
    const double q_min_scene = los_probability(scene.theta0_deg, scene.env_sensing);
    const auto state = bound_state(
        consts, g_uniform_bound(consts, plan.delta, std::min(plan.q_s, 1.0), q_min_scene));
    std::cout << "audit: ok (latency ratio " << format_double(doc.audit.latency_ratio)
              << ", phi(N*) = " << format_double(doc.audit.phi_at_n) << " <= eps = "
              << format_double(doc.audit.epsilon)
              << ", bias floor = " << format_double(state.bias_floor) << ")\n";
    return kExitOk;
}

int cmd_simulate(const std::string& plan_path, std::size_t rounds, std::size_t reps,
                 std::uint64_t seed, const std::string& out_path, unsigned threads) {
    const PlanDocument doc = load_plan(plan_path);
    const Config& cfg = doc.config;
    const Scene scene = cfg.build_scene();
    const LearningConstants consts = cfg.build_learning();
    const std::size_t k_uavs = scene.num_uavs();

    // synthetic task realizing the configured constants: per-UAV noise is
    // exact; heterogeneity uses the mean configured lambda2
    double mean_lambda2 = 0.0;
    for (double v : consts.lambda2) mean_lambda2 += v;
    mean_lambda2 /= static_cast<double>(k_uavs);
    std::vector<double> sigma(k_uavs);
    for (std::size_t k = 0; k < k_uavs; ++k) sigma[k] = std::sqrt(consts.sigma2[k]);
    const SyntheticTask task = make_task(
        k_uavs, cfg.sim.dim, std::sqrt(mean_lambda2), sigma, cfg.sim.task_seed,
        consts.smoothness_l, consts.strong_convexity_mu, consts.initial_gap);

    const RoundSetup setup =
        round_setup_from_plan(doc.plan, scene, consts.eta, cfg.sim.all_fail);
    const auto traces = run_training(task, setup, cfg.compute, rounds, reps, seed, threads);

    CsvWriter csv(config_hash(cfg), seed);
    csv.header({"replication", "round", "gap", "participants", "round_latency_s",
                "cumulative_time_s"});
    for (const auto& trace : traces)
        for (const auto& row : trace.rows)
            csv.row({std::to_string(trace.replication), std::to_string(row.round),
                     format_double(row.gap), std::to_string(row.participants),
                     format_double(row.round_latency_s),
                     format_double(row.cumulative_time_s)});
    if (out_path.empty())
        std::cout << csv.text();
    else
        csv.save(out_path);
    log_info("simulate: " + std::to_string(reps) + " replications x " +
             std::to_string(rounds) + " rounds");
    return kExitOk;
}

int cmd_weights(const std::string& config_path, const std::string& q_list,
                std::size_t k_uniform, double q_uniform, const std::string& out_path) {
    SensingProfile profile;
    if (!q_list.empty()) {
        std::stringstream ss(q_list);
        std::string item;
        while (std::getline(ss, item, ','))
            profile.q.push_back(std::stod(item));
    } else if (k_uniform > 0) {
        profile.q.assign(k_uniform, q_uniform);
    } else {
        std::cerr << "weights: pass --q or --k with --uniform-q\n";
        return kExitUsage;
    }

    const auto alpha = enumerate_alpha(profile);
    const auto beta = enumerate_beta(profile);
    const std::size_t k_uavs = profile.q.size();
    double q_min = 1.0, q_max = 0.0;
    for (double q : profile.q) {
        q_min = std::min(q_min, q);
        q_max = std::max(q_max, q);
    }

    nlohmann::json out;
    out["provenance"] = {{"tool", "skyfeel"}, {"version", kVersion}};
    if (!config_path.empty())
        out["provenance"]["config_hash"] = config_hash(load_config(config_path));
    out["q"] = profile.q;
    out["alpha"] = alpha;
    out["beta"] = beta;
    const auto forms = uniform_closed_forms(k_uavs, q_min, q_min);
    out["bounds"] = {{"chi", forms.chi},
                     {"beta_bound", forms.beta_bound},
                     {"gamma_bound", forms.gamma_bound}};
    if (q_max - q_min <= 1e-12) {
        out["uniform"] = {{"alpha", forms.alpha},
                          {"beta_bound", forms.beta_bound},
                          {"gamma_bound", forms.gamma_bound},
                          {"chi", forms.chi}};
        if (k_uavs >= 2)
            out["uniform"]["m22_coefficient"] = m22_coefficient_uniform(k_uavs, q_min);
    }

    const std::string text = out.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_text(out_path, text);
    return kExitOk;
}

int cmd_sense_sweep(const std::string& config_path, const std::string& out_path,
                    std::uint64_t seed, unsigned threads, const std::string& dump_path,
                    double dump_angle) {
    Config cfg = load_config_or_default(config_path);
    cfg.sweep.threads = threads;
    const SensingWaveform waveform = cfg.build_waveform();

    const auto points = elevation_sweep(cfg.sweep, waveform, seed);

    CsvWriter csv(config_hash(cfg), seed);
    csv.header({"angle_deg", "mean_psnr_db", "frames"});
    for (const auto& p : points)
        csv.row({format_double(p.angle_deg), format_double(p.mean_psnr_db),
                 std::to_string(p.frames)});
    if (out_path.empty())
        std::cout << csv.text();
    else
        csv.save(out_path);

    if (!dump_path.empty()) {
        const double base = cfg.sweep.altitude_m / std::sin(deg_to_rad(dump_angle));
        const auto track = make_motion_track(base, cfg.sweep.scatterers,
                                             cfg.sweep.osc_amplitude_m,
                                             cfg.sweep.osc_freq_hz, seed);
        const auto window = make_window(cfg.sweep.window, cfg.sweep.window_len);
        const auto echo = synth_echo(track, waveform, cfg.sweep.noise_power_w, 1, seed);
        const auto frame = integrate_spectrogram(stft_rdt(echo, window, cfg.sweep.overlap));
        write_matrix_file(dump_path, frame.rows, frame.cols, frame.values);
    }
    return kExitOk;
}

int cmd_verify(const std::string& config_path, unsigned threads) {
    const Config cfg = load_config_or_default(config_path);
    const auto results = run_verification(cfg, threads);
    std::size_t failed = 0;
    for (const auto& r : results) {
        std::printf("%-28s %s  (%.2fs)%s%s\n", r.name.c_str(),
                    r.passed ? "PASS" : "FAIL", r.elapsed_s, r.passed ? "" : "  ",
                    r.passed ? "" : r.detail.c_str());
        if (!r.passed) ++failed;
    }
    std::printf("%zu/%zu oracle checks passed\n", results.size() - failed, results.size());
    return failed == 0 ? kExitOk : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UAV-assisted federated edge learning planner and simulator"};
    app.set_version_flag("--version", std::string("skyfeel ") + kVersion);
    app.require_subcommand(1);

    unsigned threads = 0;
    app.add_option("--threads", threads, "worker thread cap (0 = hardware)");

    std::string config_path, out_path, plan_path, baseline = "bbpo";
    std::uint64_t seed = 0;

    auto* optimize = app.add_subcommand("optimize", "compute a deployment/resource plan");
    optimize->add_option("--config", config_path, "config JSON path");
    optimize->add_option("--out", out_path, "plan JSON output path");
    optimize->add_option("--baseline", baseline,
                         "bbpo | det-uavposition | eq-bandwidth | eq-batchsize | bbpo-ideal");
    optimize->add_option("--seed", seed, "seed recorded in the plan provenance");

    std::size_t rounds = 500, reps = 1;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo training on a plan");
    simulate->add_option("--plan", plan_path, "plan JSON path")->required();
    simulate->add_option("--rounds", rounds, "training rounds per replication");
    simulate->add_option("--reps", reps, "independent replications");
    simulate->add_option("--seed", seed, "RNG seed");
    simulate->add_option("--out", out_path, "trace CSV output path");

    std::string q_list;
    std::size_t k_uniform = 0;
    double q_uniform = 1.0;
    auto* weights = app.add_subcommand("weights", "participation weight enumeration");
    weights->add_option("--config", config_path, "config JSON path (provenance only)");
    weights->add_option("--q", q_list, "comma-separated q_s list");
    weights->add_option("--k", k_uniform, "UAV count for a uniform profile");
    weights->add_option("--uniform-q", q_uniform, "uniform q_s value");
    weights->add_option("--out", out_path, "JSON output path");

    std::string dump_path;
    double dump_angle = 90.0;
    auto* sweep = app.add_subcommand("sense-sweep", "PSNR vs sensing elevation angle");
    sweep->add_option("--config", config_path, "config JSON path");
    sweep->add_option("--out", out_path, "sweep CSV output path");
    sweep->add_option("--seed", seed, "RNG seed");
    sweep->add_option("--dump-spectrogram", dump_path, "binary spectrogram dump path");
    sweep->add_option("--dump-angle", dump_angle, "angle for the spectrogram dump");

    auto* verify = app.add_subcommand("verify", "run the oracle verification suite");
    verify->add_option("--config", config_path, "config JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (optimize->parsed())
            return cmd_optimize(config_path, out_path, baseline, seed, threads);
        if (simulate->parsed())
            return cmd_simulate(plan_path, rounds, reps, seed, out_path, threads);
        if (weights->parsed())
            return cmd_weights(config_path, q_list, k_uniform, q_uniform, out_path);
        if (sweep->parsed())
            return cmd_sense_sweep(config_path, out_path, seed, threads, dump_path,
                                   dump_angle);
        if (verify->parsed()) return cmd_verify(config_path, threads);
    } catch (const InfeasiblePlan& e) {
        std::cout << infeasibility_report(e.constraint(), e.what()) << "\n";
        return kExitInfeasible;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
