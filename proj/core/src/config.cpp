#include "skyfeel/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "skyfeel/rng.hpp"

namespace skyfeel {

namespace {

using nlohmann::json;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

/// Strict object reader: every key must be consumed, leftovers are errors.
class ObjectReader {
public:
    ObjectReader(const json& node, std::string path)
        : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw ConfigError(path_, "expected a JSON object");
    }

    bool has(const std::string& key) {
        return node_.contains(key);
    }

    double number(const std::string& key, double fallback) {
        if (!node_.contains(key)) return fallback;
        consumed_.insert(key);
        const json& v = node_.at(key);
        if (!v.is_number()) throw ConfigError(join(key), "expected a number");
        return v.get<double>();
    }

    std::uint64_t unsigned_int(const std::string& key, std::uint64_t fallback) {
        if (!node_.contains(key)) return fallback;
        consumed_.insert(key);
        const json& v = node_.at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            throw ConfigError(join(key), "expected a non-negative integer");
        return v.get<std::uint64_t>();
    }

    std::string text(const std::string& key, const std::string& fallback) {
        if (!node_.contains(key)) return fallback;
        consumed_.insert(key);
        const json& v = node_.at(key);
        if (!v.is_string()) throw ConfigError(join(key), "expected a string");
        return v.get<std::string>();
    }

    /// Scalar-or-array numeric field; scalars come back as a single element.
    std::vector<double> number_list(const std::string& key,
                                    const std::vector<double>& fallback) {
        if (!node_.contains(key)) return fallback;
        consumed_.insert(key);
        const json& v = node_.at(key);
        if (v.is_number()) return {v.get<double>()};
        if (!v.is_array()) throw ConfigError(join(key), "expected a number or array");
        std::vector<double> out;
        for (const auto& item : v) {
            if (!item.is_number()) throw ConfigError(join(key), "expected numeric entries");
            out.push_back(item.get<double>());
        }
        if (out.empty()) throw ConfigError(join(key), "array must not be empty");
        return out;
    }

    std::vector<double> angle_list(const std::string& key,
                                   const std::vector<double>& fallback) {
        return number_list(key, fallback);
    }

    /// Nested object; absent key yields nullptr.
    const json* object(const std::string& key) {
        if (!node_.contains(key)) return nullptr;
        consumed_.insert(key);
        const json& v = node_.at(key);
        if (!v.is_object()) throw ConfigError(join(key), "expected an object");
        return &v;
    }

    const json* array(const std::string& key) {
        if (!node_.contains(key)) return nullptr;
        consumed_.insert(key);
        const json& v = node_.at(key);
        if (!v.is_array()) throw ConfigError(join(key), "expected an array");
        return &v;
    }

    std::string join(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    void finish() const {
        for (auto it = node_.begin(); it != node_.end(); ++it)
            if (!consumed_.count(it.key()))
                throw ConfigError(join(it.key()), "unknown key");
    }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> consumed_;
};

Position parse_position(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3)
        throw ConfigError(path, "expected [x, y, z]");
    for (const auto& c : v)
        if (!c.is_number()) throw ConfigError(path, "expected numeric coordinates");
    return Position{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

Environment parse_environment(const json* node, const std::string& path,
                              const Environment& fallback) {
    if (!node) return fallback;
    ObjectReader r(*node, path);
    Environment env;
    env.psi = r.number("psi", fallback.psi);
    env.zeta = r.number("zeta_per_deg", fallback.zeta);
    r.finish();
    if (!(env.psi > 0.0)) throw ConfigError(path + ".psi", "must be positive");
    if (!(env.zeta > 0.0)) throw ConfigError(path + ".zeta_per_deg", "must be positive");
    return env;
}

std::vector<Position> generate_targets(const SceneConfig& sc) {
    std::vector<Position> targets(sc.num_uavs);
    for (std::size_t k = 0; k < sc.num_uavs; ++k) {
        Rng rng(sc.placement_seed, k);
        const double radius = rng.uniform(sc.target_radius_min_m, sc.target_radius_max_m);
        const double angle = rng.uniform(0.0, 2.0 * kPi);
        targets[k] = Position{sc.server.x + radius * std::cos(angle),
                              sc.server.y + radius * std::sin(angle), 0.0};
    }
    return targets;
}

void parse_scene(const json* node, Config& cfg) {
    SceneConfig& sc = cfg.scene;
    if (node) {
        ObjectReader r(*node, "scene");
        if (const json* server = r.array("server_m"))
            sc.server = parse_position(*server, "scene.server_m");
        sc.num_uavs = r.unsigned_int("num_uavs", sc.num_uavs);
        sc.target_radius_min_m = r.number("target_radius_min_m", sc.target_radius_min_m);
        sc.target_radius_max_m = r.number("target_radius_max_m", sc.target_radius_max_m);
        sc.placement_seed = r.unsigned_int("placement_seed", sc.placement_seed);
        sc.uav_altitude_m = r.number("uav_altitude_m", sc.uav_altitude_m);
        sc.theta0_deg = r.number("theta0_deg", sc.theta0_deg);
        sc.env_sensing = parse_environment(r.object("env_sensing"), "scene.env_sensing",
                                           sc.env_sensing);
        // communication environment defaults to the sensing values
        sc.env_comm = parse_environment(r.object("env_comm"), "scene.env_comm",
                                        sc.env_sensing);
        if (const json* targets = r.array("targets_m")) {
            sc.targets.clear();
            for (std::size_t i = 0; i < targets->size(); ++i)
                sc.targets.push_back(parse_position(
                    (*targets)[i], "scene.targets_m[" + std::to_string(i) + "]"));
            sc.num_uavs = sc.targets.size();
        }
        r.finish();
    } else {
        cfg.scene.env_comm = cfg.scene.env_sensing;
    }

    if (sc.num_uavs == 0) throw ConfigError("scene.num_uavs", "need at least one UAV");
    if (!(sc.theta0_deg > 0.0 && sc.theta0_deg < 90.0))
        throw ConfigError("scene.theta0_deg", "must lie in (0, 90)");
    if (!(sc.uav_altitude_m > 0.0))
        throw ConfigError("scene.uav_altitude_m", "must be positive");
    if (sc.targets.empty()) {
        if (!(sc.target_radius_min_m > 0.0) ||
            sc.target_radius_max_m < sc.target_radius_min_m)
            throw ConfigError("scene.target_radius_min_m", "invalid placement annulus");
        sc.targets = generate_targets(sc);
    }
    for (std::size_t i = 0; i < sc.targets.size(); ++i)
        if (sc.targets[i].z >= sc.uav_altitude_m)
            throw ConfigError("scene.targets_m[" + std::to_string(i) + "]",
                              "target altitude must be below the UAV altitude");
}

void parse_radio(const json* node, RadioConfig& rc, std::size_t k_uavs) {
    if (node) {
        ObjectReader r(*node, "radio");
        rc.carrier_hz = r.number("carrier_hz", rc.carrier_hz);
        rc.pathloss_exp = r.number("pathloss_exp", rc.pathloss_exp);
        rc.excess_los_db = r.number("excess_los_db", rc.excess_los_db);
        rc.excess_nlos_db = r.number("excess_nlos_db", rc.excess_nlos_db);
        rc.noise_psd_dbm_per_hz = r.number("noise_psd_dbm_per_hz", rc.noise_psd_dbm_per_hz);
        rc.total_bandwidth_hz = r.number("total_bandwidth_hz", rc.total_bandwidth_hz);
        rc.tx_power_dbm = r.number_list("tx_power_dbm", rc.tx_power_dbm);
        r.finish();
    }
    if (!(rc.carrier_hz > 0.0)) throw ConfigError("radio.carrier_hz", "must be positive");
    if (!(rc.total_bandwidth_hz > 0.0))
        throw ConfigError("radio.total_bandwidth_hz", "must be positive");
    if (!(rc.excess_nlos_db > rc.excess_los_db) || !(rc.excess_los_db > 0.0))
        throw ConfigError("radio.excess_los_db",
                          "need 0 dB < excess_los_db < excess_nlos_db");
    if (rc.tx_power_dbm.size() != 1 && rc.tx_power_dbm.size() != k_uavs)
        throw ConfigError("radio.tx_power_dbm", "need one shared value or one per UAV");
}

void parse_compute(const json* node, ComputeParams& cp) {
    if (node) {
        ObjectReader r(*node, "compute");
        cp.unit_sense_time_s = r.number("unit_sense_time_s", cp.unit_sense_time_s);
        cp.cycles_per_sample = r.number("cycles_per_sample", cp.cycles_per_sample);
        cp.cpu_hz = r.number("cpu_hz", cp.cpu_hz);
        cp.payload_bits = r.number("payload_bits", cp.payload_bits);
        r.finish();
    }
    if (!(cp.unit_sense_time_s > 0.0) || !(cp.cycles_per_sample > 0.0) ||
        !(cp.cpu_hz > 0.0) || !(cp.payload_bits > 0.0))
        throw ConfigError("compute", "all entries must be positive");
}

void parse_learning(const json* node, LearningConfig& lc, std::size_t k_uavs) {
    if (node) {
        ObjectReader r(*node, "learning");
        lc.eta = r.number("eta", lc.eta);
        lc.smoothness = r.number("smoothness", lc.smoothness);
        lc.strong_convexity = r.number("strong_convexity", lc.strong_convexity);
        lc.sigma2 = r.number_list("sigma2", lc.sigma2);
        lc.lambda2 = r.number_list("lambda2", lc.lambda2);
        lc.initial_gap = r.number("initial_gap", lc.initial_gap);
        lc.epsilon = r.number("epsilon", lc.epsilon);
        r.finish();
    }
    if (!(lc.strong_convexity > 0.0) || lc.strong_convexity > lc.smoothness)
        throw ConfigError("learning.strong_convexity", "need 0 < mu <= L");
    if (!(lc.eta > 0.0 && lc.eta < 1.0 / (4.0 * lc.smoothness)))
        throw ConfigError("learning.eta", "must satisfy 0 < eta < 1/(4 * smoothness)");
    for (double v : lc.sigma2)
        if (v < 0.0) throw ConfigError("learning.sigma2", "must be >= 0");
    for (double v : lc.lambda2)
        if (v < 0.0) throw ConfigError("learning.lambda2", "must be >= 0");
    if (lc.sigma2.size() != 1 && lc.sigma2.size() != k_uavs)
        throw ConfigError("learning.sigma2", "need one shared value or one per UAV");
    if (lc.lambda2.size() != 1 && lc.lambda2.size() != k_uavs)
        throw ConfigError("learning.lambda2", "need one shared value or one per UAV");
    if (!(lc.initial_gap > 0.0)) throw ConfigError("learning.initial_gap", "must be positive");
    if (!(lc.epsilon > 0.0)) throw ConfigError("learning.epsilon", "must be positive");
}

void parse_solver(const json* node, SolverSettings& ss) {
    std::string sweep_mode =
        ss.n_sweep == NSweepMode::kExhaustive ? "exhaustive" : "geometric";
    if (node) {
        ObjectReader r(*node, "solver");
        ss.tol_tmax_s = r.number("tol_tmax_s", ss.tol_tmax_s);
        ss.tol_root_rel = r.number("tol_root_rel", ss.tol_root_rel);
        ss.max_bisect_iter = r.unsigned_int("max_bisect_iter", ss.max_bisect_iter);
        ss.max_alternations = r.unsigned_int("max_alternations", ss.max_alternations);
        ss.n_max = r.unsigned_int("n_max", ss.n_max);
        ss.delta_max = r.number("delta_max", ss.delta_max);
        ss.delta_min = r.number("delta_min", ss.delta_min);
        ss.delta_init = r.number("delta_init", ss.delta_init);
        sweep_mode = r.text("n_sweep", sweep_mode);
        ss.subproblem_order = r.text("subproblem_order", ss.subproblem_order);
        r.finish();
    }
    if (sweep_mode == "exhaustive")
        ss.n_sweep = NSweepMode::kExhaustive;
    else if (sweep_mode == "geometric")
        ss.n_sweep = NSweepMode::kGeometric;
    else
        throw ConfigError("solver.n_sweep", "must be 'exhaustive' or 'geometric'");
    if (!(ss.tol_tmax_s > 0.0) || !(ss.tol_root_rel > 0.0))
        throw ConfigError("solver", "tolerances must be positive");
    if (ss.n_max == 0) throw ConfigError("solver.n_max", "must be >= 1");
    if (!(ss.delta_min >= 1.0) || ss.delta_max < ss.delta_min ||
        ss.delta_init < ss.delta_min || ss.delta_init > ss.delta_max)
        throw ConfigError("solver.delta_min", "need 1 <= delta_min <= delta_init <= delta_max");
    std::string order = ss.subproblem_order;
    std::sort(order.begin(), order.end());
    if (order != "bdu")
        throw ConfigError("solver.subproblem_order", "must be a permutation of 'bdu'");
}

void parse_waveform(const json* node, WaveformConfig& wc) {
    if (node) {
        ObjectReader r(*node, "waveform");
        wc.carrier_hz = r.number("carrier_hz", wc.carrier_hz);
        wc.sweep_bandwidth_hz = r.number("sweep_bandwidth_hz", wc.sweep_bandwidth_hz);
        wc.chirp_s = r.number("chirp_s", wc.chirp_s);
        wc.chirps_per_frame = r.unsigned_int("chirps_per_frame", wc.chirps_per_frame);
        wc.samples_per_chirp = r.unsigned_int("samples_per_chirp", wc.samples_per_chirp);
        wc.tx_power_dbm = r.number("tx_power_dbm", wc.tx_power_dbm);
        wc.antenna_gain = r.number("antenna_gain", wc.antenna_gain);
        r.finish();
    }
    if (!(wc.carrier_hz > 0.0) || !(wc.sweep_bandwidth_hz > 0.0) || !(wc.chirp_s > 0.0) ||
        !(wc.antenna_gain > 0.0))
        throw ConfigError("waveform", "all entries must be positive");
    if (wc.chirps_per_frame < 2)
        throw ConfigError("waveform.chirps_per_frame", "need at least 2 chirps");
    if (wc.samples_per_chirp < 1)
        throw ConfigError("waveform.samples_per_chirp", "need at least 1 sample");
}

void parse_sweep(const json* node, SweepSettings& sw) {
    std::string window = sw.window == WindowKind::kHann ? "hann" : "rect";
    if (node) {
        ObjectReader r(*node, "sweep");
        sw.angles_deg = r.angle_list("angles_deg", sw.angles_deg);
        sw.altitude_m = r.number("altitude_m", sw.altitude_m);
        sw.frames = r.unsigned_int("frames", sw.frames);
        sw.scatterers = r.unsigned_int("scatterers", sw.scatterers);
        sw.osc_amplitude_m = r.number("osc_amplitude_m", sw.osc_amplitude_m);
        sw.osc_freq_hz = r.number("osc_freq_hz", sw.osc_freq_hz);
        sw.noise_power_w = r.number("noise_power_w", sw.noise_power_w);
        window = r.text("window", window);
        sw.window_len = r.unsigned_int("window_len", sw.window_len);
        sw.overlap = r.unsigned_int("overlap", sw.overlap);
        r.finish();
    }
    if (window == "hann")
        sw.window = WindowKind::kHann;
    else if (window == "rect")
        sw.window = WindowKind::kRect;
    else
        throw ConfigError("sweep.window", "must be 'hann' or 'rect'");
    for (double a : sw.angles_deg)
        if (!(a > 0.0 && a <= 90.0))
            throw ConfigError("sweep.angles_deg", "angles must lie in (0, 90]");
    if (sw.frames == 0) throw ConfigError("sweep.frames", "must be >= 1");
    if (sw.scatterers == 0) throw ConfigError("sweep.scatterers", "must be >= 1");
    if (!(sw.altitude_m > 0.0)) throw ConfigError("sweep.altitude_m", "must be positive");
    if (sw.noise_power_w < 0.0) throw ConfigError("sweep.noise_power_w", "must be >= 0");
    if (sw.window_len < 2 || sw.overlap >= sw.window_len)
        throw ConfigError("sweep.window_len", "need window_len > overlap >= 0");
}

void parse_sim(const json* node, SimConfig& sm) {
    std::string policy =
        sm.all_fail == AllFailPolicy::kCountRound ? "count-round" : "skip-round";
    if (node) {
        ObjectReader r(*node, "sim");
        sm.dim = r.unsigned_int("dim", sm.dim);
        policy = r.text("all_fail_policy", policy);
        sm.task_seed = r.unsigned_int("task_seed", sm.task_seed);
        sm.baseline_theta_deg = r.number("baseline_theta_deg", sm.baseline_theta_deg);
        sm.baseline_delta = r.number("baseline_delta", sm.baseline_delta);
        r.finish();
    }
    if (policy == "count-round")
        sm.all_fail = AllFailPolicy::kCountRound;
    else if (policy == "skip-round")
        sm.all_fail = AllFailPolicy::kSkipRound;
    else
        throw ConfigError("sim.all_fail_policy", "must be 'count-round' or 'skip-round'");
    if (sm.dim == 0) throw ConfigError("sim.dim", "must be >= 1");
    if (!(sm.baseline_theta_deg > 0.0 && sm.baseline_theta_deg <= 90.0))
        throw ConfigError("sim.baseline_theta_deg", "must lie in (0, 90]");
    if (!(sm.baseline_delta >= 1.0))
        throw ConfigError("sim.baseline_delta", "must be >= 1");
}

}  // namespace

Scene Config::build_scene() const {
    Scene s;
    s.server = scene.server;
    s.targets = scene.targets;
    s.uav_altitude_m = scene.uav_altitude_m;
    s.theta0_deg = scene.theta0_deg;
    s.env_sensing = scene.env_sensing;
    s.env_comm = scene.env_comm;
    s.radio.carrier_hz = radio.carrier_hz;
    s.radio.pathloss_exp = radio.pathloss_exp;
    s.radio.excess_los_linear = db_to_linear(radio.excess_los_db);
    s.radio.excess_nlos_linear = db_to_linear(radio.excess_nlos_db);
    s.radio.noise_psd_w_per_hz = dbm_to_watts(radio.noise_psd_dbm_per_hz);
    s.radio.total_bandwidth_hz = radio.total_bandwidth_hz;
    s.radio.tx_power_w.clear();
    for (double dbm : radio.tx_power_dbm) s.radio.tx_power_w.push_back(dbm_to_watts(dbm));
    return s;
}

LearningConstants Config::build_learning() const {
    LearningConstants c;
    c.eta = learning.eta;
    c.smoothness_l = learning.smoothness;
    c.strong_convexity_mu = learning.strong_convexity;
    c.initial_gap = learning.initial_gap;
    c.epsilon = learning.epsilon;
    const std::size_t k = scene.targets.size();
    c.sigma2 = learning.sigma2.size() == 1 ? std::vector<double>(k, learning.sigma2[0])
                                           : learning.sigma2;
    c.lambda2 = learning.lambda2.size() == 1 ? std::vector<double>(k, learning.lambda2[0])
                                             : learning.lambda2;
    return c;
}

SensingWaveform Config::build_waveform() const {
    SensingWaveform w;
    w.carrier_hz = waveform.carrier_hz;
    w.sweep_bandwidth_hz = waveform.sweep_bandwidth_hz;
    w.chirp_s = waveform.chirp_s;
    w.chirps_per_frame = waveform.chirps_per_frame;
    w.samples_per_chirp = waveform.samples_per_chirp;
    w.tx_power_w = dbm_to_watts(waveform.tx_power_dbm);
    w.antenna_gain = waveform.antenna_gain;
    return w;
}

Config default_config() { return parse_config("{}"); }

Config parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("JSON parse error: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("", "top level must be a JSON object");

    Config cfg;
    ObjectReader top(doc, "");
    parse_scene(top.object("scene"), cfg);
    const std::size_t k_uavs = cfg.scene.targets.size();
    parse_radio(top.object("radio"), cfg.radio, k_uavs);
    parse_compute(top.object("compute"), cfg.compute);
    parse_learning(top.object("learning"), cfg.learning, k_uavs);
    parse_solver(top.object("solver"), cfg.solver);
    parse_waveform(top.object("waveform"), cfg.waveform);
    parse_sweep(top.object("sweep"), cfg.sweep);
    parse_sim(top.object("sim"), cfg.sim);
    top.finish();
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string dump_config(const Config& cfg) {
    json doc;
    json& scene = doc["scene"];
    scene["server_m"] = {cfg.scene.server.x, cfg.scene.server.y, cfg.scene.server.z};
    json targets = json::array();
    for (const auto& t : cfg.scene.targets) targets.push_back({t.x, t.y, t.z});
    scene["targets_m"] = targets;
    scene["num_uavs"] = cfg.scene.targets.size();
    scene["target_radius_min_m"] = cfg.scene.target_radius_min_m;
    scene["target_radius_max_m"] = cfg.scene.target_radius_max_m;
    scene["placement_seed"] = cfg.scene.placement_seed;
    scene["uav_altitude_m"] = cfg.scene.uav_altitude_m;
    scene["theta0_deg"] = cfg.scene.theta0_deg;
    scene["env_sensing"] = {{"psi", cfg.scene.env_sensing.psi},
                            {"zeta_per_deg", cfg.scene.env_sensing.zeta}};
    scene["env_comm"] = {{"psi", cfg.scene.env_comm.psi},
                         {"zeta_per_deg", cfg.scene.env_comm.zeta}};

    json& radio = doc["radio"];
    radio["carrier_hz"] = cfg.radio.carrier_hz;
    radio["pathloss_exp"] = cfg.radio.pathloss_exp;
    radio["excess_los_db"] = cfg.radio.excess_los_db;
    radio["excess_nlos_db"] = cfg.radio.excess_nlos_db;
    radio["noise_psd_dbm_per_hz"] = cfg.radio.noise_psd_dbm_per_hz;
    radio["total_bandwidth_hz"] = cfg.radio.total_bandwidth_hz;
    radio["tx_power_dbm"] = cfg.radio.tx_power_dbm.size() == 1
                                ? json(cfg.radio.tx_power_dbm[0])
                                : json(cfg.radio.tx_power_dbm);

    json& compute = doc["compute"];
    compute["unit_sense_time_s"] = cfg.compute.unit_sense_time_s;
    compute["cycles_per_sample"] = cfg.compute.cycles_per_sample;
    compute["cpu_hz"] = cfg.compute.cpu_hz;
    compute["payload_bits"] = cfg.compute.payload_bits;

    json& learning = doc["learning"];
    learning["eta"] = cfg.learning.eta;
    learning["smoothness"] = cfg.learning.smoothness;
    learning["strong_convexity"] = cfg.learning.strong_convexity;
    learning["sigma2"] = cfg.learning.sigma2.size() == 1 ? json(cfg.learning.sigma2[0])
                                                         : json(cfg.learning.sigma2);
    learning["lambda2"] = cfg.learning.lambda2.size() == 1 ? json(cfg.learning.lambda2[0])
                                                           : json(cfg.learning.lambda2);
    learning["initial_gap"] = cfg.learning.initial_gap;
    learning["epsilon"] = cfg.learning.epsilon;

    json& solver = doc["solver"];
    solver["tol_tmax_s"] = cfg.solver.tol_tmax_s;
    solver["tol_root_rel"] = cfg.solver.tol_root_rel;
    solver["max_bisect_iter"] = cfg.solver.max_bisect_iter;
    solver["max_alternations"] = cfg.solver.max_alternations;
    solver["n_max"] = cfg.solver.n_max;
    solver["delta_max"] = cfg.solver.delta_max;
    solver["delta_min"] = cfg.solver.delta_min;
    solver["delta_init"] = cfg.solver.delta_init;
    solver["n_sweep"] =
        cfg.solver.n_sweep == NSweepMode::kExhaustive ? "exhaustive" : "geometric";
    solver["subproblem_order"] = cfg.solver.subproblem_order;

    json& waveform = doc["waveform"];
    waveform["carrier_hz"] = cfg.waveform.carrier_hz;
    waveform["sweep_bandwidth_hz"] = cfg.waveform.sweep_bandwidth_hz;
    waveform["chirp_s"] = cfg.waveform.chirp_s;
    waveform["chirps_per_frame"] = cfg.waveform.chirps_per_frame;
    waveform["samples_per_chirp"] = cfg.waveform.samples_per_chirp;
    waveform["tx_power_dbm"] = cfg.waveform.tx_power_dbm;
    waveform["antenna_gain"] = cfg.waveform.antenna_gain;

    json& sweep = doc["sweep"];
    sweep["angles_deg"] = cfg.sweep.angles_deg;
    sweep["altitude_m"] = cfg.sweep.altitude_m;
    sweep["frames"] = cfg.sweep.frames;
    sweep["scatterers"] = cfg.sweep.scatterers;
    sweep["osc_amplitude_m"] = cfg.sweep.osc_amplitude_m;
    sweep["osc_freq_hz"] = cfg.sweep.osc_freq_hz;
    sweep["noise_power_w"] = cfg.sweep.noise_power_w;
    sweep["window"] = cfg.sweep.window == WindowKind::kHann ? "hann" : "rect";
    sweep["window_len"] = cfg.sweep.window_len;
    sweep["overlap"] = cfg.sweep.overlap;

    json& sim = doc["sim"];
    sim["dim"] = cfg.sim.dim;
    sim["all_fail_policy"] =
        cfg.sim.all_fail == AllFailPolicy::kCountRound ? "count-round" : "skip-round";
    sim["task_seed"] = cfg.sim.task_seed;
    sim["baseline_theta_deg"] = cfg.sim.baseline_theta_deg;
    sim["baseline_delta"] = cfg.sim.baseline_delta;

    return doc.dump(2);
}

std::string config_hash(const Config& cfg) {
    const std::string text = dump_config(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace skyfeel
