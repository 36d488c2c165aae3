#include "skyfeel/plan_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "skyfeel/version.hpp"

namespace skyfeel {

namespace {

using nlohmann::json;

json positions_to_json(const std::vector<Position>& positions) {
    json arr = json::array();
    for (const auto& p : positions) arr.push_back({p.x, p.y, p.z});
    return arr;
}

std::vector<Position> positions_from_json(const json& arr) {
    std::vector<Position> out;
    for (const auto& p : arr)
        out.push_back(Position{p.at(0).get<double>(), p.at(1).get<double>(),
                               p.at(2).get<double>()});
    return out;
}

}  // namespace

std::string dump_plan(const PlanDocument& doc) {
    json root;
    root["provenance"] = {{"tool", "skyfeel"},
                          {"version", kVersion},
                          {"config_hash", config_hash(doc.config)},
                          {"seed", doc.seed}};
    root["config"] = json::parse(dump_config(doc.config));

    json& plan = root["plan"];
    plan["delta"] = doc.plan.delta;
    plan["bandwidth_hz"] = doc.plan.bandwidth_hz;
    plan["positions_m"] = positions_to_json(doc.plan.positions);
    plan["q_s"] = doc.plan.q_s;
    plan["theta_s_deg"] = doc.plan.theta_s_deg;
    plan["t_max_s"] = doc.plan.t_max_s;
    plan["n_rounds"] = doc.plan.n_rounds;
    plan["objective_s"] = doc.plan.objective_s;

    json& audit = root["audit"];
    audit["feasible"] = doc.audit.feasible;
    audit["phi_at_n"] = doc.audit.phi_at_n;
    audit["epsilon"] = doc.audit.epsilon;
    audit["latency_ratio"] = doc.audit.latency_ratio;
    audit["bandwidth_sum_rel_err"] = doc.audit.bandwidth_sum_rel_err;
    audit["min_theta_s_deg"] = doc.audit.min_theta_s_deg;
    audit["q_spread"] = doc.audit.q_spread;
    audit["expected_latency_s"] = doc.audit.expected_latency_s;
    audit["violations"] = doc.audit.violations;

    return root.dump(2);
}

void write_plan(const std::string& path, const PlanDocument& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_plan: cannot open " + path);
    const std::string text = dump_plan(doc);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.put('\n');
}

PlanDocument parse_plan(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("plan: JSON parse error: ") + e.what());
    }
    PlanDocument doc;
    doc.config = parse_config(root.at("config").dump());
    if (root.contains("provenance") && root["provenance"].contains("seed"))
        doc.seed = root["provenance"]["seed"].get<std::uint64_t>();

    const json& plan = root.at("plan");
    doc.plan.delta = plan.at("delta").get<std::vector<double>>();
    doc.plan.bandwidth_hz = plan.at("bandwidth_hz").get<std::vector<double>>();
    doc.plan.positions = positions_from_json(plan.at("positions_m"));
    doc.plan.q_s = plan.at("q_s").get<double>();
    doc.plan.theta_s_deg = plan.at("theta_s_deg").get<double>();
    doc.plan.t_max_s = plan.at("t_max_s").get<double>();
    doc.plan.n_rounds = plan.at("n_rounds").get<std::size_t>();
    doc.plan.objective_s = plan.at("objective_s").get<double>();

    if (root.contains("audit")) {
        const json& audit = root["audit"];
        doc.audit.feasible = audit.value("feasible", false);
        doc.audit.phi_at_n = audit.value("phi_at_n", 0.0);
        doc.audit.epsilon = audit.value("epsilon", 0.0);
        doc.audit.latency_ratio = audit.value("latency_ratio", 1.0);
        doc.audit.bandwidth_sum_rel_err = audit.value("bandwidth_sum_rel_err", 0.0);
        doc.audit.min_theta_s_deg = audit.value("min_theta_s_deg", 0.0);
        doc.audit.q_spread = audit.value("q_spread", 0.0);
        if (audit.contains("expected_latency_s"))
            doc.audit.expected_latency_s =
                audit["expected_latency_s"].get<std::vector<double>>();
        if (audit.contains("violations"))
            doc.audit.violations = audit["violations"].get<std::vector<std::string>>();
    }
    return doc;
}

PlanDocument load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_plan: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_plan(buffer.str());
}

std::string infeasibility_report(const std::string& constraint,
                                 const std::string& detail) {
    json root;
    root["error"] = "infeasible";
    root["constraint"] = constraint;
    root["detail"] = detail;
    return root.dump(2);
}

}  // namespace skyfeel
