#pragma once

#include <cstdint>
#include <string>

#include "skyfeel/bbpo.hpp"
#include "skyfeel/config.hpp"

namespace skyfeel {

/// A persisted plan: the decision variables, their audit, and the resolved
/// configuration they were computed from, so downstream commands need no
/// separate config file.
struct PlanDocument {
    Config config;
    ResourcePlan plan;
    PlanAudit audit;
    std::uint64_t seed = 0;
};

std::string dump_plan(const PlanDocument& doc);
void write_plan(const std::string& path, const PlanDocument& doc);
PlanDocument load_plan(const std::string& path);
PlanDocument parse_plan(const std::string& json_text);

/// JSON infeasibility report ({"error": "infeasible", ...}) for exit-code-1
/// paths.
std::string infeasibility_report(const std::string& constraint,
                                 const std::string& detail);

}  // namespace skyfeel
