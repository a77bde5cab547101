#pragma once

#include <string>
#include <vector>

#include "mechcomplete/graph.hpp"
#include "mechcomplete/regime.hpp"
#include "mechcomplete/scenario.hpp"
#include "mechcomplete/skills.hpp"

namespace mechcomplete::reasoning {

/// What the solver has to assemble.
struct ModelPlan {
    std::vector<std::string> active_skills;  ///< sorted
    std::vector<std::string> pressure_source_terms;
    std::vector<std::string> pressure_sink_terms;
    HydraulicBc hydraulic_bc = HydraulicBc::no_flux;
    std::vector<std::string> notes;

    bool has_sink() const { return !pressure_sink_terms.empty(); }
    bool has_source() const { return !pressure_source_terms.empty(); }
};

/// Same source/sink terms and boundary condition; notes and skill lists are ignored.
bool solver_equivalent(const ModelPlan& a, const ModelPlan& b);

/// Live skills, their pressure roles, and drained iff a sink is present.
ModelPlan emit_plan(const CausalGraph& graph, const RegimeReport& report);

/// Retrieved thermal pressurization only, sealed boundary.
ModelPlan naive_plan();
/// Thermal pressurization plus the Darcy sink, drained rim.
ModelPlan completed_plan();

struct Reasoning {
    RegimeReport report;
    CausalGraph assembled;
    CausalGraph graph;  ///< after prune and completion
    ModelPlan plan;
};

/// assemble -> prune -> regime -> complete -> emit. An explicit scenario
/// hydraulic_bc replaces the reasoned one.
Reasoning reason(const skills::SkillRegistry& registry, const ScenarioSpec& scenario);

/// Human-readable summary printed by `plan`.
std::string format_reasoning(const Reasoning& r);

}  // namespace mechcomplete::reasoning
