#include "mechcomplete/plan.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

namespace mechcomplete::reasoning {

bool solver_equivalent(const ModelPlan& a, const ModelPlan& b) {
    return a.pressure_source_terms == b.pressure_source_terms && a.pressure_sink_terms == b.pressure_sink_terms &&
           a.hydraulic_bc == b.hydraulic_bc;
}

ModelPlan emit_plan(const CausalGraph& graph, const RegimeReport& report) {
    std::set<std::string> live, sources, sinks;
    for (const auto& e : graph.edges) {
        if (!e.live()) continue;
        live.insert(e.skill_id);
        if (e.role == skills::PressureRole::source) sources.insert(e.skill_id);
        if (e.role == skills::PressureRole::sink) sinks.insert(e.skill_id);
    }

    ModelPlan plan;
    plan.active_skills.assign(live.begin(), live.end());
    plan.pressure_source_terms.assign(sources.begin(), sources.end());
    plan.pressure_sink_terms.assign(sinks.begin(), sinks.end());
    plan.hydraulic_bc = sinks.empty() ? HydraulicBc::no_flux : HydraulicBc::drained;

    plan.notes.push_back(fmt::format("regime {} (De = {:.4g})", to_string(report.regime), report.deborah));
    for (const auto& e : graph.edges) {
        if (e.status == EdgeStatus::pruned) plan.notes.push_back("pruned " + e.skill_id + ": " + e.reason);
        if (e.status == EdgeStatus::activated) plan.notes.push_back("activated " + e.skill_id + ": " + e.reason);
    }
    plan.notes.insert(plan.notes.end(), graph.notes.begin(), graph.notes.end());
    return plan;
}

ModelPlan naive_plan() {
    ModelPlan p;
    p.active_skills = {"thermal_pressurization"};
    p.pressure_source_terms = {"thermal_pressurization"};
    p.hydraulic_bc = HydraulicBc::no_flux;
    p.notes = {"naive: retrieved model only"};
    return p;
}

ModelPlan completed_plan() {
    ModelPlan p;
    p.active_skills = {"darcy_flow", "thermal_pressurization"};
    p.pressure_source_terms = {"thermal_pressurization"};
    p.pressure_sink_terms = {"darcy_flow"};
    p.hydraulic_bc = HydraulicBc::drained;
    p.notes = {"completed: thermal pressurization with Darcy dissipation"};
    return p;
}

Reasoning reason(const skills::SkillRegistry& registry, const ScenarioSpec& scenario) {
    Reasoning r;
    r.report = compute_regime(scenario);
    r.assembled = assemble_graph(registry, scenario);
    r.graph = complete_mechanisms(prune(r.assembled, scenario), r.report);
    r.plan = emit_plan(r.graph, r.report);
    if (scenario.hydraulic_bc && *scenario.hydraulic_bc != r.plan.hydraulic_bc) {
        r.plan.notes.push_back(fmt::format("hydraulic_bc overridden by scenario: {} -> {}", to_string(r.plan.hydraulic_bc),
                                           to_string(*scenario.hydraulic_bc)));
        r.plan.hydraulic_bc = *scenario.hydraulic_bc;
    }
    return r;
}

namespace {

std::string join(const std::vector<std::string>& items) {
    if (items.empty()) return "(none)";
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
    return out;
}

}  // namespace

std::string format_reasoning(const Reasoning& r) {
    std::string out;
    out += fmt::format("regime: {}\n", to_string(r.report.regime));
    out += fmt::format("deborah: {:.6g}\n", r.report.deborah);
    out += fmt::format("tau_diff_s: {:.6g}\n", r.report.tau_diff);
    out += fmt::format("tau_load_s: {:.6g}\n", r.report.tau_load);
    out += fmt::format("length_m: {:.6g}\n", r.report.length);
    out += fmt::format("mu_Pa_s: {:.6g}\n", r.report.mu_used);
    out += fmt::format("beta_1_per_Pa: {:.6g}\n", r.report.beta_used);
    for (const auto& e : r.graph.edges) {
        if (e.status == EdgeStatus::pruned) out += fmt::format("pruned: {} ({})\n", e.skill_id, e.reason);
    }
    for (const auto& e : r.graph.edges) {
        if (e.status == EdgeStatus::activated) out += fmt::format("activated: {} ({})\n", e.skill_id, e.reason);
    }
    for (const auto& n : r.graph.notes) out += "note: " + n + "\n";
    out += "plan:\n";
    out += "  active_skills: " + join(r.plan.active_skills) + "\n";
    out += "  pressure_sources: " + join(r.plan.pressure_source_terms) + "\n";
    out += "  pressure_sinks: " + join(r.plan.pressure_sink_terms) + "\n";
    out += fmt::format("  hydraulic_bc: {}\n", to_string(r.plan.hydraulic_bc));
    return out;
}

}  // namespace mechcomplete::reasoning
