#include "mechcomplete/graph.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include <fmt/format.h>

#include "mechcomplete/error.hpp"

namespace mechcomplete::reasoning {

using skills::ApplicabilityPredicate;
using skills::Descriptor;
using skills::PredicateKind;
using skills::PressureRole;

std::string_view to_string(EdgeStatus s) {
    switch (s) {
        case EdgeStatus::active: return "active";
        case EdgeStatus::pruned: return "pruned";
        case EdgeStatus::latent: return "latent";
        case EdgeStatus::activated: return "activated";
    }
    return "?";
}

bool CausalGraph::has_node(FieldId f) const { return std::binary_search(nodes.begin(), nodes.end(), f); }

std::size_t CausalGraph::count(EdgeStatus s) const {
    return static_cast<std::size_t>(
        std::count_if(edges.begin(), edges.end(), [s](const CausalEdge& e) { return e.status == s; }));
}

const std::vector<FieldId>& scenario_fields() {
    static const std::vector<FieldId> fields = {
        FieldId::temperature,       FieldId::pore_pressure,             FieldId::effective_stress,
        FieldId::saturation,        FieldId::preconsolidation_pressure, FieldId::deviatoric_stress,
    };
    return fields;
}

namespace {

std::optional<double> scenario_value(FieldId f, const ScenarioSpec& s) {
    switch (f) {
        case FieldId::temperature: return s.initial.T;
        case FieldId::pore_pressure: return s.initial.u_w;
        case FieldId::effective_stress: return s.initial.p_eff;
        case FieldId::saturation: return s.initial.S_r;
        case FieldId::preconsolidation_pressure: return s.material.p_c0;
        case FieldId::deviatoric_stress: return s.initial.q;
        default: return std::nullopt;
    }
}

// nullopt when the scenario does not determine the predicate.
std::optional<bool> evaluate(const ApplicabilityPredicate& p, const ScenarioSpec& s, Regime regime) {
    if (std::holds_alternative<Descriptor>(p.subject)) {
        const std::string lhs =
            std::get<Descriptor>(p.subject) == Descriptor::regime ? std::string(to_string(regime)) : s.phase();
        if (!std::holds_alternative<std::string>(p.value)) return std::nullopt;
        return skills::compare(lhs, p.op, std::get<std::string>(p.value));
    }
    const auto value = scenario_value(std::get<FieldId>(p.subject), s);
    if (!value || !std::holds_alternative<double>(p.value)) return std::nullopt;
    return skills::compare(*value, p.op, std::get<double>(p.value));
}

std::optional<bool> evaluate_against(const ApplicabilityPredicate& p, Regime regime) {
    if (!std::holds_alternative<Descriptor>(p.subject) || std::get<Descriptor>(p.subject) != Descriptor::regime) {
        return std::nullopt;
    }
    if (!std::holds_alternative<std::string>(p.value)) return std::nullopt;
    return skills::compare(to_string(regime), p.op, std::get<std::string>(p.value));
}

void add_note(CausalGraph& g, std::string note) {
    if (std::find(g.notes.begin(), g.notes.end(), note) == g.notes.end()) g.notes.push_back(std::move(note));
}

std::string dot_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace

CausalGraph assemble_graph(const skills::SkillRegistry& registry, const ScenarioSpec& scenario) {
    std::set<FieldId> given;
    for (FieldId f : scenario_fields()) {
        if (scenario_value(f, scenario)) given.insert(f);
    }
    std::set<FieldId> available = given;
    const auto& all = registry.skills();

    // Fixed point over producers; order-independent because the set only grows.
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& skill : all) {
            const bool ready = std::all_of(skill.inputs.begin(), skill.inputs.end(),
                                           [&](FieldId f) { return available.count(f) > 0; });
            if (!ready) continue;
            for (FieldId out : skill.outputs) grew |= available.insert(out).second;
        }
    }

    CausalGraph g;
    std::set<FieldId> nodes = given;
    for (const auto& skill : all) {
        for (FieldId in : skill.inputs) {
            if (!available.count(in)) {
                throw UnsatisfiableInput(fmt::format("skill '{}' needs '{}', which no skill produces and the scenario does not supply",
                                                     skill.id, skills::to_string(in)));
            }
        }
        const FieldId from = skill.inputs.empty() ? FieldId{} : skill.inputs.front();
        for (FieldId out : skill.outputs) {
            CausalEdge e;
            e.skill_id = skill.id;
            e.from = skill.inputs.empty() ? out : from;
            e.to = out;
            e.provenance = skill.provenance;
            e.role = skill.pressure_role();
            e.applicability = skill.applicability;
            e.status = skill.provenance == skills::Provenance::retrieved ? EdgeStatus::active : EdgeStatus::latent;
            nodes.insert(e.from);
            nodes.insert(e.to);
            g.edges.push_back(std::move(e));
        }
    }
    g.nodes.assign(nodes.begin(), nodes.end());
    return g;
}

CausalGraph prune(CausalGraph graph, const ScenarioSpec& scenario) {
    const Regime regime = compute_regime(scenario).regime;
    for (auto& e : graph.edges) {
        if (e.status != EdgeStatus::active) continue;
        for (const auto& p : e.applicability) {
            if (p.kind != PredicateKind::require) continue;
            const auto holds = evaluate(p, scenario, regime);
            if (holds && !*holds) {
                e.status = EdgeStatus::pruned;
                e.reason = "requires " + skills::describe(p) + ", violated by the scenario";
                break;
            }
        }
        if (e.status != EdgeStatus::active) continue;
        if (e.to == FieldId::capillary_pressure && scenario.initial.S_r >= 1.0) {
            e.status = EdgeStatus::pruned;
            e.reason = "full saturation (S_r = 1) forces grad P_c = 0; capillary term is redundant";
        }
    }
    return graph;
}

CausalGraph complete_mechanisms(CausalGraph graph, const RegimeReport& report) {
    for (const auto& e : graph.edges) {
        if (!e.live()) continue;
        for (const auto& p : e.applicability) {
            if (p.kind != PredicateKind::assume) continue;
            const auto holds = evaluate_against(p, report.regime);
            if (holds && !*holds) {
                add_note(graph, fmt::format("{} assumes {} but the detected regime is {} (De = {:.3g}): mechanism deficit",
                                            e.skill_id, skills::describe(p), to_string(report.regime), report.deborah));
            }
        }
    }

    if (report.regime == Regime::undrained) {
        add_note(graph, fmt::format("undrained regime (De = {:.3g}): latent sinks stay latent", report.deborah));
        return graph;
    }

    const bool has_sink = std::any_of(graph.edges.begin(), graph.edges.end(),
                                      [](const CausalEdge& e) { return e.live() && e.role == PressureRole::sink; });
    if (has_sink) return graph;

    bool activated = false;
    for (auto& e : graph.edges) {
        if (e.status != EdgeStatus::latent || e.role != PressureRole::sink) continue;
        e.status = EdgeStatus::activated;
        e.reason = report.regime == Regime::drained
                       ? fmt::format("drained regime (De = {:.3g}) needs a diffusive dissipation sink", report.deborah)
                       : fmt::format("transitional regime (De = {:.3g}): sink activated conservatively", report.deborah);
        activated = true;
    }
    if (!activated) {
        throw MissingPrior(fmt::format("{} regime (De = {:.3g}) requires a pore-pressure sink, but the graph has no latent sink",
                                       to_string(report.regime), report.deborah));
    }
    if (report.regime == Regime::transitional) {
        add_note(graph, "transitional regime: dissipation included as the conservative choice");
    }
    return graph;
}

std::string export_graph(const CausalGraph& graph) {
    std::string out = "digraph causal_graph {\n";
    out += "  rankdir=LR;\n";
    out += "  node [shape=box, fontname=\"Helvetica\"];\n";
    for (FieldId n : graph.nodes) out += fmt::format("  \"{}\";\n", skills::to_string(n));
    for (const auto& e : graph.edges) {
        std::string style;
        switch (e.status) {
            case EdgeStatus::active: style = "color=\"darkblue\""; break;
            case EdgeStatus::pruned: style = "color=\"green\", style=\"dotted\""; break;
            case EdgeStatus::latent: style = "color=\"orange\", style=\"dashed\""; break;
            case EdgeStatus::activated: style = "color=\"orange\", style=\"bold\""; break;
        }
        out += fmt::format("  \"{}\" -> \"{}\" [label=\"{}\", class=\"{}\", {}", skills::to_string(e.from),
                           skills::to_string(e.to), e.skill_id, to_string(e.status), style);
        if (!e.reason.empty()) out += fmt::format(", tooltip=\"{}\"", dot_escape(e.reason));
        out += "];\n";
    }
    out += "}\n";
    return out;
}

}  // namespace mechcomplete::reasoning
