#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mechcomplete/regime.hpp"
#include "mechcomplete/scenario.hpp"
#include "mechcomplete/skills.hpp"

namespace mechcomplete::reasoning {

using skills::FieldId;

/// Allowed transitions: active -> pruned and latent -> activated.
enum class EdgeStatus { active, pruned, latent, activated };
std::string_view to_string(EdgeStatus s);

struct CausalEdge {
    std::string skill_id;
    FieldId from = FieldId::temperature;
    FieldId to = FieldId::temperature;
    EdgeStatus status = EdgeStatus::active;
    std::string reason;

    skills::Provenance provenance = skills::Provenance::retrieved;
    skills::PressureRole role = skills::PressureRole::none;
    std::vector<skills::ApplicabilityPredicate> applicability;

    /// Active or activated.
    bool live() const { return status == EdgeStatus::active || status == EdgeStatus::activated; }

    bool operator==(const CausalEdge&) const = default;
};

struct CausalGraph {
    std::vector<FieldId> nodes;  ///< sorted, unique
    std::vector<CausalEdge> edges;
    std::vector<std::string> notes;

    bool has_node(FieldId f) const;
    std::size_t count(EdgeStatus s) const;

    bool operator==(const CausalGraph&) const = default;
};

/// Fields a scenario supplies directly through its initial state.
const std::vector<FieldId>& scenario_fields();

/// One edge per (skill, output). Retrieved skills start active, intrinsic
/// ones latent. Throws UnsatisfiableInput when a skill input can be
/// neither produced nor read from the scenario.
CausalGraph assemble_graph(const skills::SkillRegistry& registry, const ScenarioSpec& scenario);

/// Deductive pass: failed "requires" predicates and fields forced constant
/// by the scenario (S_r = 1 gives grad P_c = 0) prune active edges.
CausalGraph prune(CausalGraph graph, const ScenarioSpec& scenario);

/// Inductive pass: a drained or transitional regime without a live sink
/// activates the latent sink. Throws MissingPrior when none is available.
CausalGraph complete_mechanisms(CausalGraph graph, const RegimeReport& report);

/// DOT text, colour-coded by status.
std::string export_graph(const CausalGraph& graph);

}  // namespace mechcomplete::reasoning
