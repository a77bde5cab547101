#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mechcomplete/fields.hpp"

namespace mechcomplete::skills {

/// Built-in evaluation kernels a skill can bind to. The set is closed;
/// skill files select one by name.
enum class KernelId {
    thermal_pressurization,
    capillary_saturation,
    darcy_flow,
    heat_conduction,
    arrhenius_viscosity,
};

/// How a kernel contributes to the pore-pressure balance.
enum class PressureRole { none, source, sink };

struct ParameterSpec {
    std::string_view symbol;
    std::string_view unit;
};

struct KernelInfo {
    KernelId id;
    std::string_view name;
    PressureRole role;
    std::vector<ParameterSpec> parameters;
};

const KernelInfo& kernel_info(KernelId id);
/// Throws SchemaError-free ConfigError on unknown names; callers add file context.
std::optional<KernelId> kernel_from_name(std::string_view name);
std::string_view to_string(KernelId id);
std::string_view to_string(PressureRole role);

struct Parameter {
    double value = 0.0;
    std::string unit;

    bool operator==(const Parameter&) const = default;
};

enum class Provenance { retrieved, intrinsic };
std::string_view to_string(Provenance p);

/// "requires" predicates are hard validity constraints (false => prune).
/// "assumes" predicates record an implicit modelling assumption that the
/// reasoning pass checks against the detected regime.
enum class PredicateKind { require, assume };
enum class CompareOp { eq, ne, lt, le, gt, ge };

/// Scenario descriptors that are not field variables.
enum class Descriptor { regime, phase };

using PredicateSubject = std::variant<FieldId, Descriptor>;
using PredicateValue = std::variant<double, std::string>;

struct ApplicabilityPredicate {
    PredicateKind kind = PredicateKind::require;
    PredicateSubject subject = FieldId::saturation;
    CompareOp op = CompareOp::eq;
    PredicateValue value = 0.0;

    bool operator==(const ApplicabilityPredicate&) const = default;
};

std::string describe(const ApplicabilityPredicate& p);
bool compare(double lhs, CompareOp op, double rhs);
bool compare(std::string_view lhs, CompareOp op, std::string_view rhs);

struct ConstitutiveSkill {
    std::string id;
    KernelId kernel = KernelId::darcy_flow;
    std::map<std::string, Parameter> params;
    std::vector<FieldId> inputs;
    std::vector<FieldId> outputs;
    std::vector<ApplicabilityPredicate> applicability;
    Provenance provenance = Provenance::retrieved;

    bool produces(FieldId f) const;
    PressureRole pressure_role() const { return kernel_info(kernel).role; }

    bool operator==(const ConstitutiveSkill&) const = default;
};

/// Immutable collection of skills, sorted by id.
class SkillRegistry {
public:
    SkillRegistry() = default;
    SkillRegistry(std::vector<ConstitutiveSkill> skills, const Ontology& ontology);

    const std::vector<ConstitutiveSkill>& skills() const { return skills_; }
    const ConstitutiveSkill* find(std::string_view id) const;
    const Ontology& ontology() const { return *ontology_; }
    std::size_t size() const { return skills_.size(); }
    std::size_t count(Provenance p) const;

private:
    std::vector<ConstitutiveSkill> skills_;
    const Ontology* ontology_ = &Ontology::builtin();
};

/// Darcy flow, heat conduction and Arrhenius-type viscosity.
std::vector<ConstitutiveSkill> intrinsic_priors();

/// Parses a skill document; `source` names it in error messages.
std::vector<ConstitutiveSkill> parse_skill_file(std::string_view text, std::string_view source,
                                                const Ontology& ontology = Ontology::builtin());

/// File skills plus the intrinsic priors. An empty (zero-byte) document is allowed.
SkillRegistry load_registry(const std::filesystem::path& path, const Ontology& ontology = Ontology::builtin());
SkillRegistry load_registry_from_text(std::string_view text, std::string_view source,
                                      const Ontology& ontology = Ontology::builtin());
/// Registry with only the given skills; no priors are added.
SkillRegistry make_registry(std::vector<ConstitutiveSkill> skills, const Ontology& ontology = Ontology::builtin());

/// The literature library shipped with the project plus the intrinsic priors.
const SkillRegistry& default_registry();

/// Skills whose outputs contain `field`, sorted by id.
std::vector<ConstitutiveSkill> query_by_output(const SkillRegistry& registry, FieldId field);

}  // namespace mechcomplete::skills
