#include "mechcomplete/skills.hpp"

#include <algorithm>
#include <set>

#include "mechcomplete/embedded_data.hpp"
#include "mechcomplete/error.hpp"
#include "mechcomplete/json_support.hpp"

namespace mechcomplete::skills {

namespace {

const std::vector<KernelInfo>& kernel_table() {
    static const std::vector<KernelInfo> table = {
        {KernelId::thermal_pressurization, "thermal_pressurization", PressureRole::source,
         {{"alpha_f", "1/K"}, {"alpha_s", "1/K"}, {"c_f", "1/Pa"}, {"c_phi", "1/Pa"}}},
        {KernelId::capillary_saturation, "capillary_saturation", PressureRole::none,
         {{"gamma", "N/m"}, {"theta", "rad"}}},
        // Darcy and conduction read their coefficients from the scenario material.
        {KernelId::darcy_flow, "darcy_flow", PressureRole::sink, {}},
        {KernelId::heat_conduction, "heat_conduction", PressureRole::none, {}},
        {KernelId::arrhenius_viscosity, "arrhenius_viscosity", PressureRole::none,
         {{"A", "Pa*s"}, {"B", "K"}, {"C", "K"}}},
    };
    return table;
}

std::string path_string(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += '.';
        out += t;
    }
    return out;
}

class SkillParser {
public:
    SkillParser(std::string_view text, std::string_view source, const Ontology& ontology)
        : text_(text), source_(source), ontology_(ontology) {}

    std::vector<ConstitutiveSkill> parse() {
        if (std::all_of(text_.begin(), text_.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); })) {
            return {};
        }
        const Json doc = parse_json_document(text_, source_);
        if (!doc.is_object()) fail({}, "top level must be an object with a 'skills' list");
        if (!doc.contains("skills")) fail({}, "missing top-level 'skills' list");
        const Json& list = doc.at("skills");
        if (!list.is_array()) fail({"skills"}, "'skills' must be a list");

        std::vector<ConstitutiveSkill> out;
        std::set<std::string> seen;
        for (std::size_t i = 0; i < list.size(); ++i) {
            ConstitutiveSkill skill = parse_skill(list[i], i);
            if (!seen.insert(skill.id).second) throw DuplicateId(skill.id);
            out.push_back(std::move(skill));
        }
        return out;
    }

private:
    [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& message) const {
        const std::string where = path.empty() ? std::string() : path_string(path) + ": ";
        throw SchemaError(std::string(source_), line_of_path(text_, path), where + message);
    }

    const Json& require(const Json& obj, const std::vector<std::string>& path, const std::string& key) const {
        if (!obj.contains(key)) {
            auto p = path;
            fail(p, "missing required key '" + key + "'");
        }
        return obj.at(key);
    }

    std::string require_string(const Json& obj, std::vector<std::string> path, const std::string& key) const {
        const Json& v = require(obj, path, key);
        path.push_back(key);
        if (!v.is_string()) fail(path, "expected a string");
        return v.get<std::string>();
    }

    std::vector<FieldId> parse_fields(const Json& obj, std::vector<std::string> path, const std::string& key) const {
        const Json& v = require(obj, path, key);
        path.push_back(key);
        if (!v.is_array()) fail(path, "expected a list of field names");
        std::vector<FieldId> out;
        for (const auto& name : v) {
            if (!name.is_string()) fail(path, "field names must be strings");
            // UnknownField propagates unchanged: it is part of the load contract.
            const FieldId id = ontology_.canonicalize(name.get<std::string>());
            if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
        }
        return out;
    }

    ConstitutiveSkill parse_skill(const Json& entry, std::size_t index) {
        std::vector<std::string> path = {"skills", std::to_string(index)};
        if (!entry.is_object()) fail(path, "skill entries must be objects");

        ConstitutiveSkill skill;
        skill.id = require_string(entry, path, "id");
        if (skill.id.empty()) fail(path, "empty skill id");
        path = {"skills", "id", skill.id};

        const std::string kernel_name = require_string(entry, path, "kernel");
        const auto kernel = kernel_from_name(kernel_name);
        if (!kernel) fail({"skills", "kernel", kernel_name}, "unknown kernel '" + kernel_name + "'");
        skill.kernel = *kernel;

        skill.inputs = parse_fields(entry, path, "inputs");
        skill.outputs = parse_fields(entry, path, "outputs");
        for (FieldId out : skill.outputs) {
            if (std::find(skill.inputs.begin(), skill.inputs.end(), out) != skill.inputs.end()) {
                fail(path, "field '" + std::string(to_string(out)) + "' is both input and output");
            }
        }
        if (skill.outputs.empty()) fail(path, "a skill needs at least one output");

        parse_params(entry, path, skill);
        parse_applicability(entry, path, skill);

        const std::string provenance = entry.contains("provenance") ? require_string(entry, path, "provenance") : "retrieved";
        if (provenance == "retrieved") {
            skill.provenance = Provenance::retrieved;
        } else if (provenance == "intrinsic") {
            skill.provenance = Provenance::intrinsic;
        } else {
            fail(path, "provenance must be 'retrieved' or 'intrinsic'");
        }
        return skill;
    }

    void parse_params(const Json& entry, const std::vector<std::string>& path, ConstitutiveSkill& skill) const {
        const KernelInfo& info = kernel_info(skill.kernel);
        const Json empty = Json::object();
        const Json& params = entry.contains("params") ? entry.at("params") : empty;
        if (!params.is_object()) fail(path, "'params' must be an object");

        for (const auto& [symbol, spec] : params.items()) {
            std::vector<std::string> p = path;
            p.insert(p.end(), {"params", symbol});
            const auto expected = std::find_if(info.parameters.begin(), info.parameters.end(),
                                               [&](const ParameterSpec& s) { return s.symbol == symbol; });
            if (expected == info.parameters.end()) {
                fail(p, "kernel '" + std::string(info.name) + "' has no parameter '" + symbol + "'");
            }
            if (!spec.is_object() || !spec.contains("value") || !spec.contains("unit")) {
                fail(p, "parameters are {\"value\": number, \"unit\": string}");
            }
            if (!spec.at("value").is_number()) fail(p, "parameter value must be a number");
            if (!spec.at("unit").is_string()) fail(p, "parameter unit must be a string");
            const std::string unit = spec.at("unit").get<std::string>();
            if (unit != expected->unit) {
                fail(p, "unit '" + unit + "' does not match expected '" + std::string(expected->unit) + "'");
            }
            skill.params.emplace(symbol, Parameter{spec.at("value").get<double>(), unit});
        }
        for (const auto& s : info.parameters) {
            if (!skill.params.contains(std::string(s.symbol))) {
                fail(path, "kernel '" + std::string(info.name) + "' requires parameter '" + std::string(s.symbol) + "'");
            }
        }
    }

    void parse_applicability(const Json& entry, const std::vector<std::string>& path, ConstitutiveSkill& skill) const {
        if (!entry.contains("applicability")) return;
        const Json& list = entry.at("applicability");
        std::vector<std::string> p = path;
        p.push_back("applicability");
        if (!list.is_array()) fail(p, "'applicability' must be a list");

        for (const auto& item : list) {
            if (!item.is_object()) fail(p, "predicates must be objects");
            ApplicabilityPredicate pred;
            const std::string kind = require_string(item, p, "predicate");
            if (kind == "requires") {
                pred.kind = PredicateKind::require;
            } else if (kind == "assumes") {
                pred.kind = PredicateKind::assume;
            } else {
                fail(p, "predicate must be 'requires' or 'assumes', got '" + kind + "'");
            }

            const std::string subject = require_string(item, p, "field");
            if (subject == "regime") {
                pred.subject = Descriptor::regime;
            } else if (subject == "phase") {
                pred.subject = Descriptor::phase;
            } else {
                pred.subject = ontology_.canonicalize(subject);
            }

            const std::string op = require_string(item, p, "op");
            if (op == "==") pred.op = CompareOp::eq;
            else if (op == "!=") pred.op = CompareOp::ne;
            else if (op == "<") pred.op = CompareOp::lt;
            else if (op == "<=") pred.op = CompareOp::le;
            else if (op == ">") pred.op = CompareOp::gt;
            else if (op == ">=") pred.op = CompareOp::ge;
            else fail(p, "unknown comparison '" + op + "'");

            const Json& value = require(item, p, "value");
            const bool descriptor = std::holds_alternative<Descriptor>(pred.subject);
            if (descriptor) {
                if (!value.is_string()) fail(p, "'" + subject + "' predicates compare against a string");
                if (pred.op != CompareOp::eq && pred.op != CompareOp::ne) fail(p, "'" + subject + "' supports only == and !=");
                pred.value = value.get<std::string>();
            } else {
                if (!value.is_number()) fail(p, "field predicates compare against a number");
                pred.value = value.get<double>();
            }
            skill.applicability.push_back(std::move(pred));
        }
    }

    std::string_view text_;
    std::string_view source_;
    const Ontology& ontology_;
};

}  // namespace

const KernelInfo& kernel_info(KernelId id) {
    for (const auto& info : kernel_table()) {
        if (info.id == id) return info;
    }
    throw Error("kernel table incomplete");
}

std::optional<KernelId> kernel_from_name(std::string_view name) {
    for (const auto& info : kernel_table()) {
        if (info.name == name) return info.id;
    }
    return std::nullopt;
}

std::string_view to_string(KernelId id) { return kernel_info(id).name; }

std::string_view to_string(PressureRole role) {
    switch (role) {
        case PressureRole::none: return "none";
        case PressureRole::source: return "source";
        case PressureRole::sink: return "sink";
    }
    return "?";
}

std::string_view to_string(Provenance p) { return p == Provenance::retrieved ? "retrieved" : "intrinsic"; }

bool compare(double lhs, CompareOp op, double rhs) {
    switch (op) {
        case CompareOp::eq: return lhs == rhs;
        case CompareOp::ne: return lhs != rhs;
        case CompareOp::lt: return lhs < rhs;
        case CompareOp::le: return lhs <= rhs;
        case CompareOp::gt: return lhs > rhs;
        case CompareOp::ge: return lhs >= rhs;
    }
    return false;
}

bool compare(std::string_view lhs, CompareOp op, std::string_view rhs) {
    switch (op) {
        case CompareOp::eq: return lhs == rhs;
        case CompareOp::ne: return lhs != rhs;
        default: return false;
    }
}

std::string describe(const ApplicabilityPredicate& p) {
    std::string subject = std::holds_alternative<FieldId>(p.subject)
                              ? std::string(to_string(std::get<FieldId>(p.subject)))
                              : (std::get<Descriptor>(p.subject) == Descriptor::regime ? "regime" : "phase");
    static constexpr std::string_view ops[] = {"==", "!=", "<", "<=", ">", ">="};
    std::string value;
    if (std::holds_alternative<double>(p.value)) {
        value = Json(std::get<double>(p.value)).dump();
    } else {
        value = std::get<std::string>(p.value);
    }
    return subject + " " + std::string(ops[static_cast<int>(p.op)]) + " " + value;
}

bool ConstitutiveSkill::produces(FieldId f) const {
    return std::find(outputs.begin(), outputs.end(), f) != outputs.end();
}

SkillRegistry::SkillRegistry(std::vector<ConstitutiveSkill> skills, const Ontology& ontology)
    : skills_(std::move(skills)), ontology_(&ontology) {
    std::sort(skills_.begin(), skills_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < skills_.size(); ++i) {
        if (skills_[i].id == skills_[i - 1].id) throw DuplicateId(skills_[i].id);
    }
}

const ConstitutiveSkill* SkillRegistry::find(std::string_view id) const {
    auto it = std::lower_bound(skills_.begin(), skills_.end(), id,
                               [](const ConstitutiveSkill& s, std::string_view key) { return s.id < key; });
    return it != skills_.end() && it->id == id ? &*it : nullptr;
}

std::size_t SkillRegistry::count(Provenance p) const {
    return static_cast<std::size_t>(
        std::count_if(skills_.begin(), skills_.end(), [p](const auto& s) { return s.provenance == p; }));
}

std::vector<ConstitutiveSkill> intrinsic_priors() {
    ConstitutiveSkill darcy;
    darcy.id = "darcy_flow";
    darcy.kernel = KernelId::darcy_flow;
    darcy.inputs = {FieldId::fluid_viscosity};
    darcy.outputs = {FieldId::pore_pressure};
    darcy.provenance = Provenance::intrinsic;

    ConstitutiveSkill conduction;
    conduction.id = "heat_conduction";
    conduction.kernel = KernelId::heat_conduction;
    conduction.outputs = {FieldId::temperature};
    conduction.provenance = Provenance::intrinsic;

    // Vogel constants for liquid water.
    ConstitutiveSkill viscosity;
    viscosity.id = "arrhenius_viscosity";
    viscosity.kernel = KernelId::arrhenius_viscosity;
    viscosity.params = {{"A", {2.414e-5, "Pa*s"}}, {"B", {247.8, "K"}}, {"C", {140.0, "K"}}};
    viscosity.inputs = {FieldId::temperature};
    viscosity.outputs = {FieldId::fluid_viscosity};
    viscosity.provenance = Provenance::intrinsic;

    return {std::move(darcy), std::move(conduction), std::move(viscosity)};
}

std::vector<ConstitutiveSkill> parse_skill_file(std::string_view text, std::string_view source, const Ontology& ontology) {
    return SkillParser(text, source, ontology).parse();
}

SkillRegistry load_registry_from_text(std::string_view text, std::string_view source, const Ontology& ontology) {
    auto skills = parse_skill_file(text, source, ontology);
    for (auto& prior : intrinsic_priors()) skills.push_back(std::move(prior));
    return SkillRegistry(std::move(skills), ontology);
}

SkillRegistry load_registry(const std::filesystem::path& path, const Ontology& ontology) {
    const std::string text = read_text_file(path.string());
    return load_registry_from_text(text, path.string(), ontology);
}

SkillRegistry make_registry(std::vector<ConstitutiveSkill> skills, const Ontology& ontology) {
    return SkillRegistry(std::move(skills), ontology);
}

const SkillRegistry& default_registry() {
    static const SkillRegistry registry = load_registry_from_text(embedded::default_skills_json(), "<default skills>");
    return registry;
}

std::vector<ConstitutiveSkill> query_by_output(const SkillRegistry& registry, FieldId field) {
    std::vector<ConstitutiveSkill> out;
    for (const auto& s : registry.skills()) {
        if (s.produces(field)) out.push_back(s);
    }
    return out;
}

}  // namespace mechcomplete::skills
