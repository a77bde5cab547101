#include "mechcomplete/fields.hpp"

#include <cctype>

#include "json.hpp"

#include "mechcomplete/embedded_data.hpp"
#include "mechcomplete/error.hpp"

namespace mechcomplete::skills {

std::string_view to_string(FieldId id) {
    switch (id) {
        case FieldId::temperature: return "temperature";
        case FieldId::pore_pressure: return "pore_pressure";
        case FieldId::effective_stress: return "effective_stress";
        case FieldId::saturation: return "saturation";
        case FieldId::fluid_viscosity: return "fluid_viscosity";
        case FieldId::fluid_flux: return "fluid_flux";
        case FieldId::capillary_pressure: return "capillary_pressure";
        case FieldId::thermal_strain: return "thermal_strain";
        case FieldId::preconsolidation_pressure: return "preconsolidation_pressure";
        case FieldId::deviatoric_stress: return "deviatoric_stress";
        case FieldId::porosity: return "porosity";
    }
    return "?";
}

std::string normalize_name(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_sep = false;
    for (char c : raw) {
        const auto uc = static_cast<unsigned char>(c);
        if (std::isspace(uc) || c == '-' || c == '_') {
            pending_sep = !out.empty();
            continue;
        }
        if (pending_sep) {
            out.push_back('_');
            pending_sep = false;
        }
        out.push_back(static_cast<char>(std::tolower(uc)));
    }
    return out;
}

Ontology::Ontology() {
    for (FieldId id : kAllFields) add(to_string(id), id);
}

void Ontology::add(std::string_view alias, FieldId id) {
    std::string key = normalize_name(alias);
    if (key.empty()) throw ConfigError("ontology: empty alias for '" + std::string(to_string(id)) + "'");
    auto [it, inserted] = aliases_.emplace(key, id);
    if (!inserted && it->second != id) {
        throw ConfigError("ontology: alias '" + std::string(alias) + "' maps to both '" +
                          std::string(to_string(it->second)) + "' and '" + std::string(to_string(id)) + "'");
    }
}

Ontology Ontology::from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("ontology: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("ontology: top level must be an object");

    Ontology ontology;
    for (const auto& [canonical, aliases] : doc.items()) {
        // Keys must already be canonical; an alias key would silently widen the vocabulary.
        auto it = ontology.aliases_.find(normalize_name(canonical));
        if (it == ontology.aliases_.end() || to_string(it->second) != canonical) {
            throw UnknownField(canonical);
        }
        const FieldId id = it->second;
        if (!aliases.is_array()) throw ConfigError("ontology: aliases of '" + canonical + "' must be a list");
        for (const auto& alias : aliases) {
            if (!alias.is_string()) throw ConfigError("ontology: non-string alias under '" + canonical + "'");
            ontology.add(alias.get<std::string>(), id);
        }
    }
    return ontology;
}

const Ontology& Ontology::builtin() {
    static const Ontology ontology = from_json(embedded::ontology_aliases_json());
    return ontology;
}

FieldId Ontology::canonicalize(std::string_view raw_name) const {
    auto it = aliases_.find(normalize_name(raw_name));
    if (it == aliases_.end()) throw UnknownField(std::string(raw_name));
    return it->second;
}

bool Ontology::contains(std::string_view raw_name) const {
    return aliases_.find(normalize_name(raw_name)) != aliases_.end();
}

}  // namespace mechcomplete::skills
