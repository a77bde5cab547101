#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>

namespace mechcomplete::skills {

/// Closed vocabulary of field variables. Constitutive skills may only
/// reference members of this set.
enum class FieldId {
    temperature,
    pore_pressure,
    effective_stress,
    saturation,
    fluid_viscosity,
    fluid_flux,
    capillary_pressure,
    thermal_strain,
    preconsolidation_pressure,
    deviatoric_stress,
    porosity,
};

inline constexpr std::array<FieldId, 11> kAllFields = {
    FieldId::temperature,        FieldId::pore_pressure,  FieldId::effective_stress,
    FieldId::saturation,         FieldId::fluid_viscosity, FieldId::fluid_flux,
    FieldId::capillary_pressure, FieldId::thermal_strain, FieldId::preconsolidation_pressure,
    FieldId::deviatoric_stress,  FieldId::porosity,
};

std::string_view to_string(FieldId id);

/// Alias table mapping normalized spellings onto canonical field ids.
class Ontology {
public:
    /// Canonical names only, no aliases.
    Ontology();

    /// Parses `{ "<canonical>": ["alias", ...], ... }`. Keys must be canonical names.
    static Ontology from_json(std::string_view text);

    /// The alias table shipped with the library.
    static const Ontology& builtin();

    /// Throws UnknownField when nothing matches.
    FieldId canonicalize(std::string_view raw_name) const;
    bool contains(std::string_view raw_name) const;

    std::size_t alias_count() const { return aliases_.size(); }

private:
    void add(std::string_view alias, FieldId id);

    std::map<std::string, FieldId, std::less<>> aliases_;
};

/// Lower-case, trim, and fold runs of whitespace, '-' and '_' into a single '_'.
std::string normalize_name(std::string_view raw);

inline FieldId canonicalize(std::string_view raw_name, const Ontology& ontology = Ontology::builtin()) {
    return ontology.canonicalize(raw_name);
}

}  // namespace mechcomplete::skills
