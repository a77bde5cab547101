#pragma once

#include <string_view>

// Data files under data/ compiled into the library.
namespace mechcomplete::embedded {

std::string_view ontology_aliases_json();
std::string_view default_skills_json();
std::string_view reference_scenario_json();

}  // namespace mechcomplete::embedded
