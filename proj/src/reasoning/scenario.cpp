#include "mechcomplete/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "mechcomplete/embedded_data.hpp"
#include "mechcomplete/error.hpp"

namespace mechcomplete::reasoning {

std::string_view to_string(HydraulicBc bc) { return bc == HydraulicBc::drained ? "drained" : "no_flux"; }

namespace {

enum class Dim {
    length,
    pressure,
    inv_pressure,
    inv_temperature,
    temperature,
    kelvin_interval,
    temperature_rate,
    time,
    area,
    viscosity,
    diffusivity,
    dimensionless,
    conductivity,
    heat_capacity,
    pressure_per_temperature,
};

struct UnitRule {
    std::string_view unit;
    double scale;
    double offset;
};

const std::vector<UnitRule>& unit_rules(Dim d) {
    static const std::map<Dim, std::vector<UnitRule>> rules = {
        {Dim::length, {{"m", 1.0, 0.0}, {"cm", 1e-2, 0.0}, {"mm", 1e-3, 0.0}}},
        {Dim::pressure, {{"Pa", 1.0, 0.0}, {"kPa", 1e3, 0.0}, {"MPa", 1e6, 0.0}, {"GPa", 1e9, 0.0}}},
        {Dim::inv_pressure, {{"1/Pa", 1.0, 0.0}, {"1/MPa", 1e-6, 0.0}, {"1/GPa", 1e-9, 0.0}}},
        {Dim::inv_temperature, {{"1/K", 1.0, 0.0}, {"1/degC", 1.0, 0.0}}},
        {Dim::temperature, {{"K", 1.0, 0.0}, {"degC", 1.0, 273.15}}},
        {Dim::kelvin_interval, {{"K", 1.0, 0.0}}},
        {Dim::temperature_rate, {{"K/s", 1.0, 0.0}, {"degC/s", 1.0, 0.0}}},
        {Dim::time, {{"s", 1.0, 0.0}, {"min", 60.0, 0.0}}},
        {Dim::area, {{"m^2", 1.0, 0.0}}},
        {Dim::viscosity, {{"Pa*s", 1.0, 0.0}, {"mPa*s", 1e-3, 0.0}}},
        {Dim::diffusivity, {{"m^2/s", 1.0, 0.0}}},
        {Dim::dimensionless, {{"-", 1.0, 0.0}, {"", 1.0, 0.0}}},
        {Dim::conductivity, {{"W/(m*K)", 1.0, 0.0}}},
        {Dim::heat_capacity, {{"J/(kg*K)", 1.0, 0.0}}},
        {Dim::pressure_per_temperature, {{"Pa/K", 1.0, 0.0}, {"MPa/K", 1e6, 0.0}}},
    };
    return rules.at(d);
}

enum class Kind { quantity, number, integer, string, number_list };

struct Entry {
    std::string path;
    Kind kind;
    Dim dim = Dim::dimensionless;
    bool required = false;
    std::function<void(ScenarioSpec&, const Json&, double)> apply;
};

using Setter = std::function<void(ScenarioSpec&, double)>;

Entry quantity(std::string path, Dim dim, bool required, Setter set) {
    return {std::move(path), Kind::quantity, dim, required,
            [set = std::move(set)](ScenarioSpec& s, const Json&, double v) { set(s, v); }};
}

Entry number(std::string path, Setter set) {
    return {std::move(path), Kind::number, Dim::dimensionless, false,
            [set = std::move(set)](ScenarioSpec& s, const Json&, double v) { set(s, v); }};
}

Entry integer(std::string path, std::function<void(ScenarioSpec&, int)> set) {
    return {std::move(path), Kind::integer, Dim::dimensionless, false,
            [set = std::move(set)](ScenarioSpec& s, const Json& j, double) { set(s, j.get<int>()); }};
}

Entry string_entry(std::string path, std::function<void(ScenarioSpec&, const std::string&)> set) {
    return {std::move(path), Kind::string, Dim::dimensionless, false,
            [set = std::move(set)](ScenarioSpec& s, const Json& j, double) { set(s, j.get<std::string>()); }};
}

const std::vector<Entry>& schema() {
    using S = ScenarioSpec;
    static const std::vector<Entry> entries = [] {
        std::vector<Entry> e;
        e.push_back(string_entry("name", [](S& s, const std::string& v) { s.name = v; }));
        e.push_back(string_entry("description", [](S&, const std::string&) {}));

        e.push_back(quantity("geometry.radius", Dim::length, true, [](S& s, double v) { s.geometry.radius = v; }));
        e.push_back(quantity("geometry.height", Dim::length, true, [](S& s, double v) { s.geometry.height = v; }));

        e.push_back(quantity("material.M", Dim::dimensionless, true, [](S& s, double v) { s.material.M = v; }));
        e.push_back(quantity("material.p_c0", Dim::pressure, true, [](S& s, double v) { s.material.p_c0 = v; }));
        e.push_back(quantity("material.lambda_c", Dim::dimensionless, true, [](S& s, double v) { s.material.lambda_c = v; }));
        e.push_back(quantity("material.kappa_c", Dim::dimensionless, true, [](S& s, double v) { s.material.kappa_c = v; }));
        e.push_back(quantity("material.e0", Dim::dimensionless, true, [](S& s, double v) { s.material.e0 = v; }));
        e.push_back(quantity("material.nu", Dim::dimensionless, true, [](S& s, double v) { s.material.nu = v; }));
        e.push_back(quantity("material.k", Dim::area, true, [](S& s, double v) { s.material.k = v; }));
        e.push_back(quantity("material.c_f", Dim::inv_pressure, true, [](S& s, double v) { s.material.c_f = v; }));
        e.push_back(quantity("material.c_s", Dim::inv_pressure, true, [](S& s, double v) { s.material.c_s = v; }));
        e.push_back(quantity("material.c_phi", Dim::inv_pressure, false, [](S& s, double v) { s.material.c_phi = v; }));
        e.push_back(quantity("material.S_s", Dim::inv_pressure, true, [](S& s, double v) { s.material.S_s = v; }));
        e.push_back(quantity("material.lambda_T", Dim::conductivity, true, [](S& s, double v) { s.material.lambda_T = v; }));
        e.push_back(quantity("material.C_p", Dim::heat_capacity, true, [](S& s, double v) { s.material.C_p = v; }));
        e.push_back(quantity("material.alpha_s", Dim::inv_temperature, true, [](S& s, double v) { s.material.alpha_s = v; }));
        e.push_back(quantity("material.alpha_th", Dim::diffusivity, true, [](S& s, double v) { s.material.alpha_th = v; }));

        e.push_back(string_entry("fluid.viscosity.model", [](S&, const std::string& v) {
            if (v != "vogel") throw ConfigError("fluid.viscosity.model: only 'vogel' is available");
        }));
        e.push_back(quantity("fluid.viscosity.A", Dim::viscosity, false, [](S& s, double v) { s.fluid.viscosity.A = v; }));
        e.push_back(quantity("fluid.viscosity.B", Dim::kelvin_interval, false, [](S& s, double v) { s.fluid.viscosity.B = v; }));
        e.push_back(quantity("fluid.viscosity.C", Dim::temperature, false, [](S& s, double v) { s.fluid.viscosity.C = v; }));
        e.push_back(string_entry("fluid.alpha_f.model", [](S&, const std::string& v) {
            if (v != "constant" && v != "linear") throw ConfigError("fluid.alpha_f.model: expected 'constant' or 'linear'");
        }));
        e.push_back(quantity("fluid.alpha_f.value", Dim::inv_temperature, false, [](S& s, double v) { s.fluid.alpha_f = v; }));
        e.push_back(quantity("fluid.alpha_f.ramp", Dim::inv_temperature, false, [](S& s, double v) { s.fluid.alpha_f_ramp = v; }));
        e.push_back(quantity("fluid.storage_ramp", Dim::inv_temperature, false, [](S& s, double v) { s.fluid.storage_ramp = v; }));
        e.push_back(quantity("fluid.lambda_tp_override", Dim::pressure_per_temperature, false,
                             [](S& s, double v) { s.fluid.lambda_tp_override = v; }));

        e.push_back(quantity("initial.p_eff", Dim::pressure, true, [](S& s, double v) { s.initial.p_eff = v; }));
        e.push_back(quantity("initial.q", Dim::pressure, true, [](S& s, double v) { s.initial.q = v; }));
        e.push_back(quantity("initial.u_w", Dim::pressure, true, [](S& s, double v) { s.initial.u_w = v; }));
        e.push_back(quantity("initial.T", Dim::temperature, true, [](S& s, double v) { s.initial.T = v; }));
        e.push_back(quantity("initial.S_r", Dim::dimensionless, true, [](S& s, double v) { s.initial.S_r = v; }));

        e.push_back(quantity("loading.heating_rate", Dim::temperature_rate, true, [](S& s, double v) { s.loading.heating_rate = v; }));
        e.push_back(quantity("loading.t_end", Dim::time, true, [](S& s, double v) { s.loading.t_end = v; }));
        e.push_back(quantity("loading.sigma_radial", Dim::pressure, true, [](S& s, double v) { s.loading.sigma_radial = v; }));
        e.push_back(quantity("loading.sigma_axial", Dim::pressure, true, [](S& s, double v) { s.loading.sigma_axial = v; }));
        e.push_back(quantity("loading.T_max", Dim::temperature, false, [](S& s, double v) { s.loading.T_max = v; }));

        e.push_back(string_entry("hydraulic_bc", [](S& s, const std::string& v) {
            if (v == "drained") s.hydraulic_bc = HydraulicBc::drained;
            else if (v == "no_flux") s.hydraulic_bc = HydraulicBc::no_flux;
            else throw ConfigError("hydraulic_bc: expected 'drained' or 'no_flux'");
        }));
        e.push_back(quantity("characteristic_length", Dim::length, false, [](S& s, double v) { s.characteristic_length = v; }));
        e.push_back(number("reasoning.De_lo", [](S& s, double v) { s.thresholds.De_lo = v; }));
        e.push_back(number("reasoning.De_hi", [](S& s, double v) { s.thresholds.De_hi = v; }));

        e.push_back(quantity("solver.dt", Dim::time, false, [](S& s, double v) { s.solver.dt = v; }));
        e.push_back(integer("solver.nr", [](S& s, int v) { s.solver.nr = v; }));
        e.push_back(integer("solver.nz", [](S& s, int v) { s.solver.nz = v; }));
        e.push_back(number("solver.skempton_B", [](S& s, double v) { s.solver.skempton_B = v; }));
        e.push_back(number("solver.hvorslev_ratio", [](S& s, double v) { s.solver.hvorslev_ratio = v; }));
        e.push_back(number("solver.sor_omega", [](S& s, double v) { s.solver.sor_omega = v; }));
        e.push_back(quantity("solver.residual_tol", Dim::pressure, false, [](S& s, double v) { s.solver.residual_tol = v; }));
        e.push_back(integer("solver.max_sweeps", [](S& s, int v) { s.solver.max_sweeps = v; }));
        e.push_back(Entry{"solver.snapshot_times", Kind::number_list, Dim::time, false,
                          [](S& s, const Json& j, double) { s.solver.snapshot_times = j.get<std::vector<double>>(); }});
        return e;
    }();
    return entries;
}

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : path) {
        if (c == '.') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

const Entry* find_entry(std::string_view path) {
    for (const auto& e : schema()) {
        if (e.path == path) return &e;
    }
    return nullptr;
}

bool is_schema_prefix(std::string_view prefix) {
    const std::string with_dot = std::string(prefix) + ".";
    return std::any_of(schema().begin(), schema().end(),
                       [&](const Entry& e) { return e.path.compare(0, with_dot.size(), with_dot) == 0; });
}

class ScenarioParser {
public:
    ScenarioParser(std::string_view text, std::string_view source) : text_(text), source_(source) {}

    ScenarioSpec parse(const std::vector<Override>& overrides) {
        Json doc = parse_json_document(text_, source_);
        if (!doc.is_object()) fail("", "top level must be an object");
        for (const auto& ov : overrides) apply_override(doc, ov);

        check_keys(doc, "");

        ScenarioSpec spec;
        bool c_phi_given = false;
        for (const auto& entry : schema()) {
            const Json* node = lookup(doc, entry.path);
            if (!node) {
                if (entry.required) fail(entry.path, "missing required entry '" + entry.path + "'");
                continue;
            }
            if (entry.path == "material.c_phi") c_phi_given = true;
            try {
                read_entry(spec, entry, *node);
            } catch (const SchemaError&) {
                throw;
            } catch (const ConfigError& e) {
                fail(entry.path, e.what());
            }
        }
        if (!c_phi_given) spec.material.c_phi = spec.material.c_s;

        try {
            spec.validate();
        } catch (const SchemaError&) {
            throw;
        } catch (const ConfigError& e) {
            throw SchemaError(std::string(source_), 0, e.what());
        }
        return spec;
    }

private:
    [[noreturn]] void fail(const std::string& path, const std::string& message) const {
        throw SchemaError(std::string(source_), line_of_path(text_, split_path(path)), message);
    }

    static const Json* lookup(const Json& doc, const std::string& path) {
        const Json* node = &doc;
        for (const auto& token : split_path(path)) {
            if (!node->is_object() || !node->contains(token)) return nullptr;
            node = &node->at(token);
        }
        return node;
    }

    void check_keys(const Json& node, const std::string& prefix) const {
        for (const auto& [key, value] : node.items()) {
            const std::string path = prefix.empty() ? key : prefix + "." + key;
            if (const Entry* e = find_entry(path)) {
                if (e->kind == Kind::quantity) {
                    if (!value.is_object()) fail(path, "'" + path + "' must be {\"value\": number, \"unit\": string}");
                    for (const auto& [sub, _] : value.items()) {
                        if (sub != "value" && sub != "unit") fail(path, "unexpected key '" + sub + "' in '" + path + "'");
                    }
                }
                continue;
            }
            if (is_schema_prefix(path)) {
                if (!value.is_object()) fail(path, "'" + path + "' must be an object");
                check_keys(value, path);
                continue;
            }
            fail(path, "unknown entry '" + path + "'");
        }
    }

    void read_entry(ScenarioSpec& spec, const Entry& entry, const Json& node) const {
        switch (entry.kind) {
            case Kind::quantity: {
                if (!node.contains("value") || !node.at("value").is_number()) {
                    fail(entry.path, "'" + entry.path + "' needs a numeric 'value'");
                }
                if (!node.contains("unit") || !node.at("unit").is_string()) {
                    fail(entry.path, "'" + entry.path + "' needs a 'unit' string");
                }
                const std::string unit = node.at("unit").get<std::string>();
                const auto& rules = unit_rules(entry.dim);
                auto rule = std::find_if(rules.begin(), rules.end(), [&](const UnitRule& r) { return r.unit == unit; });
                if (rule == rules.end()) {
                    std::string allowed;
                    for (const auto& r : rules) allowed += (allowed.empty() ? "" : ", ") + std::string(r.unit.empty() ? "\"\"" : r.unit);
                    fail(entry.path, "'" + entry.path + "': unit '" + unit + "' not accepted (expected one of " + allowed + ")");
                }
                const double v = node.at("value").get<double>() * rule->scale + rule->offset;
                entry.apply(spec, node, v);
                break;
            }
            case Kind::number:
                if (!node.is_number()) fail(entry.path, "'" + entry.path + "' must be a number");
                entry.apply(spec, node, node.get<double>());
                break;
            case Kind::integer:
                if (!node.is_number_integer()) fail(entry.path, "'" + entry.path + "' must be an integer");
                entry.apply(spec, node, 0.0);
                break;
            case Kind::string:
                if (!node.is_string()) fail(entry.path, "'" + entry.path + "' must be a string");
                entry.apply(spec, node, 0.0);
                break;
            case Kind::number_list:
                if (!node.is_array() || !std::all_of(node.begin(), node.end(), [](const Json& j) { return j.is_number(); })) {
                    fail(entry.path, "'" + entry.path + "' must be a list of numbers");
                }
                entry.apply(spec, node, 0.0);
                break;
        }
    }

    void apply_override(Json& doc, const Override& ov) const {
        std::string path = ov.first;
        std::string field;  // "value" or "unit" when addressed explicitly
        const Entry* entry = find_entry(path);
        if (!entry) {
            for (std::string_view suffix : {".value", ".unit"}) {
                if (path.size() > suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0) {
                    entry = find_entry(path.substr(0, path.size() - suffix.size()));
                    if (entry && entry->kind == Kind::quantity) {
                        field = std::string(suffix.substr(1));
                        path = entry->path;
                        break;
                    }
                    entry = nullptr;
                }
            }
        }
        if (!entry) throw ConfigError("override: unknown scenario entry '" + ov.first + "'");

        Json* node = &doc;
        for (const auto& token : split_path(path)) {
            if (node->is_null()) *node = Json::object();
            if (!node->is_object()) throw ConfigError("override: '" + ov.first + "' crosses a non-object entry");
            node = &(*node)[token];
        }

        const std::string& text = ov.second;
        auto as_number = [&](const std::string& s) {
            std::istringstream in(s);
            double v = 0.0;
            in >> v;
            if (in.fail() || !in.eof()) throw ConfigError("override: '" + ov.first + "' expects a number, got '" + s + "'");
            return v;
        };

        switch (entry->kind) {
            case Kind::quantity: {
                if (!node->is_object()) {
                    *node = Json::object();
                    (*node)["unit"] = std::string(unit_rules(entry->dim).front().unit);
                }
                if (field == "unit") {
                    (*node)["unit"] = text;
                } else {
                    (*node)["value"] = as_number(text);
                    if (!node->contains("unit")) (*node)["unit"] = std::string(unit_rules(entry->dim).front().unit);
                }
                break;
            }
            case Kind::number: *node = as_number(text); break;
            case Kind::integer: {
                const double v = as_number(text);
                if (v != std::floor(v)) throw ConfigError("override: '" + ov.first + "' expects an integer");
                *node = static_cast<long long>(v);
                break;
            }
            case Kind::string: *node = text; break;
            case Kind::number_list: {
                Json list = Json::array();
                std::stringstream ss(text);
                std::string item;
                while (std::getline(ss, item, ',')) list.push_back(as_number(item));
                *node = list;
                break;
            }
        }
    }

    std::string_view text_;
    std::string_view source_;
};

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be strictly positive");
}

void require_non_negative(double v, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be non-negative");
}

}  // namespace

void ScenarioSpec::validate() const {
    require_positive(geometry.radius, "geometry.radius");
    require_positive(geometry.height, "geometry.height");

    const auto& m = material;
    require_positive(m.k, "material.k");
    require_positive(m.c_f, "material.c_f");
    require_positive(m.c_s, "material.c_s");
    require_positive(m.c_phi, "material.c_phi");
    require_positive(m.S_s, "material.S_s");
    require_positive(m.lambda_T, "material.lambda_T");
    require_positive(m.C_p, "material.C_p");
    require_positive(m.alpha_s, "material.alpha_s");
    require_positive(m.alpha_th, "material.alpha_th");
    mcc_params().validate();

    require_positive(initial.T, "initial.T");
    require_non_negative(initial.p_eff, "initial.p_eff");
    require_non_negative(initial.q, "initial.q");
    require_positive(initial.u_w, "initial.u_w");
    if (!(initial.S_r >= 0.0 && initial.S_r <= 1.0)) throw ConfigError("initial.S_r must lie in [0, 1]");

    require_positive(loading.heating_rate, "loading.heating_rate");
    require_positive(loading.t_end, "loading.t_end");
    require_non_negative(loading.sigma_radial, "loading.sigma_radial");
    require_non_negative(loading.sigma_axial, "loading.sigma_axial");
    if (!(loading.T_max >= initial.T)) throw ConfigError("loading.T_max must not be below initial.T");

    const double p_expected = mean_total_stress() - initial.u_w;
    const double scale = std::max(std::abs(p_expected), 1.0);
    if (std::abs(initial.p_eff - p_expected) > 0.01 * scale) {
        throw ConfigError("initial.p_eff = " + std::to_string(initial.p_eff * 1e-6) +
                          " MPa is inconsistent with (sigma_axial + 2 sigma_radial)/3 - u_w = " +
                          std::to_string(p_expected * 1e-6) + " MPa (tolerance 1%)");
    }

    if (characteristic_length) require_positive(*characteristic_length, "characteristic_length");
    if (!(thresholds.De_lo > 0.0 && thresholds.De_hi > thresholds.De_lo)) {
        throw ConfigError("reasoning: requires 0 < De_lo < De_hi");
    }

    require_positive(solver.dt, "solver.dt");
    if (solver.nr < 1 || solver.nz < 1) throw ConfigError("solver.nr and solver.nz must be at least 1");
    require_positive(solver.skempton_B, "solver.skempton_B");
    if (!(solver.sor_omega > 0.0 && solver.sor_omega < 2.0)) throw ConfigError("solver.sor_omega must lie in (0, 2)");
    require_positive(solver.residual_tol, "solver.residual_tol");
    if (solver.max_sweeps < 1) throw ConfigError("solver.max_sweeps must be at least 1");
    for (double t : solver.snapshot_times) require_non_negative(t, "solver.snapshot_times");

    fluid_model().validate();
    if (fluid.lambda_tp_override) require_positive(*fluid.lambda_tp_override, "fluid.lambda_tp_override");
}

double ScenarioSpec::boundary_temperature(double t) const {
    return std::min(initial.T + loading.heating_rate * t, loading.T_max);
}

constitutive::MccParams ScenarioSpec::mcc_params() const {
    constitutive::MccParams p;
    p.M = material.M;
    p.lambda_c = material.lambda_c;
    p.kappa_c = material.kappa_c;
    p.e0 = material.e0;
    p.nu = material.nu;
    p.p_c0 = material.p_c0;
    p.hvorslev_ratio = solver.hvorslev_ratio;
    return p;
}

constitutive::FluidModel ScenarioSpec::fluid_model() const {
    constitutive::FluidModel f;
    f.c_f = material.c_f;
    f.alpha_s = material.alpha_s;
    f.c_phi = material.c_phi;
    f.viscosity = fluid.viscosity;
    f.expansion.alpha_f0 = fluid.alpha_f;
    f.expansion.ramp = fluid.alpha_f_ramp;
    f.expansion.T_ref = initial.T;
    return f;
}

double ScenarioSpec::specific_storage(double T) const {
    return material.S_s * (1.0 + fluid.storage_ramp * (T - initial.T));
}

Override parse_override(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError("override '" + std::string(text) + "' is not of the form path=value");
    }
    return {std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
}

ScenarioSpec parse_scenario(std::string_view text, std::string_view source, const std::vector<Override>& overrides) {
    return ScenarioParser(text, source).parse(overrides);
}

ScenarioSpec load_scenario(const std::string& path, const std::vector<Override>& overrides) {
    const std::string text = read_text_file(path);
    return parse_scenario(text, path, overrides);
}

ScenarioSpec reference_scenario(const std::vector<Override>& overrides) {
    return parse_scenario(embedded::reference_scenario_json(), "<reference scenario>", overrides);
}

std::vector<std::string> scenario_paths() {
    std::vector<std::string> out;
    for (const auto& e : schema()) out.push_back(e.path);
    return out;
}

}  // namespace mechcomplete::reasoning
