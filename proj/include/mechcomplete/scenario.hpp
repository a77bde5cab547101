#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mechcomplete/fluid.hpp"
#include "mechcomplete/json_support.hpp"
#include "mechcomplete/mcc.hpp"

namespace mechcomplete::reasoning {

enum class HydraulicBc { drained, no_flux };
std::string_view to_string(HydraulicBc bc);

struct Geometry {
    double radius = 0.025;  ///< m
    double height = 0.05;   ///< m
};

/// Material table in SI units.
struct Material {
    double M = 1.2;
    double p_c0 = 60.0e6;
    double lambda_c = 0.15;
    double kappa_c = 0.03;
    double e0 = 0.3;
    double nu = 0.3;
    double k = 1.0e-16;        ///< m^2
    double c_f = 4.0e-10;      ///< 1/Pa
    double c_s = 2.0e-11;      ///< 1/Pa
    double c_phi = 2.0e-11;    ///< 1/Pa, defaults to c_s
    double S_s = 1.28e-10;     ///< 1/Pa
    double lambda_T = 2.0;     ///< W/(m K)
    double C_p = 1000.0;       ///< J/(kg K)
    double alpha_s = 3.3e-5;   ///< 1/K
    double alpha_th = 1.0e-6;  ///< m^2/s
};

struct FluidSpec {
    constitutive::VogelViscosity viscosity;
    double alpha_f = 3.0e-4;       ///< 1/K
    double alpha_f_ramp = 0.0;     ///< 1/K, linear ramp about T_0
    /// Relative change of S_s per kelvin about T_0 (zero keeps S_s constant).
    double storage_ramp = 0.0;
    std::optional<double> lambda_tp_override;  ///< Pa/K
};

struct InitialState {
    double p_eff = 46.0e6;
    double q = 15.0e6;
    double u_w = 4.0e6;
    double T = 298.15;
    double S_r = 1.0;
};

struct Loading {
    double heating_rate = 1.0;      ///< K/s
    double t_end = 175.0;           ///< s
    double sigma_radial = 45.0e6;   ///< Pa
    double sigma_axial = 60.0e6;    ///< Pa
    double T_max = 473.15;          ///< K, boundary ramp holds here
};

struct RegimeThresholds {
    double De_lo = 0.1;
    double De_hi = 10.0;
};

/// Numerical settings carried with the scenario so they can be overridden from the CLI.
struct SolverSettings {
    double dt = 0.5;
    int nr = 25;
    int nz = 50;
    double skempton_B = 1.0;
    double hvorslev_ratio = 0.5;
    double sor_omega = 1.85;
    double residual_tol = 1.0;  ///< Pa
    int max_sweeps = 10000;
    std::vector<double> snapshot_times = {175.0};
};

struct ScenarioSpec {
    std::string name = "scenario";
    Geometry geometry;
    Material material;
    FluidSpec fluid;
    InitialState initial;
    Loading loading;
    std::optional<HydraulicBc> hydraulic_bc;  ///< explicit override of the reasoned choice
    std::optional<double> characteristic_length;
    RegimeThresholds thresholds;
    SolverSettings solver;

    /// Throws ConfigError on any violated invariant.
    void validate() const;

    double length_scale() const { return characteristic_length.value_or(geometry.radius); }
    double mean_total_stress() const { return (loading.sigma_axial + 2.0 * loading.sigma_radial) / 3.0; }
    double deviatoric_total_stress() const { return loading.sigma_axial - loading.sigma_radial; }
    /// T_0 + rate * t, held at T_max.
    double boundary_temperature(double t) const;
    std::string phase() const { return initial.S_r >= 1.0 ? "saturated_liquid" : "partially_saturated"; }

    constitutive::MccParams mcc_params() const;
    constitutive::FluidModel fluid_model() const;
    /// S_s(T) with the optional linear storage ramp.
    double specific_storage(double T) const;
};

/// key=value override on a dotted path, e.g. {"material.k", "1e-20"}.
using Override = std::pair<std::string, std::string>;

/// Splits "a.b=c". Throws ConfigError when '=' is missing.
Override parse_override(std::string_view text);

/// Parses a scenario document, applying overrides to the JSON tree before
/// validation. Errors carry the line of the offending key.
ScenarioSpec parse_scenario(std::string_view text, std::string_view source, const std::vector<Override>& overrides = {});
ScenarioSpec load_scenario(const std::string& path, const std::vector<Override>& overrides = {});

/// Rothbach sandstone heating test shipped with the project.
ScenarioSpec reference_scenario(const std::vector<Override>& overrides = {});

/// Dotted paths accepted in scenario files and overrides.
std::vector<std::string> scenario_paths();

}  // namespace mechcomplete::reasoning
