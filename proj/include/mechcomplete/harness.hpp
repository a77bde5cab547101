#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mechcomplete/capillary.hpp"
#include "mechcomplete/regime.hpp"
#include "mechcomplete/scenario.hpp"
#include "mechcomplete/skills.hpp"
#include "mechcomplete/solver.hpp"

namespace mechcomplete::harness {

using reasoning::ScenarioSpec;
using OutDir = std::optional<std::filesystem::path>;

struct Expectation {
    double value = 0.0;
    double tolerance = 0.0;
    std::string provenance;  ///< PUBLISHED, DERIVED or TRIVIAL

    bool accepts(double measured) const { return std::abs(measured - value) <= tolerance; }
};

struct VerificationReport {
    std::string scenario_name;
    std::map<std::string, double> measured;
    /// Gating items; `passed()` is decided by these alone.
    std::map<std::string, Expectation> expected;
    /// Reference values printed with their residual but not gating.
    std::map<std::string, Expectation> calibration;
    std::vector<std::string> artifacts;

    void expect(const std::string& name, double value, Expectation e);
    void calibrate(const std::string& name, double value, Expectation e);

    bool passed() const;
    std::vector<std::string> failures() const;
    /// Contents of report.txt.
    std::string text() const;
};

/// Writes report.txt into `dir` and records it as an artifact.
void write_report(VerificationReport& report, const std::filesystem::path& dir);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// Capillary rise (Lucas-Washburn with gravity).

struct RisePoint {
    double t = 0.0;
    double h = 0.0;
};

/// Forward Euler with dt adapted to the local relaxation time, seeded at
/// h = r, until dh/dt < rate_floor.
std::vector<RisePoint> integrate_capillary(const constitutive::CapillaryTube& tube, double rate_floor = 1e-9);

VerificationReport verify_capillary(const constitutive::CapillaryTube& tube = {}, const OutDir& out = std::nullopt);

// Undrained pressurization on the 0D reduction.
VerificationReport verify_undrained_pressurization(const ScenarioSpec& scenario, const OutDir& out = std::nullopt);

// Deborah number over permeability and temperature.

struct DeborahPoint {
    double k = 0.0;  ///< m^2
    double T = 0.0;  ///< K
    double deborah = 0.0;
    reasoning::Regime regime = reasoning::Regime::drained;
};

std::vector<DeborahPoint> deborah_sweep(const ScenarioSpec& scenario, const std::vector<double>& k_values,
                                        const std::vector<double>& T_values);

struct DiffusivityPoint {
    double T = 0.0;
    double mu_ratio = 1.0;  ///< mu(T0)/mu(T)
    double S_ratio = 1.0;   ///< S_s(T0)/S_s(T)
    double c_ratio = 1.0;   ///< c_hyd(T)/c_hyd(T0)
};

std::vector<DiffusivityPoint> diffusivity_decomposition(const ScenarioSpec& scenario, const std::vector<double>& T_values);

/// 25..200 degC in 5 K steps.
std::vector<double> default_sweep_temperatures();
/// 1e-14 .. 1e-20 m^2, one per decade.
std::vector<double> default_sweep_permeabilities();

/// Deborah map and diffusivity ratio tables plus the regime checks.
VerificationReport verify_deborah(const ScenarioSpec& scenario, const OutDir& out = std::nullopt);

/// Naive and completed runs on the scenario; failure dichotomy is gating,
/// the published endpoint is a calibration item.
VerificationReport stress_path_comparison(const ScenarioSpec& scenario, const OutDir& out = std::nullopt);

/// Completed run; rim and monotonicity checks on the snapshot at t.
VerificationReport field_snapshot_check(const ScenarioSpec& scenario, double t = 175.0, const OutDir& out = std::nullopt);

/// Suite names accepted by run_suite, in execution order of "all".
const std::vector<std::string>& suite_names();
/// Runs one suite (or "all") with per-suite subdirectories under `out`.
/// Throws ConfigError on an unknown name.
std::vector<VerificationReport> run_suite(const std::string& name, const ScenarioSpec& scenario, const OutDir& out);

// Parameter sweeps through the full reason -> solve pipeline.

struct SweepRow {
    double value = 0.0;
    double deborah = 0.0;
    reasoning::Regime regime = reasoning::Regime::drained;
    double final_p_eff = 0.0;  ///< Pa
    double final_t = 0.0;
    constitutive::FailureMode verdict = constitutive::FailureMode::safe;
};

/// Dotted scenario paths accepted by `sweep` (e.g. "material.k").
std::string sweep_path(const std::string& param);

/// One reasoned run per value, executed on up to `jobs` threads; rows sorted
/// by value. The scenario document is re-parsed per row with the value as an
/// override. Each row writes into its own subdirectory when `out` is set.
std::vector<SweepRow> run_sweep(std::string_view scenario_text, std::string_view source,
                                const std::vector<reasoning::Override>& base_overrides,
                                const skills::SkillRegistry& registry, const std::string& param,
                                const std::vector<double>& values, int jobs, const OutDir& out = std::nullopt);

std::string sweep_csv(const std::string& param, const std::vector<SweepRow>& rows);

}  // namespace mechcomplete::harness
