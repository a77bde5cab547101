#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mechcomplete/fluid.hpp"
#include "mechcomplete/mcc.hpp"
#include "mechcomplete/plan.hpp"
#include "mechcomplete/scenario.hpp"

namespace mechcomplete::solver {

using reasoning::HydraulicBc;
using reasoning::ModelPlan;
using reasoning::ScenarioSpec;

/// Cell-centred axisymmetric grid. Cell (i, j) has centre r = (i + 1/2) dr,
/// z = (j + 1/2) dz and is stored at j * nr + i.
struct AxiGrid {
    int nr = 0;
    int nz = 0;
    double R = 0.0;
    double H = 0.0;
    double dr = 0.0;
    double dz = 0.0;
    std::vector<double> r;  ///< cell centres
    std::vector<double> z;

    AxiGrid() = default;
    AxiGrid(double radius, double height, int nr, int nz);

    std::size_t size() const { return static_cast<std::size_t>(nr) * static_cast<std::size_t>(nz); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nr + i; }
    /// Face radius between cell i-1 and i; face_r(nr) = R.
    double face_r(int i) const { return i * dr; }
};

using CellField = std::vector<double>;

struct FieldState {
    CellField T;            ///< K
    CellField u_w;          ///< Pa
    double T_rim = 0.0;     ///< boundary value at r = R
    double u_rim = 0.0;     ///< boundary value at r = R (Dirichlet or zero-gradient)
    double t = 0.0;         ///< s
    constitutive::MccState stress;
    constitutive::FailureVerdict failure;     ///< combined specimen + worst cell, sticky
    constitutive::FailureVerdict specimen;    ///< last specimen-level verdict
    constitutive::FailureVerdict worst_cell;  ///< last max-u_w cell verdict
    double u_mean = 0.0;    ///< volume-weighted
    double u_max = 0.0;

    bool failed() const { return failure.state != constitutive::FailureMode::safe; }
};

struct SolverConfig {
    double dt = 0.5;
    double t_end = 175.0;
    double skempton_B = 1.0;
    int nr = 25;
    int nz = 50;
    double sor_omega = 1.85;
    double residual_tol = 1.0;  ///< Pa, max-norm of the implicit residual
    int max_sweeps = 10000;
    std::vector<double> snapshot_times = {175.0};
    ModelPlan plan;

    /// Settings from the scenario's solver section, with the given plan.
    static SolverConfig from_scenario(const ScenarioSpec& scenario, const ModelPlan& plan);
    void validate() const;
};

/// Material and fluid data the steps need, precomputed from a scenario.
struct Physics {
    double k = 0.0;
    double alpha_th = 0.0;
    double u_w0 = 0.0;
    double sigma_radial = 0.0;
    double sigma_axial = 0.0;
    constitutive::MccParams mcc;
    constitutive::FluidModel fluid;
    ScenarioSpec scenario;

    explicit Physics(const ScenarioSpec& s);
    double storage(double T) const { return scenario.specific_storage(T); }
    double viscosity(double T) const { return constitutive::viscosity(fluid, T); }
    /// Lambda(T), or the scenario override when one is set.
    double lambda(double T) const;
    double T_boundary(double t) const { return scenario.boundary_temperature(t); }
};

FieldState initial_state(const AxiGrid& grid, const Physics& physics);

/// Number of explicit sub-steps so that alpha dt_sub (1/dr^2 + 1/dz^2) <= 0.25.
int thermal_substeps(const AxiGrid& grid, double alpha_th, double dt);

/// Advances T over [state.t, state.t + dt]. The rim boundary follows
/// T_bnd(t) evaluated at the end of each sub-step. Does not advance state.t.
void thermal_step(FieldState& state, const AxiGrid& grid, double dt, const Physics& physics);

struct HydraulicStats {
    int sweeps = 0;
    double residual = 0.0;  ///< Pa
};

/// Adds B Lambda(T) dT per cell, then, if the plan has a sink, solves the
/// backward-Euler Darcy diffusion by SOR. Throws LinearSolveFailure when the
/// sweep budget runs out.
HydraulicStats hydraulic_step(FieldState& state, const CellField& dT, const AxiGrid& grid, double dt,
                              const SolverConfig& config, const Physics& physics);

/// Volume-weighted mean and max of u_w; sets state.u_mean and state.u_max.
void update_pressure_stats(FieldState& state, const AxiGrid& grid);

/// Effective-stress update and return map on the specimen state, then the
/// failure check on the specimen and on the max-u_w cell.
void mechanical_step(FieldState& state, const AxiGrid& grid, const Physics& physics);

struct TraceRow {
    double t = 0.0;
    double p_eff = 0.0;  ///< Pa
    double q = 0.0;      ///< Pa
    double u_mean = 0.0;
    double u_max = 0.0;
    double u_rim = 0.0;
    double T_center = 0.0;  ///< K
    double T_rim = 0.0;     ///< K
    double p_c = 0.0;
    constitutive::FailureMode verdict = constitutive::FailureMode::safe;
    int sweeps = 0;
};

struct Snapshot {
    double t = 0.0;
    CellField T;
    CellField u_w;
    double T_rim = 0.0;
    double u_rim = 0.0;
};

struct RunResult {
    AxiGrid grid;
    std::vector<TraceRow> trace;
    std::vector<Snapshot> snapshots;
    FieldState final_state;
    std::optional<double> t_fail;  ///< first step time with a failure verdict
    int steps = 0;
};

/// thermal -> hydraulic -> mechanical per step from 0 to t_end; stops at the
/// first failure verdict. Row 0 of the trace is the initial state.
RunResult run(const ScenarioSpec& scenario, const SolverConfig& config);

struct ZeroDRow {
    double t = 0.0;
    double T = 0.0;
    double u_w = 0.0;
};

/// Single uniform cell, no sink: u_w += B Lambda(T) dT with T following the
/// boundary ramp.
std::vector<ZeroDRow> run_0d(const ScenarioSpec& scenario, double skempton_B, double dt, double t_end);

/// Trace CSV with header t_s,p_eff_MPa,q_MPa,uw_mean_MPa,uw_max_MPa,T_center_C,T_rim_C,verdict.
std::string trace_csv(const std::vector<TraceRow>& trace);
/// Grid text for one field; `field` is "T" (written in degC) or "u_w" (MPa).
/// The last column is the r = R boundary value.
std::string snapshot_grid(const Snapshot& snap, const AxiGrid& grid, const std::string& field);

}  // namespace mechcomplete::solver
