#include "mechcomplete/solver.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mechcomplete/error.hpp"

namespace mechcomplete::solver {

using constitutive::FailureMode;
using constitutive::FailureVerdict;

AxiGrid::AxiGrid(double radius, double height, int nr_, int nz_)
    : nr(nr_), nz(nz_), R(radius), H(height), dr(radius / nr_), dz(height / nz_) {
    if (nr < 1 || nz < 1) throw ConfigError("grid needs at least one cell in r and z");
    r.resize(nr);
    z.resize(nz);
    for (int i = 0; i < nr; ++i) r[i] = (i + 0.5) * dr;
    for (int j = 0; j < nz; ++j) z[j] = (j + 0.5) * dz;
}

SolverConfig SolverConfig::from_scenario(const ScenarioSpec& scenario, const ModelPlan& plan) {
    SolverConfig c;
    c.dt = scenario.solver.dt;
    c.t_end = scenario.loading.t_end;
    c.skempton_B = scenario.solver.skempton_B;
    c.nr = scenario.solver.nr;
    c.nz = scenario.solver.nz;
    c.sor_omega = scenario.solver.sor_omega;
    c.residual_tol = scenario.solver.residual_tol;
    c.max_sweeps = scenario.solver.max_sweeps;
    c.snapshot_times = scenario.solver.snapshot_times;
    c.plan = plan;
    return c;
}

void SolverConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("solver: dt must be positive");
    if (!(t_end > 0.0)) throw ConfigError("solver: t_end must be positive");
    if (!(skempton_B > 0.0)) throw ConfigError("solver: Skempton B must be positive");
    if (nr < 1 || nz < 1) throw ConfigError("solver: nr and nz must be at least 1");
    if (!(sor_omega > 0.0 && sor_omega < 2.0)) throw ConfigError("solver: SOR omega must lie in (0, 2)");
    if (!(residual_tol > 0.0)) throw ConfigError("solver: residual tolerance must be positive");
    if (max_sweeps < 1) throw ConfigError("solver: max_sweeps must be at least 1");
}

Physics::Physics(const ScenarioSpec& s)
    : k(s.material.k),
      alpha_th(s.material.alpha_th),
      u_w0(s.initial.u_w),
      sigma_radial(s.loading.sigma_radial),
      sigma_axial(s.loading.sigma_axial),
      mcc(s.mcc_params()),
      fluid(s.fluid_model()),
      scenario(s) {}

double Physics::lambda(double T) const {
    if (scenario.fluid.lambda_tp_override) return *scenario.fluid.lambda_tp_override;
    return constitutive::lambda_tp(fluid, T);
}

FieldState initial_state(const AxiGrid& grid, const Physics& physics) {
    FieldState s;
    s.T.assign(grid.size(), physics.scenario.initial.T);
    s.u_w.assign(grid.size(), physics.u_w0);
    s.T_rim = physics.scenario.initial.T;
    s.u_rim = physics.u_w0;
    s.stress = {physics.scenario.initial.p_eff, physics.scenario.initial.q, physics.mcc.p_c0, 0.0};
    s.failure = {FailureMode::safe, 0.0};
    update_pressure_stats(s, grid);
    return s;
}

int thermal_substeps(const AxiGrid& grid, double alpha_th, double dt) {
    const double load = alpha_th * dt * (1.0 / (grid.dr * grid.dr) + 1.0 / (grid.dz * grid.dz));
    return std::max(1, static_cast<int>(std::ceil(load / 0.25 - 1e-12)));
}

void thermal_step(FieldState& state, const AxiGrid& grid, double dt, const Physics& physics) {
    const int n = thermal_substeps(grid, physics.alpha_th, dt);
    const double h = dt / n;
    const double inv_dz2 = 1.0 / (grid.dz * grid.dz);
    CellField next(state.T.size());

    for (int s = 0; s < n; ++s) {
        const double T_b = physics.T_boundary(state.t + (s + 1 == n ? dt : (s + 1) * h));
        const CellField& T = state.T;
        for (int j = 0; j < grid.nz; ++j) {
            for (int i = 0; i < grid.nr; ++i) {
                const std::size_t c = grid.index(i, j);
                const double Tc = T[c];
                double flux_r = 0.0;
                if (i > 0) flux_r += grid.face_r(i) * (T[c - 1] - Tc);
                if (i < grid.nr - 1) {
                    flux_r += grid.face_r(i + 1) * (T[c + 1] - Tc);
                } else {
                    flux_r += grid.R * 2.0 * (T_b - Tc);  // boundary face at dr/2
                }
                double flux_z = 0.0;
                if (j > 0) flux_z += T[c - grid.nr] - Tc;
                if (j < grid.nz - 1) flux_z += T[c + grid.nr] - Tc;
                const double lap = flux_r / (grid.r[i] * grid.dr * grid.dr) + flux_z * inv_dz2;
                next[c] = Tc + physics.alpha_th * h * lap;
            }
        }
        state.T.swap(next);
        state.T_rim = T_b;
    }
}

namespace {

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

double rim_extrapolated(const FieldState& state, const AxiGrid& grid) {
    return state.u_w[grid.index(grid.nr - 1, grid.nz / 2)];
}

}  // namespace

HydraulicStats hydraulic_step(FieldState& state, const CellField& dT, const AxiGrid& grid, double dt,
                              const SolverConfig& config, const Physics& physics) {
    for (std::size_t c = 0; c < state.u_w.size(); ++c) {
        if (dT[c] != 0.0) state.u_w[c] += config.skempton_B * physics.lambda(state.T[c]) * dT[c];
    }

    HydraulicStats stats;
    if (!config.plan.has_sink()) {
        state.u_rim = rim_extrapolated(state, grid);
        return stats;
    }

    const bool drained = config.plan.hydraulic_bc == HydraulicBc::drained;
    const std::size_t n = grid.size();
    CellField c_hyd(n);
    for (std::size_t c = 0; c < n; ++c) {
        const double T = state.T[c];
        c_hyd[c] = constitutive::hydraulic_diffusivity(physics.k, physics.viscosity(T), physics.storage(T));
    }

    // Backward Euler: diag u_c - sum a_nb u_nb = rhs_c.
    CellField aw(n, 0.0), ae(n, 0.0), as(n, 0.0), an(n, 0.0), diag(n), rhs(n);
    const double inv_dz2 = 1.0 / (grid.dz * grid.dz);
    for (int j = 0; j < grid.nz; ++j) {
        for (int i = 0; i < grid.nr; ++i) {
            const std::size_t c = grid.index(i, j);
            const double radial = dt / (grid.r[i] * grid.dr * grid.dr);
            double boundary = 0.0;
            if (i > 0) aw[c] = radial * grid.face_r(i) * harmonic(c_hyd[c - 1], c_hyd[c]);
            if (i < grid.nr - 1) {
                ae[c] = radial * grid.face_r(i + 1) * harmonic(c_hyd[c], c_hyd[c + 1]);
            } else if (drained) {
                boundary = radial * grid.R * 2.0 * c_hyd[c];
            }
            if (j > 0) as[c] = dt * inv_dz2 * harmonic(c_hyd[c - grid.nr], c_hyd[c]);
            if (j < grid.nz - 1) an[c] = dt * inv_dz2 * harmonic(c_hyd[c], c_hyd[c + grid.nr]);
            diag[c] = 1.0 + aw[c] + ae[c] + as[c] + an[c] + boundary;
            rhs[c] = state.u_w[c] + boundary * physics.u_w0;
        }
    }

    CellField& u = state.u_w;
    auto neighbours = [&](int i, int j, std::size_t c) {
        double s = 0.0;
        if (i > 0) s += aw[c] * u[c - 1];
        if (i < grid.nr - 1) s += ae[c] * u[c + 1];
        if (j > 0) s += as[c] * u[c - grid.nr];
        if (j < grid.nz - 1) s += an[c] * u[c + grid.nr];
        return s;
    };

    const double omega = config.sor_omega;
    for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
        for (int j = 0; j < grid.nz; ++j) {
            for (int i = 0; i < grid.nr; ++i) {
                const std::size_t c = grid.index(i, j);
                const double gs = (rhs[c] + neighbours(i, j, c)) / diag[c];
                u[c] += omega * (gs - u[c]);
            }
        }
        double residual = 0.0;
        for (int j = 0; j < grid.nz; ++j) {
            for (int i = 0; i < grid.nr; ++i) {
                const std::size_t c = grid.index(i, j);
                residual = std::max(residual, std::abs(rhs[c] + neighbours(i, j, c) - diag[c] * u[c]));
            }
        }
        stats.sweeps = sweep;
        stats.residual = residual;
        if (residual <= config.residual_tol) {
            state.u_rim = drained ? physics.u_w0 : rim_extrapolated(state, grid);
            return stats;
        }
    }
    throw LinearSolveFailure(fmt::format("Darcy solve: residual {:.3g} Pa after {} sweeps (tolerance {:.3g} Pa)",
                                         stats.residual, config.max_sweeps, config.residual_tol));
}

void update_pressure_stats(FieldState& state, const AxiGrid& grid) {
    double weighted = 0.0;
    double weights = 0.0;
    double u_max = state.u_w.empty() ? 0.0 : state.u_w.front();
    for (int j = 0; j < grid.nz; ++j) {
        for (int i = 0; i < grid.nr; ++i) {
            const double u = state.u_w[grid.index(i, j)];
            weighted += grid.r[i] * u;
            weights += grid.r[i];
            u_max = std::max(u_max, u);
        }
    }
    state.u_mean = weighted / weights;
    state.u_max = u_max;
}

void mechanical_step(FieldState& state, const AxiGrid& grid, const Physics& physics) {
    update_pressure_stats(state, grid);
    const double p_total = (physics.sigma_axial + 2.0 * physics.sigma_radial) / 3.0;
    const double q_total = physics.sigma_axial - physics.sigma_radial;

    constitutive::MccState trial = state.stress;
    trial.p_eff = p_total - state.u_mean;
    trial.q = q_total;
    const auto mapped = constitutive::return_map(trial, physics.mcc);
    state.stress = mapped.state;

    const double p_c = state.stress.p_c;
    state.specimen = mapped.tension_clamped ? constitutive::failure_check(trial.p_eff, trial.q, p_c, physics.mcc)
                                            : constitutive::failure_check(state.stress.p_eff, state.stress.q, p_c, physics.mcc);
    state.worst_cell = constitutive::failure_check(p_total - state.u_max, q_total, p_c, physics.mcc);

    if (state.failed()) return;
    if (state.specimen.state != FailureMode::safe) {
        state.failure = state.specimen;
    } else if (state.worst_cell.state != FailureMode::safe) {
        state.failure = state.worst_cell;
    } else {
        state.failure = {FailureMode::safe, std::min(state.specimen.margin, state.worst_cell.margin)};
    }
}

namespace {

TraceRow make_row(const FieldState& s, const AxiGrid& grid, int sweeps) {
    TraceRow row;
    row.t = s.t;
    row.p_eff = s.stress.p_eff;
    row.q = s.stress.q;
    row.u_mean = s.u_mean;
    row.u_max = s.u_max;
    row.u_rim = s.u_rim;
    row.T_center = s.T[grid.index(0, grid.nz / 2)];
    row.T_rim = s.T_rim;
    row.p_c = s.stress.p_c;
    row.verdict = s.failure.state;
    row.sweeps = sweeps;
    return row;
}

Snapshot make_snapshot(const FieldState& s) { return {s.t, s.T, s.u_w, s.T_rim, s.u_rim}; }

}  // namespace

RunResult run(const ScenarioSpec& scenario, const SolverConfig& config) {
    config.validate();
    const Physics physics(scenario);
    RunResult out;
    out.grid = AxiGrid(scenario.geometry.radius, scenario.geometry.height, config.nr, config.nz);
    const AxiGrid& grid = out.grid;

    FieldState state = initial_state(grid, physics);
    mechanical_step(state, grid, physics);
    out.trace.push_back(make_row(state, grid, 0));

    std::vector<double> pending = config.snapshot_times;
    std::sort(pending.begin(), pending.end());
    auto take_snapshots = [&](double t_prev, double t_now, bool first) {
        while (!pending.empty() && pending.front() <= t_now + 1e-9) {
            if (first || pending.front() > t_prev + 1e-9) out.snapshots.push_back(make_snapshot(state));
            pending.erase(pending.begin());
        }
    };
    take_snapshots(0.0, 0.0, true);

    if (state.failed()) {
        out.t_fail = 0.0;
        out.final_state = state;
        return out;
    }

    const int steps = std::max(1, static_cast<int>(std::ceil(config.t_end / config.dt - 1e-9)));
    CellField T_old;
    CellField dT(grid.size());
    for (int n = 1; n <= steps; ++n) {
        const double t_prev = state.t;
        const double t_next = n == steps ? config.t_end : n * config.dt;
        T_old = state.T;
        thermal_step(state, grid, t_next - t_prev, physics);
        for (std::size_t c = 0; c < dT.size(); ++c) dT[c] = state.T[c] - T_old[c];
        const HydraulicStats stats = hydraulic_step(state, dT, grid, t_next - t_prev, config, physics);
        state.t = t_next;
        mechanical_step(state, grid, physics);

        out.trace.push_back(make_row(state, grid, stats.sweeps));
        out.steps = n;
        take_snapshots(t_prev, t_next, false);
        if (state.failed()) {
            out.t_fail = state.t;
            break;
        }
    }
    out.final_state = std::move(state);
    return out;
}

std::vector<ZeroDRow> run_0d(const ScenarioSpec& scenario, double skempton_B, double dt, double t_end) {
    const Physics physics(scenario);
    std::vector<ZeroDRow> rows;
    double T = scenario.initial.T;
    double u = scenario.initial.u_w;
    rows.push_back({0.0, T, u});
    const int steps = std::max(1, static_cast<int>(std::ceil(t_end / dt - 1e-9)));
    for (int n = 1; n <= steps; ++n) {
        const double t = n == steps ? t_end : n * dt;
        const double T_next = physics.T_boundary(t);
        u += skempton_B * physics.lambda(T_next) * (T_next - T);
        T = T_next;
        rows.push_back({t, T, u});
    }
    return rows;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
    std::string out = "t_s,p_eff_MPa,q_MPa,uw_mean_MPa,uw_max_MPa,T_center_C,T_rim_C,verdict\n";
    for (const auto& r : trace) {
        out += fmt::format("{:.4f},{:.6f},{:.6f},{:.6f},{:.6f},{:.4f},{:.4f},{}\n", r.t, r.p_eff * 1e-6, r.q * 1e-6,
                           r.u_mean * 1e-6, r.u_max * 1e-6, r.T_center - 273.15, r.T_rim - 273.15,
                           constitutive::to_string(r.verdict));
    }
    return out;
}

std::string snapshot_grid(const Snapshot& snap, const AxiGrid& grid, const std::string& field) {
    const bool temperature = field == "T";
    if (!temperature && field != "u_w") throw ConfigError("snapshot field must be 'T' or 'u_w'");
    const CellField& values = temperature ? snap.T : snap.u_w;
    const double rim = temperature ? snap.T_rim : snap.u_rim;
    auto convert = [&](double v) { return temperature ? v - 273.15 : v * 1e-6; };

    std::string out = fmt::format("# field={} unit={} t_s={:.4f} nr={} nz={}\n", field, temperature ? "degC" : "MPa",
                                  snap.t, grid.nr, grid.nz);
    out += "# rows: z ascending; columns: r ascending, last column is the r = R boundary\n";
    out += "z_m\\r_m";
    for (double r : grid.r) out += fmt::format(",{:.6f}", r);
    out += fmt::format(",{:.6f}\n", grid.R);
    for (int j = 0; j < grid.nz; ++j) {
        out += fmt::format("{:.6f}", grid.z[j]);
        for (int i = 0; i < grid.nr; ++i) out += fmt::format(",{:.6f}", convert(values[grid.index(i, j)]));
        out += fmt::format(",{:.6f}\n", convert(rim));
    }
    return out;
}

}  // namespace mechcomplete::solver
