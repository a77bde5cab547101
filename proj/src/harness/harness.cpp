#include "mechcomplete/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "mechcomplete/error.hpp"
#include "mechcomplete/fluid.hpp"
#include "mechcomplete/plan.hpp"

namespace mechcomplete::harness {

using constitutive::FailureMode;

void VerificationReport::expect(const std::string& name, double value, Expectation e) {
    measured[name] = value;
    expected[name] = std::move(e);
}

void VerificationReport::calibrate(const std::string& name, double value, Expectation e) {
    measured[name] = value;
    calibration[name] = std::move(e);
}

bool VerificationReport::passed() const { return failures().empty(); }

std::vector<std::string> VerificationReport::failures() const {
    std::vector<std::string> out;
    for (const auto& [name, e] : expected) {
        auto it = measured.find(name);
        if (it == measured.end() || !std::isfinite(it->second) || !e.accepts(it->second)) out.push_back(name);
    }
    return out;
}

std::string VerificationReport::text() const {
    std::string out = "scenario: " + scenario_name + "\n";
    for (const auto& [name, e] : expected) {
        const double m = measured.at(name);
        out += fmt::format("{} {} measured={:.9g} expected={:.9g} tol={:.3g} [{}]\n", e.accepts(m) ? "PASS" : "FAIL", name,
                           m, e.value, e.tolerance, e.provenance);
    }
    for (const auto& [name, e] : calibration) {
        const double m = measured.at(name);
        out += fmt::format("CALIB {} measured={:.9g} expected={:.9g} tol={:.3g} residual={:+.6g} {} [{}]\n", name, m,
                           e.value, e.tolerance, m - e.value, e.accepts(m) ? "within band" : "outside band", e.provenance);
    }
    out += fmt::format("result: {}\n", passed() ? "PASS" : "FAIL");
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path.string());
    f << text;
}

void write_report(VerificationReport& report, const std::filesystem::path& dir) {
    report.artifacts.push_back("report.txt");
    write_text_file(dir / "report.txt", report.text() + "artifacts: " + fmt::format("{}", fmt::join(report.artifacts, ", ")) + "\n");
}

namespace {

void emit(VerificationReport& report, const OutDir& out, const std::string& file, const std::string& text) {
    if (!out) return;
    write_text_file(*out / file, text);
    report.artifacts.push_back(file);
}

double as_flag(bool b) { return b ? 1.0 : 0.0; }

}  // namespace

// Capillary rise

std::vector<RisePoint> integrate_capillary(const constitutive::CapillaryTube& tube, double rate_floor) {
    std::vector<RisePoint> pts;
    double h = tube.r;
    double t = 0.0;
    pts.push_back({t, h});
    for (int step = 0; step < 10'000'000; ++step) {
        const double rate = constitutive::capillary_rise_rate(h, tube);
        if (std::abs(rate) < rate_floor) break;
        // Linearised relaxation time of the gravity term at this height.
        const double tau = 8.0 * tube.mu * h / (tube.r * tube.r * tube.rho * tube.g);
        const double dt = std::min(0.01 * h / std::abs(rate), 0.5 * tau);
        h = constitutive::capillary_rise_step(h, dt, tube);
        t += dt;
        pts.push_back({t, h});
    }
    return pts;
}

VerificationReport verify_capillary(const constitutive::CapillaryTube& tube, const OutDir& out) {
    VerificationReport rep;
    rep.scenario_name = "capillary";
    const double H = constitutive::jurin_height(tube);
    const auto pts = integrate_capillary(tube);

    bool monotone = true;
    double h_max = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i > 0 && pts[i].h < pts[i - 1].h) monotone = false;
        h_max = std::max(h_max, pts[i].h);
    }
    rep.expect("h_final_m", pts.back().h, {H, 1e-3, "DERIVED"});
    rep.expect("trace_monotone", as_flag(monotone), {1.0, 0.0, "TRIVIAL"});
    rep.expect("max_overshoot_ratio", h_max / H, {1.0, 1e-3, "TRIVIAL"});
    rep.calibrate("jurin_height_m", H, {0.2968, 1e-3, "PUBLISHED"});
    rep.measured["t_final_s"] = pts.back().t;
    rep.measured["steps"] = static_cast<double>(pts.size() - 1);

    if (out) {
        std::string csv = "t_s,h_m,H_jurin_m\n";
        for (const auto& p : pts) csv += fmt::format("{:.9g},{:.9g},{:.9g}\n", p.t, p.h, H);
        emit(rep, out, "capillary_rise.csv", csv);
        write_report(rep, *out);
    }
    return rep;
}

// Undrained pressurization

VerificationReport verify_undrained_pressurization(const ScenarioSpec& s, const OutDir& out) {
    VerificationReport rep;
    rep.scenario_name = "undrained_pressurization";
    const double B = s.solver.skempton_B;
    const auto rows = solver::run_0d(s, B, s.solver.dt, s.loading.t_end);

    // Closed form from the scenario constants, independent of the solver path.
    const double lambda_oracle = (s.fluid.alpha_f - s.material.alpha_s) / (s.material.c_f + s.material.c_phi);
    const double dT = rows.back().T - rows.front().T;
    const double du = rows.back().u_w - rows.front().u_w;
    const double slope = du / dT;

    rep.expect("slope_MPa_per_K", slope * 1e-6, {B * lambda_oracle * 1e-6, 1e-3 * B * lambda_oracle * 1e-6, "DERIVED"});
    rep.expect("lambda_MPa_per_K", constitutive::lambda_tp(s.fluid_model(), s.initial.T) * 1e-6,
               {0.636, 0.005 * 0.636, "DERIVED"});

    if (out) {
        std::string csv = "t_s,T_C,u_w_MPa,u_oracle_MPa\n";
        for (const auto& r : rows) {
            const double oracle = s.initial.u_w + B * lambda_oracle * (r.T - s.initial.T);
            csv += fmt::format("{:.4f},{:.4f},{:.6f},{:.6f}\n", r.t, r.T - 273.15, r.u_w * 1e-6, oracle * 1e-6);
        }
        emit(rep, out, "pressurization.csv", csv);
        write_report(rep, *out);
    }
    return rep;
}

// Deborah number and diffusivity

std::vector<DeborahPoint> deborah_sweep(const ScenarioSpec& scenario, const std::vector<double>& k_values,
                                        const std::vector<double>& T_values) {
    std::vector<DeborahPoint> pts;
    for (double k : k_values) {
        ScenarioSpec s = scenario;
        s.material.k = k;
        for (double T : T_values) {
            const auto r = reasoning::compute_regime_at(s, T);
            pts.push_back({k, T, r.deborah, r.regime});
        }
    }
    return pts;
}

std::vector<DiffusivityPoint> diffusivity_decomposition(const ScenarioSpec& s, const std::vector<double>& T_values) {
    const auto fluid = s.fluid_model();
    const double T0 = s.initial.T;
    const double mu0 = constitutive::viscosity(fluid, T0);
    const double S0 = s.specific_storage(T0);
    const double c0 = constitutive::hydraulic_diffusivity(s.material.k, mu0, S0);
    std::vector<DiffusivityPoint> pts;
    for (double T : T_values) {
        const double mu = constitutive::viscosity(fluid, T);
        const double S = s.specific_storage(T);
        pts.push_back({T, mu0 / mu, S0 / S, constitutive::hydraulic_diffusivity(s.material.k, mu, S) / c0});
    }
    return pts;
}

std::vector<double> default_sweep_temperatures() {
    std::vector<double> T;
    for (int c = 25; c <= 200; c += 5) T.push_back(273.15 + c);
    return T;
}

std::vector<double> default_sweep_permeabilities() { return {1e-14, 1e-15, 1e-16, 1e-17, 1e-18, 1e-19, 1e-20}; }

VerificationReport verify_deborah(const ScenarioSpec& s, const OutDir& out) {
    VerificationReport rep;
    rep.scenario_name = "deborah";
    const auto Ts = default_sweep_temperatures();
    const auto ks = default_sweep_permeabilities();
    const auto pts = deborah_sweep(s, ks, Ts);

    // Reference permeability row.
    const double k_ref = 1e-16;
    std::size_t in_band = 0, drained = 0, n_ref = 0;
    double de_min = INFINITY, de_max = 0.0;
    bool monotone = true;
    double homogeneity = 0.0;
    for (std::size_t a = 0; a < ks.size(); ++a) {
        for (std::size_t b = 0; b < Ts.size(); ++b) {
            const auto& p = pts[a * Ts.size() + b];
            if (b > 0 && !(p.deborah < pts[a * Ts.size() + b - 1].deborah)) monotone = false;
            if (a > 0) {
                // De scales as 1/k at fixed T.
                const auto& prev = pts[(a - 1) * Ts.size() + b];
                const double expected_ratio = prev.k / p.k;
                homogeneity = std::max(homogeneity, std::abs(p.deborah / prev.deborah / expected_ratio - 1.0));
            }
            if (p.k == k_ref) {
                ++n_ref;
                if (p.deborah >= 1e-3 && p.deborah <= 1e-2) ++in_band;
                if (p.regime == reasoning::Regime::drained) ++drained;
                de_min = std::min(de_min, p.deborah);
                de_max = std::max(de_max, p.deborah);
            }
        }
    }
    const double frac_band = n_ref ? static_cast<double>(in_band) / n_ref : 0.0;
    const double frac_drained = n_ref ? static_cast<double>(drained) / n_ref : 0.0;
    rep.expect("k1e-16_fraction_in_band_1e-3_1e-2", frac_band, {1.0, 0.0, "PUBLISHED"});
    rep.expect("k1e-16_fraction_drained", frac_drained, {1.0, 0.0, "PUBLISHED"});
    rep.measured["k1e-16_De_min"] = de_min;
    rep.measured["k1e-16_De_max"] = de_max;
    rep.expect("De_decreasing_in_T", as_flag(monotone), {1.0, 0.0, "TRIVIAL"});
    rep.expect("De_k_homogeneity_rel_error", homogeneity, {0.0, 1e-12, "TRIVIAL"});

    ScenarioSpec ref = s;
    ref.material.k = k_ref;
    rep.expect("De_k1e-16_T25C", reasoning::compute_regime_at(ref, 298.15).deborah, {4.07e-3, 0.05e-3, "DERIVED"});

    const auto dec = diffusivity_decomposition(s, Ts);
    double identity = 0.0;
    for (const auto& d : dec) identity = std::max(identity, std::abs(d.c_ratio - d.mu_ratio * d.S_ratio) / d.c_ratio);
    rep.expect("ratios_at_T0", std::max({std::abs(dec.front().mu_ratio - 1.0), std::abs(dec.front().S_ratio - 1.0),
                                         std::abs(dec.front().c_ratio - 1.0)}),
               {0.0, 1e-12, "TRIVIAL"});
    rep.expect("mu_ratio_200C", dec.back().mu_ratio, {6.65, 0.1, "DERIVED"});
    rep.expect("c_ratio_product_identity_rel_error", identity, {0.0, 1e-12, "TRIVIAL"});

    if (out) {
        std::string a = "k_m2,T_C,De,regime\n";
        for (const auto& p : pts) {
            a += fmt::format("{:.3e},{:.2f},{:.9e},{}\n", p.k, p.T - 273.15, p.deborah, reasoning::to_string(p.regime));
        }
        emit(rep, out, "deborah_map.csv", a);
        std::string b = "T_C,mu_ratio,S_ratio,c_hyd_ratio\n";
        for (const auto& d : dec) b += fmt::format("{:.2f},{:.9f},{:.9f},{:.9f}\n", d.T - 273.15, d.mu_ratio, d.S_ratio, d.c_ratio);
        emit(rep, out, "diffusivity_ratios.csv", b);
        write_report(rep, *out);
    }
    return rep;
}

// Stress paths

namespace {

solver::RunResult run_with(const ScenarioSpec& s, const reasoning::ModelPlan& plan) {
    return solver::run(s, solver::SolverConfig::from_scenario(s, plan));
}

std::string path_rows(const std::string& mode, const solver::RunResult& r) {
    std::string out;
    for (const auto& row : r.trace) {
        out += fmt::format("{},{:.4f},{:.6f},{:.6f},{:.6f},{:.6f},{}\n", mode, row.t, row.p_eff * 1e-6, row.q * 1e-6,
                           row.u_mean * 1e-6, row.u_max * 1e-6, constitutive::to_string(row.verdict));
    }
    return out;
}

}  // namespace

VerificationReport stress_path_comparison(const ScenarioSpec& s, const OutDir& out) {
    VerificationReport rep;
    rep.scenario_name = "stress_path_comparison";
    const auto naive = run_with(s, reasoning::naive_plan());
    const auto completed = run_with(s, reasoning::completed_plan());

    const auto& nf = naive.final_state;
    const auto& cf = completed.final_state;
    rep.expect("naive_tensile_failure", as_flag(nf.failure.state == FailureMode::tensile_failure), {1.0, 0.0, "PUBLISHED"});
    rep.expect("naive_t_fail_s", naive.t_fail.value_or(NAN), {75.0, 25.0, "DERIVED"});
    rep.expect("completed_safe", as_flag(cf.failure.state == FailureMode::safe), {1.0, 0.0, "PUBLISHED"});
    rep.expect("completed_t_final_s", cf.t, {s.loading.t_end, 1e-9, "PUBLISHED"});
    rep.measured["naive_final_p_eff_MPa"] = nf.stress.p_eff * 1e-6;
    rep.calibrate("completed_final_p_eff_MPa", cf.stress.p_eff * 1e-6, {8.9, 1.0, "PUBLISHED"});
    rep.calibrate("completed_final_uw_mean_MPa", cf.u_mean * 1e-6, {41.1, 1.5, "PUBLISHED"});

    if (out) {
        emit(rep, out, "stress_paths.csv",
             "mode,t_s,p_eff_MPa,q_MPa,uw_mean_MPa,uw_max_MPa,verdict\n" + path_rows("naive", naive) +
                 path_rows("completed", completed));
        const auto params = s.mcc_params();
        const double pc = cf.stress.p_c;
        std::string env = "p_MPa,q_yield_MPa,q_hvorslev_MPa\n";
        for (int i = 0; i <= 120; ++i) {
            const double p = pc * i / 120.0;
            const double q_yield = params.M * std::sqrt(std::max(0.0, p * (pc - p)));
            const std::string q_h = p < 0.5 * pc ? fmt::format("{:.6f}", constitutive::hvorslev_q(p, pc, params) * 1e-6) : "";
            env += fmt::format("{:.6f},{:.6f},{}\n", p * 1e-6, q_yield * 1e-6, q_h);
        }
        emit(rep, out, "stress_envelopes.csv", env);
        write_report(rep, *out);
    }
    return rep;
}

VerificationReport field_snapshot_check(const ScenarioSpec& scenario, double t, const OutDir& out) {
    VerificationReport rep;
    rep.scenario_name = "field_snapshot";
    ScenarioSpec s = scenario;
    s.solver.snapshot_times = {t};
    const auto res = run_with(s, reasoning::completed_plan());
    const auto& g = res.grid;

    double rim_dev = 0.0;
    for (const auto& row : res.trace) rim_dev = std::max(rim_dev, std::abs(row.u_rim - s.initial.u_w));
    rep.expect("rim_uw_minus_uw0_max_Pa", rim_dev, {0.0, 0.0, "TRIVIAL"});

    if (res.snapshots.empty()) {
        rep.expect("snapshot_available", 0.0, {1.0, 0.0, "TRIVIAL"});
        if (out) write_report(rep, *out);
        return rep;
    }
    const auto& snap = res.snapshots.front();
    const double tol = s.solver.residual_tol;
    bool T_mono = true, u_mono = true, core_above = true;
    for (int j = 0; j < g.nz; ++j) {
        for (int i = 0; i < g.nr; ++i) {
            const std::size_t c = g.index(i, j);
            const double T_next = i + 1 < g.nr ? snap.T[c + 1] : snap.T_rim;
            const double u_next = i + 1 < g.nr ? snap.u_w[c + 1] : snap.u_rim;
            if (!(T_next > snap.T[c])) T_mono = false;
            if (u_next > snap.u_w[c] + tol) u_mono = false;
        }
        if (!(snap.u_w[g.index(0, j)] > snap.u_rim)) core_above = false;
    }
    rep.expect("T_increasing_core_to_rim", as_flag(T_mono), {1.0, 0.0, "PUBLISHED"});
    rep.expect("uw_decreasing_core_to_rim", as_flag(u_mono), {1.0, 0.0, "PUBLISHED"});
    rep.expect("core_uw_above_rim", as_flag(core_above), {1.0, 0.0, "PUBLISHED"});
    rep.expect("rim_T_C", snap.T_rim - 273.15, {s.boundary_temperature(t) - 273.15, 1e-9, "PUBLISHED"});
    rep.expect("rim_uw_MPa", snap.u_rim * 1e-6, {s.initial.u_w * 1e-6, 0.0, "TRIVIAL"});
    rep.measured["snapshot_t_s"] = snap.t;

    if (out) {
        const int j = g.nz / 2;
        std::string csv = fmt::format("# t_s={:.4f} z_m={:.6f}\nr_m,T_C,u_w_MPa\n", snap.t, g.z[j]);
        for (int i = 0; i < g.nr; ++i) {
            csv += fmt::format("{:.6f},{:.6f},{:.6f}\n", g.r[i], snap.T[g.index(i, j)] - 273.15, snap.u_w[g.index(i, j)] * 1e-6);
        }
        csv += fmt::format("{:.6f},{:.6f},{:.6f}\n", g.R, snap.T_rim - 273.15, snap.u_rim * 1e-6);
        emit(rep, out, "fields_profile.csv", csv);
        emit(rep, out, "fields_T_grid.txt", solver::snapshot_grid(snap, g, "T"));
        emit(rep, out, "fields_uw_grid.txt", solver::snapshot_grid(snap, g, "u_w"));
        write_report(rep, *out);
    }
    return rep;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"capillary", "pressurization", "deborah", "stresspath", "fields"};
    return names;
}

std::vector<VerificationReport> run_suite(const std::string& name, const ScenarioSpec& scenario, const OutDir& out) {
    const auto& names = suite_names();
    if (name != "all" && std::find(names.begin(), names.end(), name) == names.end()) {
        throw ConfigError(fmt::format("unknown suite '{}' (expected all, {})", name, fmt::join(names, ", ")));
    }
    std::vector<VerificationReport> reports;
    for (const auto& n : names) {
        if (name != "all" && name != n) continue;
        const OutDir dir = out ? OutDir(*out / n) : std::nullopt;
        if (n == "capillary") reports.push_back(verify_capillary({}, dir));
        if (n == "pressurization") reports.push_back(verify_undrained_pressurization(scenario, dir));
        if (n == "deborah") reports.push_back(verify_deborah(scenario, dir));
        if (n == "stresspath") reports.push_back(stress_path_comparison(scenario, dir));
        if (n == "fields") reports.push_back(field_snapshot_check(scenario, scenario.loading.t_end, dir));
    }
    return reports;
}

// Sweeps

std::string sweep_path(const std::string& param) {
    const auto paths = reasoning::scenario_paths();
    if (param.find('.') != std::string::npos) {
        if (std::find(paths.begin(), paths.end(), param) == paths.end()) {
            throw ConfigError("sweep: unknown scenario entry '" + param + "'");
        }
        return param;
    }
    std::vector<std::string> hits;
    for (const auto& p : paths) {
        if (p.size() > param.size() && p.compare(p.size() - param.size() - 1, std::string::npos, "." + param) == 0) {
            hits.push_back(p);
        }
    }
    if (hits.size() != 1) {
        throw ConfigError(hits.empty() ? "sweep: unknown parameter '" + param + "'"
                                       : fmt::format("sweep: '{}' is ambiguous ({})", param, fmt::join(hits, ", ")));
    }
    return hits.front();
}

std::vector<SweepRow> run_sweep(std::string_view scenario_text, std::string_view source,
                                const std::vector<reasoning::Override>& base_overrides,
                                const skills::SkillRegistry& registry, const std::string& param,
                                const std::vector<double>& values, int jobs, const OutDir& out) {
    const std::string path = sweep_path(param);
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());

    // Parse every row up front so configuration errors surface before any run.
    std::vector<ScenarioSpec> scenarios;
    for (double v : sorted) {
        auto ov = base_overrides;
        ov.emplace_back(path, fmt::format("{:.17g}", v));
        scenarios.push_back(reasoning::parse_scenario(scenario_text, source, ov));
    }

    std::vector<SweepRow> rows(sorted.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            try {
                const auto& s = scenarios[i];
                const auto r = reasoning::reason(registry, s);
                const auto res = solver::run(s, solver::SolverConfig::from_scenario(s, r.plan));
                rows[i] = {sorted[i], r.report.deborah, r.report.regime, res.final_state.stress.p_eff,
                           res.final_state.t, res.final_state.failure.state};
                if (out) {
                    const auto dir = *out / fmt::format("row_{:03d}", i);
                    write_text_file(dir / "trace.csv", solver::trace_csv(res.trace));
                    write_text_file(dir / "plan.txt", reasoning::format_reasoning(r));
                }
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(rows.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return rows;
}

std::string sweep_csv(const std::string& param, const std::vector<SweepRow>& rows) {
    std::string out = param + ",De,regime,final_p_eff_MPa,final_t_s,verdict\n";
    for (const auto& r : rows) {
        out += fmt::format("{:.6g},{:.6e},{},{:.6f},{:.4f},{}\n", r.value, r.deborah, reasoning::to_string(r.regime),
                           r.final_p_eff * 1e-6, r.final_t, constitutive::to_string(r.verdict));
    }
    return out;
}

}  // namespace mechcomplete::harness
