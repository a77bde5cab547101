// Command-line front end: plan, graph, run, verify and sweep.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "CLI11.hpp"
#include "mechcomplete/embedded_data.hpp"
#include "mechcomplete/error.hpp"
#include "mechcomplete/graph.hpp"
#include "mechcomplete/harness.hpp"
#include "mechcomplete/plan.hpp"
#include "mechcomplete/solver.hpp"

namespace fs = std::filesystem;
using namespace mechcomplete;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kConfig = 2, kPhysicalFailure = 3, kNumerical = 4 };

struct Common {
    std::string scenario_path;
    std::string skills_path;
    std::vector<std::string> sets;
    std::string out_dir;
};

struct Inputs {
    std::string text;
    std::string source;
    std::vector<reasoning::Override> overrides;
    reasoning::ScenarioSpec scenario;
    skills::SkillRegistry registry;
};

Inputs load_inputs(const Common& c) {
    Inputs in;
    if (c.scenario_path.empty()) {
        in.text = std::string(embedded::reference_scenario_json());
        in.source = "<reference scenario>";
    } else {
        in.text = read_text_file(c.scenario_path);
        in.source = c.scenario_path;
    }
    for (const auto& s : c.sets) in.overrides.push_back(reasoning::parse_override(s));
    in.scenario = reasoning::parse_scenario(in.text, in.source, in.overrides);
    in.registry = c.skills_path.empty() ? skills::default_registry() : skills::load_registry(c.skills_path);
    return in;
}

fs::path out_dir(const Common& c) {
    if (!c.out_dir.empty()) return c.out_dir;
    if (const char* env = std::getenv("MECHCOMPLETE_OUT"); env && *env) return env;
    return "mechcomplete_out";
}

struct Manifest {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(std::string file, std::string what) { entries.emplace_back(std::move(file), std::move(what)); }
    void write(const fs::path& dir) const {
        std::string text = "# files written by this invocation\n";
        for (const auto& [file, what] : entries) text += fmt::format("{}\t{}\n", file, what);
        harness::write_text_file(dir / "MANIFEST.txt", text);
    }
};

std::string solver_plan_text(const reasoning::ModelPlan& plan) {
    auto join = [](const std::vector<std::string>& v) {
        return v.empty() ? std::string("(none)") : fmt::format("{}", fmt::join(v, ", "));
    };
    return fmt::format("pressure_sources: {}\npressure_sinks: {}\nhydraulic_bc: {}\n", join(plan.pressure_source_terms),
                       join(plan.pressure_sink_terms), reasoning::to_string(plan.hydraulic_bc));
}

int cmd_plan(const Common& c) {
    const auto in = load_inputs(c);
    std::cout << reasoning::format_reasoning(reasoning::reason(in.registry, in.scenario));
    return kOk;
}

int cmd_graph(const Common& c, const std::string& output) {
    const auto in = load_inputs(c);
    const auto r = reasoning::reason(in.registry, in.scenario);
    const std::string dot = reasoning::export_graph(r.graph);
    if (output.empty()) {
        std::cout << dot;
    } else {
        harness::write_text_file(output, dot);
    }
    return kOk;
}

int cmd_run(const Common& c, const std::string& mode) {
    const auto in = load_inputs(c);
    reasoning::ModelPlan plan;
    if (mode == "naive") {
        plan = reasoning::naive_plan();
    } else if (mode == "completed") {
        plan = reasoning::completed_plan();
    } else {
        plan = reasoning::reason(in.registry, in.scenario).plan;
    }

    const auto res = solver::run(in.scenario, solver::SolverConfig::from_scenario(in.scenario, plan));
    const fs::path dir = out_dir(c);
    Manifest manifest;

    harness::write_text_file(dir / "solver_plan.txt", solver_plan_text(plan));
    manifest.add("solver_plan.txt", "pressure terms and hydraulic boundary condition assembled by the solver");
    harness::write_text_file(dir / "trace.csv", solver::trace_csv(res.trace));
    manifest.add("trace.csv", "time series: t [s], p' [MPa], q [MPa], mean/max u_w [MPa], T centre/rim [degC], verdict");
    for (const auto& snap : res.snapshots) {
        for (const std::string field : {"T", "u_w"}) {
            const std::string name = fmt::format("snapshot_{}_t{:.1f}.txt", field == "T" ? "T" : "uw", snap.t);
            harness::write_text_file(dir / name, solver::snapshot_grid(snap, res.grid, field));
            manifest.add(name, fmt::format("{} grid at t = {:.1f} s", field == "T" ? "temperature [degC]" : "pore pressure [MPa]", snap.t));
        }
    }

    const auto& fin = res.final_state;
    std::string summary;
    summary += fmt::format("t_final_s: {:.4f}\n", fin.t);
    summary += fmt::format("p_eff_MPa: {:.6f}\n", fin.stress.p_eff * 1e-6);
    summary += fmt::format("q_MPa: {:.6f}\n", fin.stress.q * 1e-6);
    summary += fmt::format("uw_mean_MPa: {:.6f}\n", fin.u_mean * 1e-6);
    summary += fmt::format("uw_max_MPa: {:.6f}\n", fin.u_max * 1e-6);
    summary += fmt::format("verdict: {}\n", constitutive::to_string(fin.failure.state));
    if (res.t_fail) summary += fmt::format("t_fail_s: {:.4f}\n", *res.t_fail);
    harness::write_text_file(dir / "summary.txt", summary);
    manifest.add("summary.txt", "final state and verdict");
    manifest.write(dir);

    std::cout << summary;
    return fin.failed() ? kPhysicalFailure : kOk;
}

int cmd_verify(const Common& c, const std::string& suite) {
    const auto in = load_inputs(c);
    const fs::path dir = out_dir(c);
    const auto reports = harness::run_suite(suite, in.scenario, dir);
    Manifest manifest;
    bool ok = true;
    std::size_t i = 0;
    for (const auto& n : harness::suite_names()) {
        if (suite != "all" && suite != n) continue;
        const auto& rep = reports[i++];
        for (const auto& a : rep.artifacts) manifest.add(n + "/" + a, rep.scenario_name);
        std::cout << rep.text();
        ok = ok && rep.passed();
    }
    manifest.write(dir);
    std::cout << fmt::format("verify: {}\n", ok ? "PASS" : "FAIL");
    return ok ? kOk : kVerifyFailed;
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ConfigError("sweep: '" + item + "' is not a number");
        }
        if (used != item.size()) throw ConfigError("sweep: '" + item + "' is not a number");
        if (!(v > 0.0)) throw ConfigError("sweep: values must be positive");
        values.push_back(v);
    }
    if (values.empty()) throw ConfigError("sweep: no values given");
    return values;
}

int cmd_sweep(const Common& c, const std::string& param, const std::string& values_text, int jobs) {
    const auto values = parse_values(values_text);
    const auto in = load_inputs(c);
    const fs::path dir = out_dir(c);
    const auto rows = harness::run_sweep(in.text, in.source, in.overrides, in.registry, param, values, jobs, dir);
    const std::string csv = harness::sweep_csv(param, rows);
    harness::write_text_file(dir / "sweep.csv", csv);
    Manifest manifest;
    manifest.add("sweep.csv", "one row per value: De, regime, final p' [MPa], final t [s], verdict");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        manifest.add(fmt::format("row_{:03d}/trace.csv", i), fmt::format("trace for {} = {:.6g}", param, rows[i].value));
        manifest.add(fmt::format("row_{:03d}/plan.txt", i), "reasoning summary");
    }
    manifest.write(dir);
    std::cout << csv;
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Supervised thermo-hydro-mechanical simulation of heated saturated rock"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-s,--scenario", common.scenario_path, "scenario JSON (default: bundled sandstone heating test)");
        sub->add_option("--skills", common.skills_path, "skill library JSON (default: bundled library)");
        sub->add_option("--set", common.sets, "override a scenario entry, e.g. --set material.k=1e-20");
    };
    auto add_out = [&](CLI::App* sub) {
        sub->add_option("-o,--out", common.out_dir, "output directory (env MECHCOMPLETE_OUT)");
    };

    auto* plan = app.add_subcommand("plan", "print the regime report, pruning and completion decisions");
    add_common(plan);

    std::string graph_output;
    auto* graph = app.add_subcommand("graph", "export the reasoned causal graph as DOT");
    add_common(graph);
    graph->add_option("-o,--output", graph_output, "write to file instead of stdout");

    std::string mode = "auto";
    auto* run = app.add_subcommand("run", "run the coupled simulation");
    add_common(run);
    add_out(run);
    run->add_option("--mode", mode, "auto, naive or completed")->check(CLI::IsMember({"auto", "naive", "completed"}));

    std::string suite = "all";
    auto* verify = app.add_subcommand("verify", "run verification suites");
    add_common(verify);
    add_out(verify);
    verify->add_option("--suite", suite, "all, capillary, pressurization, deborah, stresspath or fields");

    std::string param = "k";
    std::string values;
    int jobs = 1;
    auto* sweep = app.add_subcommand("sweep", "reason and solve once per parameter value");
    add_common(sweep);
    add_out(sweep);
    sweep->add_option("--param", param, "scenario entry (short name or dotted path)");
    sweep->add_option("--values", values, "comma-separated values")->required();
    sweep->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*plan) return cmd_plan(common);
        if (*graph) return cmd_graph(common, graph_output);
        if (*run) return cmd_run(common, mode);
        if (*verify) return cmd_verify(common, suite);
        if (*sweep) return cmd_sweep(common, param, values, jobs);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    }
    return kConfig;
}
