#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <random>
#include <string>

#include "mechcomplete/embedded_data.hpp"
#include "mechcomplete/error.hpp"
#include "mechcomplete/graph.hpp"
#include "mechcomplete/plan.hpp"
#include "mechcomplete/regime.hpp"
#include "mechcomplete/scenario.hpp"
#include "oracles.hpp"

using namespace mechcomplete;
using namespace mechcomplete::reasoning;
using skills::FieldId;

namespace {

std::string reference_text() { return std::string(embedded::reference_scenario_json()); }

ScenarioSpec with_k(double k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", k);
    return reference_scenario({{"material.k", buf}});
}

std::size_t count_status(const CausalGraph& g, const std::string& id, EdgeStatus s) {
    return static_cast<std::size_t>(std::count_if(g.edges.begin(), g.edges.end(),
                                                  [&](const CausalEdge& e) { return e.skill_id == id && e.status == s; }));
}

skills::ConstitutiveSkill tp_only() {
    const auto* tp = skills::default_registry().find("thermal_pressurization");
    return *tp;
}

}  // namespace

TEST(Scenario, ReferenceScenarioUnits) {
    const auto s = reference_scenario();
    EXPECT_DOUBLE_EQ(s.geometry.radius, 0.025);
    EXPECT_DOUBLE_EQ(s.material.p_c0, 60e6);
    EXPECT_DOUBLE_EQ(s.initial.T, 298.15);
    EXPECT_DOUBLE_EQ(s.loading.T_max, 473.15);
    EXPECT_DOUBLE_EQ(s.initial.u_w, 4e6);
    EXPECT_EQ(s.phase(), "saturated_liquid");
}

TEST(Scenario, InitialStateConsistentWithLoading) {
    const auto s = reference_scenario();
    EXPECT_NEAR(s.mean_total_stress() - s.initial.u_w, s.initial.p_eff, 1e-6);
    EXPECT_NEAR(s.deviatoric_total_stress(), s.initial.q, 1e-6);
}

TEST(Scenario, BoundaryRampHolds) {
    const auto s = reference_scenario();
    EXPECT_DOUBLE_EQ(s.boundary_temperature(0.0), 298.15);
    EXPECT_DOUBLE_EQ(s.boundary_temperature(100.0), 398.15);
    EXPECT_DOUBLE_EQ(s.boundary_temperature(175.0), 473.15);
    EXPECT_DOUBLE_EQ(s.boundary_temperature(500.0), 473.15);
}

TEST(Scenario, OverridesApply) {
    const auto s = reference_scenario({{"material.k", "1e-20"}, {"solver.dt", "2"}, {"initial.T.unit", "K"}, {"initial.T", "300"}});
    EXPECT_DOUBLE_EQ(s.material.k, 1e-20);
    EXPECT_DOUBLE_EQ(s.solver.dt, 2.0);
    EXPECT_DOUBLE_EQ(s.initial.T, 300.0);
}

TEST(Scenario, OverrideNonNumberRejected) {
    EXPECT_THROW(reference_scenario({{"material.k", "abc"}}), ConfigError);
}

TEST(Scenario, OverrideUnknownPathRejected) {
    EXPECT_THROW(reference_scenario({{"material.warp", "1"}}), ConfigError);
}

TEST(Scenario, ParseOverrideSyntax) {
    EXPECT_EQ(parse_override("a.b=1").first, "a.b");
    EXPECT_EQ(parse_override("a.b=1").second, "1");
    EXPECT_THROW(parse_override("a.b"), ConfigError);
}

TEST(Scenario, UnknownKeyReportsLine) {
    std::string text = reference_text();
    const auto pos = text.find("\"nu\"");
    text.replace(pos, 4, "\"mu\"");
    const int line = static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n')) + 1;
    try {
        parse_scenario(text, "bad.json");
        FAIL() << "expected SchemaError";
    } catch (const SchemaError& e) {
        EXPECT_EQ(e.line(), line);
    }
}

TEST(Scenario, WrongUnitRejected) {
    std::string text = reference_text();
    const auto pos = text.find("\"unit\": \"m^2\"");
    text.replace(pos, 13, "\"unit\": \"m^3\"");
    EXPECT_THROW(parse_scenario(text, "unit.json"), SchemaError);
}

TEST(Scenario, InconsistentEffectiveStressRejected) {
    EXPECT_THROW(reference_scenario({{"initial.p_eff", "40"}}), ConfigError);
}

TEST(Scenario, SaturationOutOfRangeRejected) {
    EXPECT_THROW(reference_scenario({{"initial.S_r", "1.5"}}), ConfigError);
}

TEST(Scenario, ThresholdOrderRejected) {
    EXPECT_THROW(reference_scenario({{"reasoning.De_lo", "20"}}), ConfigError);
}

TEST(Regime, ReferenceScenarioIsDrained) {
    const auto r = compute_regime(reference_scenario());
    const double expect = oracle::deborah(0.025, oracle::vogel(298.15), 1.28e-10, 1e-16, 175.0);
    EXPECT_NEAR(r.deborah, expect, 1e-12 * expect);
    EXPECT_NEAR(r.deborah, 4.07e-3, 0.005e-3);
    EXPECT_EQ(r.regime, Regime::drained);
    EXPECT_DOUBLE_EQ(r.length, 0.025);
    EXPECT_DOUBLE_EQ(r.beta_used, 1.28e-10);
}

TEST(Regime, TightRockIsUndrained) {
    const auto r = compute_regime(with_k(1e-20));
    EXPECT_NEAR(r.deborah, 40.7, 0.05);
    EXPECT_EQ(r.regime, Regime::undrained);
}

TEST(Regime, UnitDeborahIsTransitional) {
    const double k = oracle::deborah(0.025, oracle::vogel(298.15), 1.28e-10, 1.0, 175.0);
    const auto r = compute_regime(with_k(k));
    EXPECT_NEAR(r.deborah, 1.0, 1e-9);
    EXPECT_EQ(r.regime, Regime::transitional);
}

TEST(Regime, ThresholdsAreInclusiveForTransitional) {
    const RegimeThresholds t{0.1, 10.0};
    EXPECT_EQ(classify(0.1, t), Regime::transitional);
    EXPECT_EQ(classify(10.0, t), Regime::transitional);
    EXPECT_EQ(classify(0.0999, t), Regime::drained);
    EXPECT_EQ(classify(10.01, t), Regime::undrained);
}

TEST(Regime, DeborahMonotoneInPermeabilityAndViscosity) {
    double prev = 0.0;
    for (double k = 1e-14; k >= 1e-21; k /= 3.0) {
        const double De = compute_regime(with_k(k)).deborah;
        EXPECT_GT(De, prev);
        prev = De;
    }
    const auto s = reference_scenario();
    EXPECT_GT(compute_regime_at(s, 298.15).deborah, compute_regime_at(s, 400.0).deborah);
}

TEST(Regime, CharacteristicLengthOverride) {
    const auto s = reference_scenario({{"characteristic_length", "50"}, {"characteristic_length.unit", "mm"}});
    EXPECT_NEAR(compute_regime(s).deborah / compute_regime(reference_scenario()).deborah, 4.0, 1e-12);
}

TEST(Graph, AssembledStatuses) {
    const auto g = assemble_graph(skills::default_registry(), reference_scenario());
    EXPECT_EQ(count_status(g, "thermal_pressurization", EdgeStatus::active), 1u);
    EXPECT_EQ(count_status(g, "capillary_saturation", EdgeStatus::active), 1u);
    EXPECT_EQ(count_status(g, "darcy_flow", EdgeStatus::latent), 1u);
    EXPECT_TRUE(std::is_sorted(g.nodes.begin(), g.nodes.end()));
}

TEST(Graph, PruneCapillaryAtFullSaturation) {
    const auto s = reference_scenario();
    const auto g = prune(assemble_graph(skills::default_registry(), s), s);
    EXPECT_EQ(count_status(g, "capillary_saturation", EdgeStatus::pruned), 1u);
    EXPECT_EQ(count_status(g, "thermal_pressurization", EdgeStatus::active), 1u);
    for (const auto& e : g.edges) {
        if (e.status == EdgeStatus::pruned) {
            EXPECT_NE(e.reason.find("S_r = 1"), std::string::npos);
        }
    }
}

TEST(Graph, PartialSaturationKeepsCapillary) {
    const auto s = reference_scenario({{"initial.S_r", "0.8"}});
    const auto g = prune(assemble_graph(skills::default_registry(), s), s);
    EXPECT_EQ(count_status(g, "capillary_saturation", EdgeStatus::pruned), 0u);
    // The pressurization skill requires a saturated liquid phase.
    EXPECT_EQ(count_status(g, "thermal_pressurization", EdgeStatus::pruned), 1u);
}

TEST(Graph, PruneIsIdempotent) {
    const auto s = reference_scenario();
    const auto once = prune(assemble_graph(skills::default_registry(), s), s);
    EXPECT_EQ(prune(once, s), once);
}

TEST(Graph, CompletionActivatesDarcyWhenDrained) {
    const auto s = reference_scenario();
    const auto g = complete_mechanisms(prune(assemble_graph(skills::default_registry(), s), s), compute_regime(s));
    EXPECT_EQ(count_status(g, "darcy_flow", EdgeStatus::activated), 1u);
    EXPECT_EQ(g.count(EdgeStatus::activated), 1u);
    EXPECT_EQ(g.count(EdgeStatus::pruned), 1u);
    EXPECT_TRUE(std::any_of(g.notes.begin(), g.notes.end(),
                            [](const std::string& n) { return n.find("mechanism deficit") != std::string::npos; }));
}

TEST(Graph, CompletionIsIdempotent) {
    const auto s = reference_scenario();
    const auto report = compute_regime(s);
    const auto once = complete_mechanisms(prune(assemble_graph(skills::default_registry(), s), s), report);
    EXPECT_EQ(complete_mechanisms(once, report), once);
}

TEST(Graph, UndrainedLeavesLatent) {
    const auto s = with_k(1e-20);
    const auto g = complete_mechanisms(prune(assemble_graph(skills::default_registry(), s), s), compute_regime(s));
    EXPECT_EQ(g.count(EdgeStatus::activated), 0u);
    EXPECT_EQ(count_status(g, "darcy_flow", EdgeStatus::latent), 1u);
}

TEST(Graph, MissingPriorWithoutSink) {
    const auto reg = skills::make_registry({tp_only()});
    const auto s = reference_scenario();
    const auto g = prune(assemble_graph(reg, s), s);
    EXPECT_THROW(complete_mechanisms(g, compute_regime(s)), MissingPrior);
}

TEST(Graph, UnsatisfiableInput) {
    auto sk = tp_only();
    sk.id = "porosity_consumer";
    sk.inputs = {FieldId::porosity};
    const auto reg = skills::make_registry({sk});
    EXPECT_THROW(assemble_graph(reg, reference_scenario()), UnsatisfiableInput);
}

TEST(Graph, ExportShowsOnePrunedAndOneActivated) {
    const auto r = reason(skills::default_registry(), reference_scenario());
    const std::string dot = export_graph(r.graph);
    auto occurrences = [&](const std::string& needle) {
        std::size_t n = 0;
        for (auto p = dot.find(needle); p != std::string::npos; p = dot.find(needle, p + 1)) ++n;
        return n;
    };
    EXPECT_EQ(occurrences("class=\"pruned\""), 1u);
    EXPECT_EQ(occurrences("class=\"activated\""), 1u);
    EXPECT_EQ(dot.rfind("digraph", 0), 0u);
}

TEST(Graph, AssemblyIndependentOfSkillOrder) {
    auto list = skills::default_registry().skills();
    const auto s = reference_scenario();
    const auto ref = reason(skills::make_registry(list), s);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10; ++i) {
        std::shuffle(list.begin(), list.end(), rng);
        const auto r = reason(skills::make_registry(list), s);
        EXPECT_EQ(r.graph, ref.graph);
        EXPECT_EQ(format_reasoning(r), format_reasoning(ref));
    }
}

TEST(Plan, CompletedPlanForReferenceScenario) {
    const auto r = reason(skills::default_registry(), reference_scenario());
    EXPECT_TRUE(solver_equivalent(r.plan, completed_plan()));
    EXPECT_EQ(r.plan.hydraulic_bc, HydraulicBc::drained);
    EXPECT_TRUE(r.plan.has_sink());
}

TEST(Plan, UndrainedPlanMatchesNaive) {
    const auto r = reason(skills::default_registry(), with_k(1e-20));
    EXPECT_TRUE(solver_equivalent(r.plan, naive_plan()));
}

TEST(Plan, TransitionalIncludesSink) {
    const auto r = reason(skills::default_registry(), with_k(1e-18));
    EXPECT_EQ(r.report.regime, Regime::transitional);
    EXPECT_TRUE(r.plan.has_sink());
}

TEST(Plan, ScenarioBoundaryOverride) {
    const auto r = reason(skills::default_registry(), reference_scenario({{"hydraulic_bc", "no_flux"}}));
    EXPECT_EQ(r.plan.hydraulic_bc, HydraulicBc::no_flux);
    EXPECT_TRUE(std::any_of(r.plan.notes.begin(), r.plan.notes.end(),
                            [](const std::string& n) { return n.find("overridden") != std::string::npos; }));
}

TEST(Plan, FormatIsDeterministic) {
    const auto a = format_reasoning(reason(skills::default_registry(), reference_scenario()));
    const auto b = format_reasoning(reason(skills::default_registry(), reference_scenario()));
    EXPECT_EQ(a, b);
    EXPECT_NE(a.find("regime: drained"), std::string::npos);
    EXPECT_NE(a.find("activated: darcy_flow"), std::string::npos);
    EXPECT_NE(a.find("pruned: capillary_saturation"), std::string::npos);
}
