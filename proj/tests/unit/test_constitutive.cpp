#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mechcomplete/capillary.hpp"
#include "mechcomplete/error.hpp"
#include "mechcomplete/fluid.hpp"
#include "mechcomplete/harness.hpp"
#include "mechcomplete/mcc.hpp"
#include "oracles.hpp"

using namespace mechcomplete;
using namespace mechcomplete::constitutive;

namespace {

constexpr double MPa = 1e6;

MccParams table1() { return MccParams{}; }

// Cosine of the angle between the elastic-metric projection direction and
// grad f, with grad f from central differences at 1e-6 relative step.
double projection_alignment(const MccState& trial, const ReturnMapResult& r, const MccParams& params) {
    const auto& s = r.state;
    const double hp = 1e-6 * std::max(std::abs(s.p_eff), 1.0);
    const double hq = 1e-6 * std::max(std::abs(s.q), 1.0);
    const double fp = (yield_function(s.p_eff + hp, s.q, s.p_c, params.M) - yield_function(s.p_eff - hp, s.q, s.p_c, params.M)) / (2 * hp);
    const double fq = (yield_function(s.p_eff, s.q + hq, s.p_c, params.M) - yield_function(s.p_eff, s.q - hq, s.p_c, params.M)) / (2 * hq);
    // Direction W (x_tr - x) with W = diag(1/K, 1/(3G)).
    const double dp = (trial.p_eff - s.p_eff) / r.moduli.bulk;
    const double dq = (trial.q - s.q) / (3.0 * r.moduli.shear);
    const double n1 = std::hypot(dp, dq);
    const double n2 = std::hypot(fp, fq);
    if (n1 == 0.0 || n2 == 0.0) return 1.0;
    return (dp * fp + dq * fq) / (n1 * n2);
}

}  // namespace

TEST(Yield, ApexAndCriticalState) {
    EXPECT_EQ(yield_function(60 * MPa, 0.0, 60 * MPa, 1.2), 0.0);
    const double pc = 60 * MPa, M = 1.2;
    EXPECT_NEAR(yield_function(pc / 2, M * pc / 2, pc, M), 0.0, 1e-6 * M * M * pc * pc * 1e-6);
}

TEST(Yield, InitialStateIsElastic) {
    EXPECT_NEAR(yield_function(46 * MPa, 15 * MPa, 60 * MPa, 1.2) / (MPa * MPa), -702.36, 1e-9);
}

TEST(Yield, CriticalStateIdentityRandom) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pc_d(1e6, 2e8), m_d(0.3, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const double pc = pc_d(rng), M = m_d(rng);
        EXPECT_LE(std::abs(yield_function(pc / 2, M * pc / 2, pc, M)), 1e-12 * M * M * pc * pc);
    }
}

TEST(Hardening, ClosedForm) {
    const auto p = table1();
    EXPECT_DOUBLE_EQ(hardening_update(60 * MPa, 0.0, p), 60 * MPa);
    EXPECT_NEAR(hardening_update(60 * MPa, 1e-3, p) / MPa, 60.0 * std::exp(1.3 / 0.12 * 1e-3), 1e-12);
    EXPECT_NEAR(hardening_update(60 * MPa, 1e-3, p) / MPa, 60.654, 1e-3);
}

TEST(Hardening, HalfStepsCompose) {
    const auto p = table1();
    const double one = hardening_update(60 * MPa, 2e-3, p);
    const double two = hardening_update(hardening_update(60 * MPa, 1e-3, p), 1e-3, p);
    EXPECT_NEAR(one, two, 1e-9 * one);
}

TEST(ReturnMap, ElasticTrialUnchanged) {
    const MccState trial{46 * MPa, 15 * MPa, 60 * MPa, 0.0};
    const auto r = return_map(trial, table1());
    EXPECT_FALSE(r.plastic);
    EXPECT_EQ(r.state.p_eff, trial.p_eff);
    EXPECT_EQ(r.state.q, trial.q);
    EXPECT_EQ(r.state.p_c, trial.p_c);
}

TEST(ReturnMap, OnSurfaceUnchanged) {
    const double pc = 60 * MPa, M = 1.2;
    const MccState trial{pc / 2, M * pc / 2, pc, 0.0};
    const auto r = return_map(trial, table1());
    EXPECT_EQ(r.state.p_eff, trial.p_eff);
    EXPECT_EQ(r.state.q, trial.q);
}

TEST(ReturnMap, CompressionBeyondApex) {
    const auto params = table1();
    const MccState trial{70 * MPa, 0.0, 60 * MPa, 0.0};
    const auto r = return_map(trial, params);
    ASSERT_TRUE(r.plastic);
    const double tol = default_yield_tolerance(r.state.p_c, params.M);
    EXPECT_LE(std::abs(yield_function(r.state.p_eff, r.state.q, r.state.p_c, params.M)), tol);
    EXPECT_GT(r.state.p_c, 60 * MPa);
    EXPECT_GT(r.state.eps_v_p, 0.0);

    // Plastic strain from the elastic split must reproduce the hardened p_c.
    const double deps = (trial.p_eff - r.state.p_eff) / r.moduli.bulk;
    EXPECT_NEAR(r.state.p_c, hardening_update(60 * MPa, deps, params), 1e-9 * r.state.p_c);

    const auto ref = oracle::closest_on_ellipse(trial.p_eff, trial.q, r.state.p_c, params.M, r.moduli.bulk, r.moduli.shear);
    EXPECT_NEAR(r.state.p_eff, ref.p, 1e-6 * r.state.p_c);
    EXPECT_NEAR(r.state.q, ref.q, 1e-6 * r.state.p_c);
}

TEST(ReturnMap, TensionClamped) {
    const auto r = return_map({-1 * MPa, 5 * MPa, 60 * MPa, 0.0}, table1());
    EXPECT_TRUE(r.tension_clamped);
    EXPECT_EQ(r.state.p_eff, 0.0);
}

TEST(ReturnMap, RandomTrialsMatchDenseOracle) {
    const auto params = table1();
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> pc_d(10 * MPa, 100 * MPa), pr(0.01, 1.6), qr(0.0, 1.5);
    int plastic = 0;
    for (int i = 0; i < 300; ++i) {
        const double pc = pc_d(rng);
        const MccState trial{pr(rng) * pc, qr(rng) * params.M * pc, pc, 0.0};
        const auto r = return_map(trial, params);
        if (!r.plastic) continue;
        ++plastic;
        const auto ref = oracle::closest_on_ellipse(trial.p_eff, trial.q, r.state.p_c, params.M, r.moduli.bulk,
                                                    r.moduli.shear, 20000);
        const double d2 = (r.state.p_eff - trial.p_eff) * (r.state.p_eff - trial.p_eff) / r.moduli.bulk +
                          (r.state.q - trial.q) * (r.state.q - trial.q) / (3.0 * r.moduli.shear);
        EXPECT_LE(d2, ref.distance2 * (1.0 + 1e-6) + 1e-9) << "trial " << i;
        EXPECT_GT(projection_alignment(trial, r, params), 1.0 - 1e-6) << "trial " << i;
    }
    EXPECT_GT(plastic, 50);
}

TEST(Failure, Envelopes) {
    const auto p = table1();
    EXPECT_EQ(failure_check(-0.1 * MPa, 15 * MPa, 60 * MPa, p).state, FailureMode::tensile_failure);
    EXPECT_EQ(failure_check(0.0, 0.0, 60 * MPa, p).state, FailureMode::tensile_failure);
    EXPECT_EQ(failure_check(46 * MPa, 15 * MPa, 60 * MPa, p).state, FailureMode::safe);
    EXPECT_GT(failure_check(46 * MPa, 15 * MPa, 60 * MPa, p).margin, 0.0);
    EXPECT_EQ(failure_check(8.9 * MPa, 15 * MPa, 60 * MPa, p).state, FailureMode::safe);
    EXPECT_EQ(failure_check(5 * MPa, 30 * MPa, 60 * MPa, p).state, FailureMode::shear_failure);
}

TEST(Failure, ShearOnlyOnDrySide) {
    const auto p = table1();
    // Above the Hvorslev line but on the wet side: not a shear verdict.
    EXPECT_EQ(failure_check(40 * MPa, 60 * MPa, 60 * MPa, p).state, FailureMode::safe);
}

TEST(Failure, NaivePathMeetsTensionBeforeShear) {
    const auto p = table1();
    for (double pe = 46 * MPa; pe > 0.0; pe -= 0.01 * MPa) {
        ASSERT_EQ(failure_check(pe, 15 * MPa, 60 * MPa, p).state, FailureMode::safe) << pe;
    }
}

TEST(Fluid, ViscosityOracle) {
    const FluidModel f;
    EXPECT_NEAR(viscosity(f, 298.15), oracle::vogel(298.15), 1e-18);
    EXPECT_NEAR(viscosity(f, 298.15), 8.9e-4, 0.01e-4);
    EXPECT_NEAR(viscosity(f, 473.15), 1.34e-4, 0.01e-4);
    EXPECT_THROW(viscosity(f, 250.0), OutOfRange);
    EXPECT_THROW(viscosity(f, 600.0), OutOfRange);
}

TEST(Fluid, ViscosityDecreasing) {
    const FluidModel f;
    for (double T = 273.15; T < 573.15; T += 1.0) EXPECT_GT(viscosity(f, T), viscosity(f, T + 1.0));
}

TEST(Fluid, LambdaOracle) {
    const FluidModel f;
    const double expect = oracle::lambda_tp(3.0e-4, 3.3e-5, 4.0e-10, 2.0e-11);
    EXPECT_DOUBLE_EQ(lambda_tp(f, 298.15), expect);
    EXPECT_NEAR(lambda_tp(f, 298.15) / 0.636e6, 1.0, 0.005);
}

TEST(Fluid, LambdaDegenerate) {
    FluidModel f;
    f.expansion.alpha_f0 = f.alpha_s;
    EXPECT_THROW(lambda_tp(f, 298.15), NegativeCoefficient);
}

TEST(Fluid, LambdaHomogeneity) {
    FluidModel f;
    const double base = lambda_tp(f, 298.15);
    f.c_f *= 2;
    f.c_phi *= 2;
    EXPECT_NEAR(lambda_tp(f, 298.15), base / 2, 1e-9 * base);
}

TEST(Fluid, SanityBand) {
    FluidModel f;
    EXPECT_NO_THROW(f.validate());
    f.viscosity.A *= 2;
    EXPECT_THROW(f.validate(), ConfigError);
}

TEST(Fluid, HydraulicDiffusivity) {
    EXPECT_NEAR(hydraulic_diffusivity(1e-16, 8.9e-4, 1.28e-10), 8.78e-4, 0.01e-4);
    EXPECT_DOUBLE_EQ(hydraulic_diffusivity(1e-16, 4.45e-4, 1.28e-10), 2.0 * hydraulic_diffusivity(1e-16, 8.9e-4, 1.28e-10));
    const FluidModel f;
    const double r = hydraulic_diffusivity(1e-16, viscosity(f, 400.0), 1.28e-10) /
                     hydraulic_diffusivity(1e-16, viscosity(f, 298.15), 1.28e-10);
    EXPECT_NEAR(r, viscosity(f, 298.15) / viscosity(f, 400.0), 1e-12 * r);
}

TEST(Capillary, JurinHeight) {
    const CapillaryTube tube;
    EXPECT_NEAR(jurin_height(tube), 0.2968, 5e-5);
    EXPECT_NEAR(jurin_height(tube), oracle::jurin(5e-5, 0.0728, 0.0, 1000.0, 9.81), 1e-15);
}

TEST(Capillary, RateSigns) {
    const CapillaryTube tube;
    const double H = jurin_height(tube);
    EXPECT_NEAR(capillary_rise_rate(H, tube), 0.0, 1e-15);
    for (double h = 1e-5; h < H; h += H / 100) EXPECT_GT(capillary_rise_rate(h, tube), 0.0);
}

TEST(Capillary, EulerAgreesWithFineRk4) {
    const CapillaryTube tube;
    const auto pts = harness::integrate_capillary(tube);
    const double H = jurin_height(tube);
    double h_ref = pts.front().h;
    double worst = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double span = pts[i].t - pts[i - 1].t;
        h_ref = oracle::capillary_rk4(h_ref, span, span / 10.0, tube.r, tube.gamma, tube.theta, tube.rho, tube.mu, tube.g);
        worst = std::max(worst, std::abs(pts[i].h - h_ref) / H);
        ASSERT_GE(pts[i].h, pts[i - 1].h);
        ASSERT_LE(pts[i].h, H * 1.001);
    }
    EXPECT_LT(worst, 5e-3);
    EXPECT_NEAR(pts.back().h, H, 1e-3 * H);
    EXPECT_NEAR(h_ref, H, 1e-3 * H);
}

TEST(Capillary, DoublingGammaDoublesHeight) {
    CapillaryTube tube;
    const double h1 = harness::integrate_capillary(tube).back().h;
    tube.gamma *= 2;
    const double h2 = harness::integrate_capillary(tube).back().h;
    EXPECT_NEAR(h2 / h1, 2.0, 1e-3);
}
