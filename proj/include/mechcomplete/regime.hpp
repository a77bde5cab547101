#pragma once

#include <string_view>

#include "mechcomplete/scenario.hpp"

namespace mechcomplete::reasoning {

enum class Regime { drained, undrained, transitional };
std::string_view to_string(Regime r);

struct RegimeReport {
    double tau_diff = 0.0;   ///< s
    double tau_load = 0.0;   ///< s
    double deborah = 0.0;    ///< tau_diff / tau_load
    Regime regime = Regime::transitional;
    double beta_used = 0.0;  ///< 1/Pa
    double mu_used = 0.0;    ///< Pa s, viscosity at the evaluation temperature
    double length = 0.0;     ///< m
};

/// drained below De_lo, undrained above De_hi, transitional in between (inclusive).
Regime classify(double deborah, const RegimeThresholds& thresholds);

/// L^2 mu beta / k, the pore-pressure diffusion time.
double diffusion_time(double L, double mu, double beta, double k);

/// Regime report with mu evaluated at T_0.
RegimeReport compute_regime(const ScenarioSpec& scenario);
/// Same, with mu evaluated at T (K). Used by the temperature sweeps.
RegimeReport compute_regime_at(const ScenarioSpec& scenario, double T);

}  // namespace mechcomplete::reasoning
