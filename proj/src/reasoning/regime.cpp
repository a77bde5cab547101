#include "mechcomplete/regime.hpp"

namespace mechcomplete::reasoning {

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::drained: return "drained";
        case Regime::undrained: return "undrained";
        case Regime::transitional: return "transitional";
    }
    return "?";
}

Regime classify(double deborah, const RegimeThresholds& thresholds) {
    if (deborah < thresholds.De_lo) return Regime::drained;
    if (deborah > thresholds.De_hi) return Regime::undrained;
    return Regime::transitional;
}

double diffusion_time(double L, double mu, double beta, double k) { return L * L * mu * beta / k; }

RegimeReport compute_regime_at(const ScenarioSpec& scenario, double T) {
    RegimeReport r;
    r.length = scenario.length_scale();
    r.beta_used = scenario.material.S_s;
    r.mu_used = constitutive::viscosity(scenario.fluid_model(), T);
    r.tau_diff = diffusion_time(r.length, r.mu_used, r.beta_used, scenario.material.k);
    r.tau_load = scenario.loading.t_end;
    r.deborah = r.tau_diff / r.tau_load;
    r.regime = classify(r.deborah, scenario.thresholds);
    return r;
}

RegimeReport compute_regime(const ScenarioSpec& scenario) { return compute_regime_at(scenario, scenario.initial.T); }

}  // namespace mechcomplete::reasoning
