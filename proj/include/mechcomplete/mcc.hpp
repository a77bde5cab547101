#pragma once

#include <string_view>

namespace mechcomplete::constitutive {

/// Modified Cam-Clay material constants. Stresses in Pa.
struct MccParams {
    double M = 1.2;            ///< critical state slope
    double lambda_c = 0.15;    ///< normal compression index
    double kappa_c = 0.03;     ///< recompression index
    double e0 = 0.3;           ///< initial void ratio
    double nu = 0.3;           ///< Poisson ratio
    double p_c0 = 60.0e6;      ///< initial preconsolidation pressure
    /// Hvorslev line slope as a fraction of M.
    double hvorslev_ratio = 0.5;

    void validate() const;
    /// (1 + e0) / (lambda - kappa)
    double hardening_coefficient() const { return (1.0 + e0) / (lambda_c - kappa_c); }
};

/// Effective-stress point in p'-q space with its hardening variables.
struct MccState {
    double p_eff = 0.0;
    double q = 0.0;
    double p_c = 0.0;
    double eps_v_p = 0.0;

    bool operator==(const MccState&) const = default;
};

/// f = q^2 + M^2 p' (p' - p_c); negative inside the ellipse.
double yield_function(double p_eff, double q, double p_c, double M);

/// Exact exponential integration of dp_c/p_c = (1+e0)/(lambda-kappa) d eps_v^p.
double hardening_update(double p_c, double d_eps_v_p, const MccParams& params);

struct ElasticModuli {
    double bulk = 0.0;
    double shear = 0.0;
};

/// K = (1+e0) p'/kappa, G from Poisson's ratio.
ElasticModuli elastic_moduli(double p_eff, const MccParams& params);

/// Default |f| tolerance: 1e-12 * M^2 * p_c^2.
double default_yield_tolerance(double p_c, double M);

struct ReturnMapOptions {
    double tol = 0.0;  ///< absolute Pa^2; <= 0 selects default_yield_tolerance(trial.p_c, M)
    int max_iterations = 50;
};

struct ReturnMapResult {
    MccState state;
    bool plastic = false;
    bool tension_clamped = false;
    int iterations = 0;
    double plastic_multiplier = 0.0;
    ElasticModuli moduli;  ///< metric the projection was computed in
};

/// Closest-point projection onto the (hardened) yield surface in the
/// elastic-energy metric dp^2/K + dq^2/(3G). Trials with p' <= 0 are
/// clamped to the apex (0, 0). Dilatant flow does not shrink p_c.
/// Throws NoConvergence when the iteration budget is exhausted.
ReturnMapResult return_map(const MccState& trial, const MccParams& params, const ReturnMapOptions& options = {});

enum class FailureMode { safe, tensile_failure, shear_failure };
std::string_view to_string(FailureMode mode);

struct FailureVerdict {
    FailureMode state = FailureMode::safe;
    double margin = 0.0;  ///< Pa along the p' axis to the nearest failure envelope

    bool failed() const { return state != FailureMode::safe; }
    bool operator==(const FailureVerdict&) const = default;
};

/// q on the Hvorslev line through the critical-state point (p_c/2, M p_c/2).
double hvorslev_q(double p_eff, double p_c, const MccParams& params);

/// Tension cutoff at p' <= 0; Hvorslev shear failure on the dry side (p' < p_c/2).
FailureVerdict failure_check(double p_eff, double q, double p_c, const MccParams& params);

}  // namespace mechcomplete::constitutive
