#include "mechcomplete/mcc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mechcomplete/error.hpp"

namespace mechcomplete::constitutive {

void MccParams::validate() const {
    if (!(M > 0.0)) throw ConfigError("MCC: M must be positive");
    if (!(kappa_c > 0.0 && lambda_c > kappa_c)) throw ConfigError("MCC: requires lambda > kappa > 0");
    if (!(nu > 0.0 && nu < 0.5)) throw ConfigError("MCC: Poisson ratio must lie in (0, 0.5)");
    if (!(p_c0 > 0.0)) throw ConfigError("MCC: p_c0 must be positive");
    if (!(e0 > 0.0)) throw ConfigError("MCC: e0 must be positive");
    if (!(hvorslev_ratio > 0.0)) throw ConfigError("MCC: Hvorslev slope ratio must be positive");
}

double yield_function(double p_eff, double q, double p_c, double M) {
    return q * q + M * M * p_eff * (p_eff - p_c);
}

double hardening_update(double p_c, double d_eps_v_p, const MccParams& params) {
    return p_c * std::exp(params.hardening_coefficient() * d_eps_v_p);
}

ElasticModuli elastic_moduli(double p_eff, const MccParams& params) {
    const double K = (1.0 + params.e0) * p_eff / params.kappa_c;
    const double G = 3.0 * K * (1.0 - 2.0 * params.nu) / (2.0 * (1.0 + params.nu));
    return {K, G};
}

double default_yield_tolerance(double p_c, double M) { return 1e-12 * M * M * p_c * p_c; }

namespace {

struct Projection {
    double p = 0.0;
    double q = 0.0;
    double p_c = 0.0;
    double d_eps_v_p = 0.0;
    double f = 0.0;
};

// Solves pc = pc_n * exp(c1 * (2 p_tr - pc)). The residual is concave and
// increasing in pc, so Newton started left of the root climbs monotonically.
double solve_hardened_pc(double pc_n, double c1, double p_tr) {
    if (c1 == 0.0) return pc_n;
    const double hi = pc_n * std::exp(2.0 * c1 * p_tr);
    double x = pc_n * std::exp(c1 * (2.0 * p_tr - hi));
    for (int it = 0; it < 200; ++it) {
        const double e = pc_n * std::exp(c1 * (2.0 * p_tr - x));
        const double h = x - e;
        const double dh = 1.0 + c1 * e;
        const double next = x - h / dh;
        if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(next)) return next;
        x = next;
    }
    return x;
}

Projection project(double dgamma, const MccState& trial, const ElasticModuli& el, const MccParams& params) {
    const double M2 = params.M * params.M;
    const double a = el.bulk * M2 * dgamma;
    const double d = 1.0 + 2.0 * a;
    const double c1 = params.hardening_coefficient() * M2 * dgamma / d;

    Projection out;
    out.p_c = std::max(trial.p_c, solve_hardened_pc(trial.p_c, c1, trial.p_eff));
    out.p = (trial.p_eff + a * out.p_c) / d;
    out.q = trial.q / (1.0 + 6.0 * el.shear * dgamma);
    out.d_eps_v_p = dgamma * M2 * (2.0 * out.p - out.p_c);
    out.f = yield_function(out.p, out.q, out.p_c, params.M);
    return out;
}

}  // namespace

ReturnMapResult return_map(const MccState& trial, const MccParams& params, const ReturnMapOptions& options) {
    ReturnMapResult result;
    result.state = trial;
    const double tol = options.tol > 0.0 ? options.tol : default_yield_tolerance(trial.p_c, params.M);

    if (trial.p_eff <= 0.0) {
        result.state.p_eff = 0.0;
        result.state.q = 0.0;
        result.plastic = true;
        result.tension_clamped = true;
        return result;
    }

    const double f_trial = yield_function(trial.p_eff, trial.q, trial.p_c, params.M);
    if (f_trial <= tol) return result;

    const ElasticModuli el = elastic_moduli(trial.p_eff, params);
    result.moduli = el;
    result.plastic = true;

    // Bracket the plastic multiplier: F(0) > 0, F(inf) < 0.
    const double fp = params.M * params.M * (2.0 * trial.p_eff - trial.p_c);
    const double fq = 2.0 * trial.q;
    double lo = 0.0;
    double f_lo = f_trial;
    double hi = f_trial / (el.bulk * fp * fp + 3.0 * el.shear * fq * fq);
    Projection at_hi = project(hi, trial, el, params);
    for (int k = 0; at_hi.f > 0.0; ++k) {
        if (k > 400) throw NoConvergence("return_map: could not bracket the plastic multiplier");
        lo = hi;
        f_lo = at_hi.f;
        hi *= 2.0;
        at_hi = project(hi, trial, el, params);
    }
    if (std::abs(at_hi.f) <= tol) {
        result.state = {at_hi.p, at_hi.q, at_hi.p_c, trial.eps_v_p + at_hi.d_eps_v_p};
        result.plastic_multiplier = hi;
        return result;
    }

    // Illinois regula falsi on the bracket.
    double f_hi = at_hi.f;
    int side = 0;
    for (int it = 1; it <= options.max_iterations; ++it) {
        const double x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        const Projection pr = project(x, trial, el, params);
        result.iterations = it;
        if (std::abs(pr.f) <= tol || hi - lo <= 1e-15 * hi) {
            if (std::abs(pr.f) > tol) break;
            result.state = {pr.p, pr.q, pr.p_c, trial.eps_v_p + pr.d_eps_v_p};
            result.plastic_multiplier = x;
            return result;
        }
        if (pr.f > 0.0) {
            lo = x;
            f_lo = pr.f;
            if (side == +1) f_hi *= 0.5;
            side = +1;
        } else {
            hi = x;
            f_hi = pr.f;
            if (side == -1) f_lo *= 0.5;
            side = -1;
        }
    }
    throw NoConvergence("return_map: |f| above tolerance after " + std::to_string(options.max_iterations) +
                        " iterations");
}

std::string_view to_string(FailureMode mode) {
    switch (mode) {
        case FailureMode::safe: return "safe";
        case FailureMode::tensile_failure: return "tensile_failure";
        case FailureMode::shear_failure: return "shear_failure";
    }
    return "?";
}

double hvorslev_q(double p_eff, double p_c, const MccParams& params) {
    const double p_cs = 0.5 * p_c;
    return params.M * p_cs + params.hvorslev_ratio * params.M * (p_eff - p_cs);
}

FailureVerdict failure_check(double p_eff, double q, double p_c, const MccParams& params) {
    if (p_eff <= 0.0) return {FailureMode::tensile_failure, p_eff};

    const double p_cs = 0.5 * p_c;
    // p' where the Hvorslev line reaches this q; beyond the critical state the
    // dry side starts at p_c/2 itself.
    const double p_h = std::min(p_cs + (q - params.M * p_cs) / (params.hvorslev_ratio * params.M), p_cs);
    if (p_eff < p_cs && q >= hvorslev_q(p_eff, p_c, params)) {
        return {FailureMode::shear_failure, p_eff - p_h};
    }
    return {FailureMode::safe, std::min(p_eff, p_eff - p_h)};
}

}  // namespace mechcomplete::constitutive
