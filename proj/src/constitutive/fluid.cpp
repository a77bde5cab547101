#include "mechcomplete/fluid.hpp"

#include <cmath>
#include <string>

#include "mechcomplete/error.hpp"

namespace mechcomplete::constitutive {

void FluidModel::validate() const {
    if (!(c_f > 0.0 && c_phi > 0.0 && alpha_s > 0.0)) {
        throw ConfigError("fluid: compressibilities and solid expansion must be positive");
    }
    if (!(viscosity.A > 0.0 && viscosity.B > 0.0 && viscosity.C > 0.0)) {
        throw ConfigError("fluid: viscosity constants must be positive");
    }
    if (!(viscosity.C < kViscosityTmin)) throw ConfigError("fluid: viscosity C must lie below 273.15 K");
    if (!(expansion.alpha_f0 > 0.0)) throw ConfigError("fluid: alpha_f must be positive");
    const double mu25 = constitutive::viscosity(*this, 298.15);
    if (mu25 < 8.0e-4 || mu25 > 1.0e-3) {
        throw ConfigError("fluid: viscosity at 25 degC (" + std::to_string(mu25) +
                          " Pa s) is outside the water band [8.0e-4, 1.0e-3]");
    }
}

double viscosity(const FluidModel& fluid, double T) {
    if (!(T >= kViscosityTmin && T <= kViscosityTmax)) {
        throw OutOfRange("viscosity: T = " + std::to_string(T) + " K outside [273.15, 573.15] K");
    }
    const auto& v = fluid.viscosity;
    return v.A * std::pow(10.0, v.B / (T - v.C));
}

double alpha_f(const FluidModel& fluid, double T) {
    const auto& e = fluid.expansion;
    return e.alpha_f0 * (1.0 + e.ramp * (T - e.T_ref));
}

double lambda_tp(const FluidModel& fluid, double T) {
    const double af = alpha_f(fluid, T);
    if (!(af > fluid.alpha_s)) {
        throw NegativeCoefficient("lambda_tp: alpha_f(T) = " + std::to_string(af) +
                                  " does not exceed alpha_s = " + std::to_string(fluid.alpha_s));
    }
    return (af - fluid.alpha_s) / (fluid.c_f + fluid.c_phi);
}

double hydraulic_diffusivity(double k, double mu, double S_s) { return k / (mu * S_s); }

}  // namespace mechcomplete::constitutive
