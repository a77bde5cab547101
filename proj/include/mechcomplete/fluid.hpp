#pragma once

namespace mechcomplete::constitutive {

/// mu = A * 10^(B / (T - C)), Vogel form for liquid water.
struct VogelViscosity {
    double A = 2.414e-5;  ///< Pa s
    double B = 247.8;     ///< K
    double C = 140.0;     ///< K
};

/// alpha_f(T) = alpha_f0 * (1 + ramp * (T - T_ref)).
struct FluidExpansion {
    double alpha_f0 = 3.0e-4;  ///< 1/K
    double ramp = 0.0;         ///< 1/K
    double T_ref = 298.15;     ///< K
};

struct FluidModel {
    double c_f = 4.0e-10;     ///< fluid compressibility, 1/Pa
    double alpha_s = 3.3e-5;  ///< solid expansion, 1/K
    double c_phi = 2.0e-11;   ///< pore compressibility, 1/Pa
    VogelViscosity viscosity;
    FluidExpansion expansion;

    void validate() const;
};

inline constexpr double kViscosityTmin = 273.15;
inline constexpr double kViscosityTmax = 573.15;

/// Pa s. Throws OutOfRange outside [273.15, 573.15] K.
double viscosity(const FluidModel& fluid, double T);

double alpha_f(const FluidModel& fluid, double T);

/// Thermal pressurization coefficient (alpha_f - alpha_s)/(c_f + c_phi), Pa/K.
/// Throws NegativeCoefficient when alpha_f(T) <= alpha_s.
double lambda_tp(const FluidModel& fluid, double T);

/// k / (mu S_s), m^2/s.
double hydraulic_diffusivity(double k, double mu, double S_s);

}  // namespace mechcomplete::constitutive
