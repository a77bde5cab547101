#pragma once

namespace mechcomplete::constitutive {

struct CapillaryTube {
    double r = 5.0e-5;       ///< m
    double gamma = 0.0728;   ///< N/m
    double theta = 0.0;      ///< rad
    double rho = 1000.0;     ///< kg/m^3
    double mu = 1.0e-3;      ///< Pa s
    double g = 9.81;         ///< m/s^2
};

/// Jurin equilibrium height 2 gamma cos(theta) / (rho g r).
double jurin_height(const CapillaryTube& tube);

/// Lucas-Washburn rate with gravity: r^2/(8 mu h) (2 gamma cos(theta)/r - rho g h).
double capillary_rise_rate(double h, const CapillaryTube& tube);

/// One forward-Euler step of the rise equation. Requires h > 0.
double capillary_rise_step(double h, double dt, const CapillaryTube& tube);

}  // namespace mechcomplete::constitutive
