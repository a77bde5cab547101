#include "mechcomplete/capillary.hpp"

#include <cmath>

namespace mechcomplete::constitutive {

double jurin_height(const CapillaryTube& tube) {
    return 2.0 * tube.gamma * std::cos(tube.theta) / (tube.rho * tube.g * tube.r);
}

double capillary_rise_rate(double h, const CapillaryTube& tube) {
    const double drive = 2.0 * tube.gamma * std::cos(tube.theta) / tube.r - tube.rho * tube.g * h;
    return tube.r * tube.r / (8.0 * tube.mu * h) * drive;
}

double capillary_rise_step(double h, double dt, const CapillaryTube& tube) {
    return h + dt * capillary_rise_rate(h, tube);
}

}  // namespace mechcomplete::constitutive
