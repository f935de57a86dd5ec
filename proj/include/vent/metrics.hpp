#pragma once

#include "vent/types.hpp"

#include <stdexcept>

namespace vent {

// 10 air changes per hour correspond to a 3.24 m/s supply velocity; the map
// is linear through the origin.
inline constexpr double kVelocityPerAch = 0.324;  // m/s per ACH

// CO2 concentration threshold above which air quality counts as violated.
inline constexpr double kCo2ViolationPpm = 1200.0;

// Mass-fraction -> ppm conversion multiplies by MW_CO2 / MW_air. Note the
// standard mole-fraction conversion would divide by this ratio instead; the
// multiplicative orientation is kept as the single source of truth here so
// flipping it is a one-line change.
inline constexpr double kMwCo2 = 44.01;   // g/mol
inline constexpr double kMwAir = 28.97;   // g/mol
inline constexpr double kPpmPerMassFraction = 1e6 * kMwCo2 / kMwAir;

inline double ach_to_velocity(double ach) {
    if (ach < 0.0) throw std::invalid_argument("ACH must be >= 0");
    return ach * kVelocityPerAch;
}

// Percent of maximum fan power: mean over the six groups of rate/rate_max.
// Independent of angles.
inline double energy_fraction(const ControlAction& action, const ControlBounds& bounds = {}) {
    double sum = 0.0;
    for (double r : action.rates) sum += r / bounds.rate_max;
    return sum / 6.0 * 100.0;
}

// max(0, (peak - 1200)/1200) in percent.
inline double violation_pct(double peak_co2) {
    if (peak_co2 < 0.0) throw std::invalid_argument("peak CO2 must be >= 0");
    const double v = (peak_co2 - kCo2ViolationPpm) / kCo2ViolationPpm * 100.0;
    return v > 0.0 ? v : 0.0;
}

inline double ppm_from_mass_fraction(double y_co2) {
    if (y_co2 < 0.0 || y_co2 > 1.0) {
        throw std::invalid_argument("mass fraction must lie in [0, 1]");
    }
    return y_co2 * kPpmPerMassFraction;
}

inline double mass_fraction_from_ppm(double ppm) {
    if (ppm < 0.0) throw std::invalid_argument("ppm must be >= 0");
    return ppm / kPpmPerMassFraction;
}

}  // namespace vent
