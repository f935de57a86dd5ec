#pragma once

#include <array>
#include <string>

namespace vent {

// Decision variable for the six ceiling vent groups: airflow rate (m/s)
// and supply angle (degrees) per group.
struct ControlAction {
    std::array<double, 6> rates{};
    std::array<double, 6> angles{};

    static ControlAction uniform(double rate, double angle) {
        ControlAction a;
        a.rates.fill(rate);
        a.angles.fill(angle);
        return a;
    }
};

// Box constraints on the control action. Defaults: 0.324 m/s is 10% of the
// 3.24 m/s maximum (10 air changes per hour); angles sweep 45..135 degrees
// with 90 pointing straight down.
struct ControlBounds {
    double rate_min = 0.324;
    double rate_max = 3.24;
    double angle_min = 45.0;
    double angle_max = 135.0;
};

struct Occupancy {
    int n_p = 0;  // person count, >= 0

    Occupancy() = default;
    explicit Occupancy(int count);
};

// Episode-level summary matching the report columns: temporal average and
// final-step value for mean/peak CO2 and violation, plus energy use as a
// percent of maximum fan power.
struct EpisodeMetrics {
    double mean_co2_avg = 0.0;    // ppm
    double mean_co2_final = 0.0;  // ppm
    double peak_co2_avg = 0.0;    // ppm
    double peak_co2_final = 0.0;  // ppm
    double violation_avg = 0.0;   // percent
    double violation_final = 0.0; // percent
    double energy_pct = 0.0;      // percent of maximum
};

// Validation outcome. On failure `reason` names the first offending
// component and the limit it violates.
struct Verdict {
    bool ok = true;
    std::string reason;

    explicit operator bool() const { return ok; }
};

Verdict validate_control(const ControlAction& action, const ControlBounds& bounds = {});

}  // namespace vent
