#pragma once

#include <string>
#include <vector>

namespace vent::cfd {

// Closed interval along a boundary, in meters.
struct Span {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x < hi; }
    bool overlaps(const Span& o) const { return lo < o.hi && o.lo < hi; }
};

// 2D vertical slice of the room: x along the long wall, z up. Supply vents
// and the return vent sit on the ceiling, the occupant source on the floor.
// depth_y is the out-of-plane room depth; it only enters the conversion of
// the occupant mass flux (kg/s, whole room) into a per-cell ppm source.
struct RoomConfig {
    double length_x = 19.0;  // m
    double height_z = 3.5;   // m
    double depth_y = 13.0;   // m
    int nx = 96;
    int nz = 24;

    std::vector<Span> vents;  // ceiling, normally 6 disjoint groups
    Span outlet;              // ceiling
    Span occupants;           // floor

    double d_eff = 5e-2;    // CO2 eddy diffusivity, m^2/s
    double nu_eff = 1e-2;   // eddy kinematic viscosity, m^2/s
    double rho_air = 1.204; // kg/m^3

    double dt_inner = 0.015;        // transport step, s
    double record_interval = 30.0;  // s
    double inlet_co2 = 400.0;       // ppm
    double monitor_height = 1.6;    // m, breathing line

    double steady_tol = 0.5;         // ppm change per minute
    double steady_time_cap = 3600.0; // s
    double vel_tol = 1e-5;           // m/s change per pseudo-step
    int vel_max_iters = 40000;

    double dx() const { return length_x / nx; }
    double dz() const { return height_z / nz; }
    double cell_volume() const { return dx() * dz() * depth_y; }
    int cells() const { return nx * nz; }
    int steps_per_record() const;

    // Standard desk-scale room: six 2-cell vent groups spread along the
    // ceiling, an 8-cell return near the right end, occupants centered on
    // the floor.
    static RoomConfig defaults();

    // No vents, no outlet, no occupants: sealed box for conservation tests.
    static RoomConfig closed_box();

    void validate() const;  // throws std::invalid_argument on bad geometry

    // Key=value plain-text round trip.
    static RoomConfig load(const std::string& path);
    void save(const std::string& path) const;

    // Stable hash of the full configuration; stored in case files and
    // checkpoints so mixed-config artifacts are rejected.
    std::string fingerprint() const;
};

}  // namespace vent::cfd
