#pragma once

#include "vent/cfd/config.hpp"

#include <vector>

namespace vent::cfd {

// Cell-centered CO2 field in ppm. Index (i, k): i along x, k up.
struct Snapshot {
    int nx = 0;
    int nz = 0;
    std::vector<double> co2;
    double time = 0.0;

    Snapshot() = default;
    Snapshot(int nx_, int nz_, double value = 0.0, double t = 0.0)
        : nx(nx_), nz(nz_), co2(static_cast<size_t>(nx_) * nz_, value), time(t) {}

    double& at(int i, int k) { return co2[static_cast<size_t>(k) * nx + i]; }
    double at(int i, int k) const { return co2[static_cast<size_t>(k) * nx + i]; }
};

// MAC-staggered velocity: u on x-faces ((nx+1) x nz), w on z-faces
// (nx x (nz+1)). Units m/s.
struct VelocityField {
    int nx = 0;
    int nz = 0;
    std::vector<double> u_face;
    std::vector<double> w_face;

    VelocityField() = default;
    VelocityField(int nx_, int nz_)
        : nx(nx_),
          nz(nz_),
          u_face(static_cast<size_t>(nx_ + 1) * nz_, 0.0),
          w_face(static_cast<size_t>(nx_) * (nz_ + 1), 0.0) {}

    double& u(int i, int k) { return u_face[static_cast<size_t>(k) * (nx + 1) + i]; }
    double u(int i, int k) const { return u_face[static_cast<size_t>(k) * (nx + 1) + i]; }
    double& w(int i, int k) { return w_face[static_cast<size_t>(k) * nx + i]; }
    double w(int i, int k) const { return w_face[static_cast<size_t>(k) * nx + i]; }

    double max_abs_u() const;
    double max_abs_w() const;
    // Max-norm of the discrete divergence, 1/s.
    double max_divergence(const RoomConfig& cfg) const;
};

// Per-column classification of the ceiling and floor derived from the
// config spans. kind: -1 wall, 0..G-1 inlet group, G outlet (G = #groups).
struct BoundaryMap {
    int nx = 0;
    std::vector<int> ceiling;        // size nx
    std::vector<char> occupant;      // size nx, floor source cells
    int outlet_kind = -1;            // == #vent groups when an outlet exists
    int occupant_cells = 0;

    static BoundaryMap build(const RoomConfig& cfg);
    bool is_inlet(int i) const { return ceiling[i] >= 0 && ceiling[i] != outlet_kind; }
    bool is_outlet(int i) const { return outlet_kind >= 0 && ceiling[i] == outlet_kind; }
};

}  // namespace vent::cfd
