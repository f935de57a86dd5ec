#pragma once

#include "vent/cfd/fields.hpp"
#include "vent/types.hpp"

namespace vent::cfd {

struct Vec2 {
    double x = 0.0;
    double z = 0.0;
};

// Supply velocity vector for one vent group: rate * (cos a, -sin a), so 90
// degrees points straight down into the room. Angle is checked only when the
// rate is nonzero.
Vec2 inlet_velocity(double rate, double angle_deg);

struct VelocitySolveResult {
    VelocityField field;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;        // last max |du| per pseudo-step, m/s
    double max_divergence = 0.0;  // 1/s
};

// Quasi-steady incompressible flow for a fixed control action:
// explicit upwind/central pseudo-time marching with a pressure projection
// each step (direct sparse factorization, reused across steps). Inlet faces
// carry the prescribed supply velocity, the outlet is a pressure outflow,
// everything else is no-slip.
VelocitySolveResult solve_velocity(const RoomConfig& cfg, const ControlAction& action);

struct FluxBalance {
    double inflow = 0.0;   // m^2/s through the supply vents (positive)
    double outflow = 0.0;  // m^2/s through the return vent (positive out)
    double net = 0.0;      // inflow - outflow
};

FluxBalance boundary_flux_balance(const VelocityField& field, const RoomConfig& cfg);

}  // namespace vent::cfd
