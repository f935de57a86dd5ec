#pragma once

#include "vent/cfd/fields.hpp"
#include "vent/types.hpp"

#include <vector>

namespace vent::cfd {

// Total CO2 mass flux exhaled by the occupants, kg/s.
double occupant_source(const Occupancy& occupancy);

// One explicit transport step: donor-cell upwind advection + central
// diffusion in conservative flux form, plus the occupant source spread
// uniformly over the floor span. Inlet cells are held at inlet_co2, the
// outlet is zero-gradient, every other boundary is zero-flux.
// Throws on CFL violation (checked against the actual field) and on
// NaN/negative cells after the update.
class TransportOp {
public:
    explicit TransportOp(const RoomConfig& cfg);

    void step(Snapshot& snap, const VelocityField& vel, double source_kg_s, double dt) const;

    // ppm/s added to each occupant cell per kg/s of total source.
    double ppm_rate_per_kg_s() const { return ppm_rate_per_kg_s_; }
    const BoundaryMap& boundary() const { return map_; }

private:
    RoomConfig cfg_;
    BoundaryMap map_;
    double ppm_rate_per_kg_s_ = 0.0;
    mutable std::vector<double> work_;
};

// Convenience wrapper matching the one-shot call shape.
Snapshot step_co2(const Snapshot& snap, const VelocityField& vel, double source_kg_s,
                  const RoomConfig& cfg, double dt);

// CO2 interpolated onto the horizontal monitor line at cfg.monitor_height,
// one value per cell-center x position.
std::vector<double> sample_monitor(const Snapshot& snap, const RoomConfig& cfg);

// Total CO2 content of the field in ppm*m^3 (with the out-of-plane depth),
// used by the conservation audits.
double total_co2(const Snapshot& snap, const RoomConfig& cfg);

}  // namespace vent::cfd
