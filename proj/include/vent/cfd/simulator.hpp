#pragma once

#include "vent/cfd/transport.hpp"
#include "vent/cfd/velocity.hpp"

#include <vector>

namespace vent::cfd {

struct SteadyResult {
    Snapshot snapshot;
    bool converged = false;
    double last_change_ppm_per_min = 0.0;
    VelocitySolveResult velocity;
};

// Fixed control and occupancy over the whole run. `records` holds the full
// fields at every record interval; `monitor_trace` the breathing-line values
// (record-major, records.size() * nx entries).
struct TransientCase {
    std::vector<Snapshot> records;
    std::vector<double> monitor_trace;
    ControlAction action;
    Occupancy occupancy;
    int steady_case_id = -1;
};

// Integrate from a uniform inlet-concentration field under the converged
// quasi-steady flow until the max per-cell change per minute of simulated
// time drops below cfg.steady_tol, or the time cap is reached.
SteadyResult run_steady(const RoomConfig& cfg, const ControlAction& action,
                        const Occupancy& occupancy);

// 30 minutes (by default) from `init`, records every cfg.record_interval.
TransientCase run_transient(const Snapshot& init, const RoomConfig& cfg,
                            const ControlAction& action, const Occupancy& occupancy,
                            double duration = 1800.0, int steady_case_id = -1);

}  // namespace vent::cfd
