#include "vent/cfd/simulator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vent::cfd {

SteadyResult run_steady(const RoomConfig& cfg, const ControlAction& action,
                        const Occupancy& occupancy) {
    SteadyResult res;
    res.velocity = solve_velocity(cfg, action);

    TransportOp op(cfg);
    const double src = occupant_source(occupancy);
    const double dt = cfg.dt_inner;
    const int steps_per_min = std::max(1, static_cast<int>(std::lround(60.0 / dt)));

    Snapshot snap(cfg.nx, cfg.nz, cfg.inlet_co2);
    Snapshot minute_ago = snap;
    int step = 0;
    while (snap.time < cfg.steady_time_cap) {
        op.step(snap, res.velocity.field, src, dt);
        if (++step % steps_per_min == 0) {
            double change = 0.0;
            for (size_t n = 0; n < snap.co2.size(); ++n) {
                change = std::max(change, std::abs(snap.co2[n] - minute_ago.co2[n]));
            }
            res.last_change_ppm_per_min = change;
            if (change < cfg.steady_tol) {
                res.converged = true;
                break;
            }
            minute_ago = snap;
        }
    }
    res.snapshot = std::move(snap);
    return res;
}

TransientCase run_transient(const Snapshot& init, const RoomConfig& cfg,
                            const ControlAction& action, const Occupancy& occupancy,
                            double duration, int steady_case_id) {
    if (init.nx != cfg.nx || init.nz != cfg.nz) {
        throw std::invalid_argument("transient init snapshot does not match the grid");
    }

    const auto vel = solve_velocity(cfg, action);
    TransportOp op(cfg);
    const double src = occupant_source(occupancy);
    const double dt = cfg.dt_inner;
    const int per_record = cfg.steps_per_record();
    const auto n_records = static_cast<int>(std::lround(duration / cfg.record_interval));

    TransientCase tc;
    tc.action = action;
    tc.occupancy = occupancy;
    tc.steady_case_id = steady_case_id;
    tc.records.reserve(static_cast<size_t>(n_records));
    tc.monitor_trace.reserve(static_cast<size_t>(n_records) * cfg.nx);

    Snapshot snap = init;
    snap.time = 0.0;
    for (int r = 0; r < n_records; ++r) {
        for (int s = 0; s < per_record; ++s) {
            try {
                op.step(snap, vel.field, src, dt);
            } catch (const std::exception& e) {
                throw std::runtime_error("transient failed at record " + std::to_string(r) +
                                         ": " + e.what());
            }
        }
        const auto line = sample_monitor(snap, cfg);
        tc.monitor_trace.insert(tc.monitor_trace.end(), line.begin(), line.end());
        tc.records.push_back(snap);
    }
    return tc;
}

}  // namespace vent::cfd
