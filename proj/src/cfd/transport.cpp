#include "vent/cfd/transport.hpp"

#include "vent/metrics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vent::cfd {

double occupant_source(const Occupancy& occupancy) {
    return occupancy.n_p * 0.00012;  // kg/s per person, constant breathing model
}

TransportOp::TransportOp(const RoomConfig& cfg) : cfg_(cfg), map_(BoundaryMap::build(cfg)) {
    cfg_.validate();
    if (map_.occupant_cells > 0) {
        // kg/s -> mass fraction rate in each source cell -> ppm/s.
        ppm_rate_per_kg_s_ =
            kPpmPerMassFraction /
            (cfg_.rho_air * cfg_.cell_volume() * map_.occupant_cells);
    }
    work_.assign(static_cast<size_t>(cfg_.nx) * cfg_.nz, 0.0);
}

void TransportOp::step(Snapshot& snap, const VelocityField& vel, double source_kg_s,
                       double dt) const {
    const int nx = cfg_.nx;
    const int nz = cfg_.nz;
    if (snap.nx != nx || snap.nz != nz || vel.nx != nx || vel.nz != nz) {
        throw std::invalid_argument("transport step: field shapes do not match the config");
    }

    const double dx = cfg_.dx();
    const double dz = cfg_.dz();
    const double cfl = vel.max_abs_u() * dt / dx + vel.max_abs_w() * dt / dz +
                       2.0 * cfg_.d_eff * dt * (1.0 / (dx * dx) + 1.0 / (dz * dz));
    if (cfl > 1.0) {
        std::ostringstream os;
        os << "transport step: CFL " << cfl << " > 1 at dt=" << dt;
        throw std::runtime_error(os.str());
    }

    const double D = cfg_.d_eff;
    const double src_ppm = source_kg_s * ppm_rate_per_kg_s_;
    std::vector<double>& out = work_;

    for (int k = 0; k < nz; ++k) {
        for (int i = 0; i < nx; ++i) {
            const double c = snap.at(i, k);

            // x-direction fluxes (walls at i=0 and i=nx carry none).
            double fx_w = 0.0, fx_e = 0.0;
            if (i > 0) {
                const double uf = vel.u(i, k);
                const double cl = snap.at(i - 1, k);
                fx_w = uf * (uf > 0 ? cl : c) - D * (c - cl) / dx;
            }
            if (i < nx - 1) {
                const double uf = vel.u(i + 1, k);
                const double cr = snap.at(i + 1, k);
                fx_e = uf * (uf > 0 ? c : cr) - D * (cr - c) / dx;
            }

            // z-direction fluxes; the floor is closed, the ceiling follows
            // the boundary map (advective only; boundary diffusion is zero).
            double fz_s = 0.0, fz_n = 0.0;
            if (k > 0) {
                const double wf = vel.w(i, k);
                const double cd = snap.at(i, k - 1);
                fz_s = wf * (wf > 0 ? cd : c) - D * (c - cd) / dz;
            }
            if (k < nz - 1) {
                const double wf = vel.w(i, k + 1);
                const double cu = snap.at(i, k + 1);
                fz_n = wf * (wf > 0 ? c : cu) - D * (cu - c) / dz;
            } else {
                const int kind = map_.ceiling[i];
                if (kind >= 0) {
                    const double wf = vel.w(i, nz);
                    fz_n = wf * (wf > 0 ? c : cfg_.inlet_co2);
                }
            }

            double next = c - dt * ((fx_e - fx_w) / dx + (fz_n - fz_s) / dz);
            if (k == 0 && map_.occupant[i]) next += dt * src_ppm;
            out[static_cast<size_t>(k) * nx + i] = next;
        }
    }

    // Hold supply cells at the inlet concentration.
    for (int i = 0; i < nx; ++i) {
        if (map_.is_inlet(i)) out[static_cast<size_t>(nz - 1) * nx + i] = cfg_.inlet_co2;
    }

    double mn = out[0];
    bool finite = true;
    for (double v : out) {
        mn = std::min(mn, v);
        finite = finite && std::isfinite(v);
    }
    if (!finite || mn < 0.0) {
        std::ostringstream os;
        os << "transport step produced " << (finite ? "negative" : "non-finite")
           << " concentration (min " << mn << ") at t=" << snap.time;
        throw std::runtime_error(os.str());
    }

    snap.co2.swap(out);
    snap.time += dt;
}

Snapshot step_co2(const Snapshot& snap, const VelocityField& vel, double source_kg_s,
                  const RoomConfig& cfg, double dt) {
    TransportOp op(cfg);
    Snapshot next = snap;
    op.step(next, vel, source_kg_s, dt);
    return next;
}

std::vector<double> sample_monitor(const Snapshot& snap, const RoomConfig& cfg) {
    if (cfg.monitor_height < 0.0 || cfg.monitor_height > cfg.height_z) {
        throw std::invalid_argument("monitor height outside the domain");
    }
    const double dz = cfg.dz();
    const double s = cfg.monitor_height / dz - 0.5;
    int k0 = static_cast<int>(std::floor(s));
    double t = s - k0;
    if (k0 < 0) { k0 = 0; t = 0.0; }
    if (k0 >= cfg.nz - 1) { k0 = cfg.nz - 2; t = 1.0; }

    std::vector<double> line(static_cast<size_t>(cfg.nx));
    for (int i = 0; i < cfg.nx; ++i) {
        line[static_cast<size_t>(i)] = (1.0 - t) * snap.at(i, k0) + t * snap.at(i, k0 + 1);
    }
    return line;
}

double total_co2(const Snapshot& snap, const RoomConfig& cfg) {
    double sum = 0.0;
    for (double v : snap.co2) sum += v;
    return sum * cfg.cell_volume();
}

}  // namespace vent::cfd
