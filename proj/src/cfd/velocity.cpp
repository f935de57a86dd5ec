#include "vent/cfd/velocity.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace vent::cfd {

Vec2 inlet_velocity(double rate, double angle_deg) {
    if (rate < 0.0) throw std::invalid_argument("supply rate must be >= 0");
    if (rate > 0.0 && (angle_deg < 45.0 || angle_deg > 135.0)) {
        throw std::invalid_argument("supply angle must lie in [45, 135] degrees");
    }
    if (rate == 0.0) return Vec2{0.0, 0.0};
    const double th = angle_deg * M_PI / 180.0;
    return Vec2{rate * std::cos(th), -rate * std::sin(th)};
}

namespace {

struct CeilingBc {
    // Per ceiling cell: prescribed normal velocity (w at the top face) and
    // tangential velocity, plus whether the cell is the pressure outlet.
    std::vector<double> w_bc;
    std::vector<double> u_tan;
    std::vector<char> outlet;
};

CeilingBc ceiling_bc(const RoomConfig& cfg, const BoundaryMap& map, const ControlAction& action) {
    CeilingBc bc;
    bc.w_bc.assign(cfg.nx, 0.0);
    bc.u_tan.assign(cfg.nx, 0.0);
    bc.outlet.assign(cfg.nx, 0);
    for (int i = 0; i < cfg.nx; ++i) {
        const int kind = map.ceiling[i];
        if (kind < 0) continue;
        if (map.is_outlet(i)) {
            bc.outlet[i] = 1;
        } else {
            const auto g = static_cast<size_t>(kind);
            const Vec2 v = inlet_velocity(action.rates[g], action.angles[g]);
            bc.w_bc[i] = v.z;
            bc.u_tan[i] = v.x;
        }
    }
    return bc;
}

void apply_fixed_faces(VelocityField& f, const CeilingBc& bc) {
    const int nx = f.nx;
    const int nz = f.nz;
    for (int k = 0; k < nz; ++k) {
        f.u(0, k) = 0.0;
        f.u(nx, k) = 0.0;
    }
    for (int i = 0; i < nx; ++i) {
        f.w(i, 0) = 0.0;
        if (!bc.outlet[i]) f.w(i, nz) = bc.w_bc[i];
    }
}

}  // namespace

VelocitySolveResult solve_velocity(const RoomConfig& cfg, const ControlAction& action) {
    cfg.validate();
    const BoundaryMap map = BoundaryMap::build(cfg);
    if (!cfg.vents.empty() && cfg.vents.size() != action.rates.size()) {
        throw std::invalid_argument("config must define exactly six vent groups");
    }

    const int nx = cfg.nx;
    const int nz = cfg.nz;
    const double dx = cfg.dx();
    const double dz = cfg.dz();
    const double nu = cfg.nu_eff;

    VelocitySolveResult res;
    res.field = VelocityField(nx, nz);

    double max_rate = 0.0;
    for (double r : action.rates) max_rate = std::max(max_rate, r);
    if (map.outlet_kind < 0 || cfg.vents.empty()) {
        if (max_rate > 0.0) {
            throw std::invalid_argument("nonzero supply requires an outlet vent");
        }
        res.converged = true;  // sealed box, no forcing: identically zero
        return res;
    }

    const CeilingBc bc = ceiling_bc(cfg, map, action);
    if (max_rate == 0.0) {
        res.converged = true;
        return res;
    }

    // Pressure Poisson matrix: -div grad with Neumann faces dropped and a
    // half-cell Dirichlet (p=0) across the outlet faces. SPD; factor once.
    const auto idx = [nx](int i, int k) { return k * nx + i; };
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(nx) * nz * 5);
    const double cx = 1.0 / (dx * dx);
    const double cz = 1.0 / (dz * dz);
    for (int k = 0; k < nz; ++k) {
        for (int i = 0; i < nx; ++i) {
            double diag = 0.0;
            if (i > 0) { trip.emplace_back(idx(i, k), idx(i - 1, k), -cx); diag += cx; }
            if (i < nx - 1) { trip.emplace_back(idx(i, k), idx(i + 1, k), -cx); diag += cx; }
            if (k > 0) { trip.emplace_back(idx(i, k), idx(i, k - 1), -cz); diag += cz; }
            if (k < nz - 1) { trip.emplace_back(idx(i, k), idx(i, k + 1), -cz); diag += cz; }
            if (k == nz - 1 && bc.outlet[i]) diag += 2.0 * cz;
            trip.emplace_back(idx(i, k), idx(i, k), diag);
        }
    }
    Eigen::SparseMatrix<double> A(nx * nz, nx * nz);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> poisson(A);
    if (poisson.info() != Eigen::Success) {
        throw std::runtime_error("pressure Poisson factorization failed");
    }

    VelocityField cur(nx, nz);
    VelocityField next(nx, nz);
    apply_fixed_faces(cur, bc);
    for (int i = 0; i < nx; ++i) {
        if (bc.outlet[i]) cur.w(i, nz) = 0.0;
    }

    Eigen::VectorXd rhs(nx * nz);
    Eigen::VectorXd p(nx * nz);
    const double dt_diff = 0.25 / (nu * (cx + cz) + 1e-300);

    // Ghost value above an interior u-face (i in 1..nx-1), which touches
    // ceiling cells i-1 and i: zero-gradient over the outlet, otherwise
    // reflect about the prescribed tangential velocity (0 at walls).
    const auto u_ghost_top = [&](int i, double u_val) {
        if (bc.outlet[i - 1] || bc.outlet[i]) return u_val;
        const double u_tan = 0.5 * (bc.u_tan[i - 1] + bc.u_tan[i]);
        return 2.0 * u_tan - u_val;
    };

    int it = 0;
    double delta = 0.0;
    for (it = 1; it <= cfg.vel_max_iters; ++it) {
        const double umax = std::max(cur.max_abs_u(), 0.05);
        const double wmax = std::max(cur.max_abs_w(), 0.05);
        const double dt = 0.3 * std::min({dx / umax, dz / wmax, dt_diff});

        // Predictor: upwind advection + central diffusion on interior faces.
        next = cur;
        for (int k = 0; k < nz; ++k) {
            for (int i = 1; i < nx; ++i) {
                const double uc = cur.u(i, k);
                const double ul = cur.u(i - 1, k);
                const double ur = cur.u(i + 1, k);
                const double ud = (k > 0) ? cur.u(i, k - 1) : -uc;
                const double uu = (k < nz - 1) ? cur.u(i, k + 1) : u_ghost_top(i, uc);
                const double wav = 0.25 * (cur.w(i - 1, k) + cur.w(i - 1, k + 1) +
                                           cur.w(i, k) + cur.w(i, k + 1));
                const double dudx = uc > 0 ? (uc - ul) / dx : (ur - uc) / dx;
                const double dudz = wav > 0 ? (uc - ud) / dz : (uu - uc) / dz;
                const double lap = (ur - 2 * uc + ul) * cx + (uu - 2 * uc + ud) * cz;
                next.u(i, k) = uc + dt * (-uc * dudx - wav * dudz + nu * lap);
            }
        }
        for (int k = 1; k < nz; ++k) {
            for (int i = 0; i < nx; ++i) {
                const double wc = cur.w(i, k);
                const double wd = cur.w(i, k - 1);
                const double wu = cur.w(i, k + 1);
                const double wl = (i > 0) ? cur.w(i - 1, k) : -wc;
                const double wr = (i < nx - 1) ? cur.w(i + 1, k) : -wc;
                const double uav = 0.25 * (cur.u(i, k - 1) + cur.u(i + 1, k - 1) +
                                           cur.u(i, k) + cur.u(i + 1, k));
                const double dwdz = wc > 0 ? (wc - wd) / dz : (wu - wc) / dz;
                const double dwdx = uav > 0 ? (wc - wl) / dx : (wr - wc) / dx;
                const double lap = (wr - 2 * wc + wl) * cx + (wu - 2 * wc + wd) * cz;
                next.w(i, k) = wc + dt * (-uav * dwdx - wc * dwdz + nu * lap);
            }
        }
        apply_fixed_faces(next, bc);
        for (int i = 0; i < nx; ++i) {
            if (bc.outlet[i]) next.w(i, nz) = next.w(i, nz - 1);  // outflow extrapolation
        }

        // Projection: rhs = -div(u*)/dt (matrix is -Laplacian).
        for (int k = 0; k < nz; ++k) {
            for (int i = 0; i < nx; ++i) {
                const double div = (next.u(i + 1, k) - next.u(i, k)) / dx +
                                   (next.w(i, k + 1) - next.w(i, k)) / dz;
                rhs[idx(i, k)] = -div / dt;
            }
        }
        p = poisson.solve(rhs);
        for (int k = 0; k < nz; ++k) {
            for (int i = 1; i < nx; ++i) {
                next.u(i, k) -= dt * (p[idx(i, k)] - p[idx(i - 1, k)]) / dx;
            }
        }
        for (int k = 1; k < nz; ++k) {
            for (int i = 0; i < nx; ++i) {
                next.w(i, k) -= dt * (p[idx(i, k)] - p[idx(i, k - 1)]) / dz;
            }
        }
        for (int i = 0; i < nx; ++i) {
            if (bc.outlet[i]) next.w(i, nz) += dt * 2.0 * p[idx(i, nz - 1)] / dz;
        }

        delta = 0.0;
        for (size_t n = 0; n < cur.u_face.size(); ++n) {
            delta = std::max(delta, std::abs(next.u_face[n] - cur.u_face[n]));
        }
        for (size_t n = 0; n < cur.w_face.size(); ++n) {
            delta = std::max(delta, std::abs(next.w_face[n] - cur.w_face[n]));
        }
        std::swap(cur, next);
        if (delta < cfg.vel_tol) break;
    }

    res.field = cur;
    res.iterations = std::min(it, cfg.vel_max_iters);
    res.residual = delta;
    res.converged = delta < cfg.vel_tol;
    res.max_divergence = cur.max_divergence(cfg);
    return res;
}

FluxBalance boundary_flux_balance(const VelocityField& field, const RoomConfig& cfg) {
    const BoundaryMap map = BoundaryMap::build(cfg);
    const double dx = cfg.dx();
    FluxBalance fb;
    for (int i = 0; i < cfg.nx; ++i) {
        const double w_top = field.w(i, cfg.nz);
        if (map.is_inlet(i)) {
            fb.inflow += -w_top * dx;  // inflow is downward (negative w)
        } else if (map.is_outlet(i)) {
            fb.outflow += w_top * dx;
        }
    }
    fb.net = fb.inflow - fb.outflow;
    return fb;
}

}  // namespace vent::cfd
