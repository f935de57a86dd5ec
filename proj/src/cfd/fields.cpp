#include "vent/cfd/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace vent::cfd {

double VelocityField::max_abs_u() const {
    double m = 0.0;
    for (double v : u_face) m = std::max(m, std::abs(v));
    return m;
}

double VelocityField::max_abs_w() const {
    double m = 0.0;
    for (double v : w_face) m = std::max(m, std::abs(v));
    return m;
}

double VelocityField::max_divergence(const RoomConfig& cfg) const {
    const double dx = cfg.dx();
    const double dz = cfg.dz();
    double m = 0.0;
    for (int k = 0; k < nz; ++k) {
        for (int i = 0; i < nx; ++i) {
            const double div = (u(i + 1, k) - u(i, k)) / dx + (w(i, k + 1) - w(i, k)) / dz;
            m = std::max(m, std::abs(div));
        }
    }
    return m;
}

BoundaryMap BoundaryMap::build(const RoomConfig& cfg) {
    BoundaryMap map;
    map.nx = cfg.nx;
    map.ceiling.assign(cfg.nx, -1);
    map.occupant.assign(cfg.nx, 0);
    map.outlet_kind = cfg.outlet.width() > 0 ? static_cast<int>(cfg.vents.size()) : -1;

    const double dx = cfg.dx();
    for (int i = 0; i < cfg.nx; ++i) {
        const double xc = (i + 0.5) * dx;
        for (size_t g = 0; g < cfg.vents.size(); ++g) {
            if (cfg.vents[g].contains(xc)) {
                map.ceiling[i] = static_cast<int>(g);
                break;
            }
        }
        if (map.ceiling[i] < 0 && cfg.outlet.width() > 0 && cfg.outlet.contains(xc)) {
            map.ceiling[i] = map.outlet_kind;
        }
        if (cfg.occupants.width() > 0 && cfg.occupants.contains(xc)) {
            map.occupant[i] = 1;
            ++map.occupant_cells;
        }
    }

    for (size_t g = 0; g < cfg.vents.size(); ++g) {
        bool seen = false;
        for (int i = 0; i < cfg.nx; ++i) {
            if (map.ceiling[i] == static_cast<int>(g)) seen = true;
        }
        if (!seen) {
            throw std::invalid_argument("vent group " + std::to_string(g + 1) +
                                        " covers no cell at this resolution");
        }
    }
    return map;
}

}  // namespace vent::cfd
