#include "vent/cfd/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace vent::cfd {

int RoomConfig::steps_per_record() const {
    const double n = record_interval / dt_inner;
    const auto rounded = static_cast<int>(std::lround(n));
    if (rounded < 1 || std::abs(n - rounded) > 1e-9 * n) {
        throw std::invalid_argument("record_interval must be an integer multiple of dt_inner");
    }
    return rounded;
}

RoomConfig RoomConfig::defaults() {
    RoomConfig c;
    const double dx = c.length_x / c.nx;
    // Vent group g covers cells {start_g, start_g+1}; cell indices chosen so
    // the six groups are evenly spread with the outlet clear of group 6.
    const int starts[6] = {7, 21, 35, 49, 63, 77};
    for (int s : starts) {
        c.vents.push_back(Span{s * dx, (s + 2) * dx});
    }
    c.outlet = Span{86 * dx, 94 * dx};
    c.occupants = Span{6.0, 13.0};
    return c;
}

RoomConfig RoomConfig::closed_box() {
    RoomConfig c;
    c.vents.clear();
    c.outlet = Span{0.0, 0.0};
    c.occupants = Span{6.0, 13.0};
    return c;
}

void RoomConfig::validate() const {
    if (nx < 4 || nz < 4) throw std::invalid_argument("grid must be at least 4x4");
    if (length_x <= 0 || height_z <= 0 || depth_y <= 0) {
        throw std::invalid_argument("domain dimensions must be positive");
    }
    if (dt_inner <= 0) throw std::invalid_argument("dt_inner must be positive");
    if (d_eff < 0 || nu_eff < 0 || rho_air <= 0) {
        throw std::invalid_argument("physical coefficients out of range");
    }
    steps_per_record();  // throws unless an integer multiple

    auto on_ceiling = [&](const Span& s) {
        return s.lo >= 0.0 && s.hi <= length_x && s.lo < s.hi;
    };
    for (size_t a = 0; a < vents.size(); ++a) {
        if (!on_ceiling(vents[a])) throw std::invalid_argument("vent span off the ceiling");
        for (size_t b = a + 1; b < vents.size(); ++b) {
            if (vents[a].overlaps(vents[b])) throw std::invalid_argument("vent spans overlap");
        }
        if (outlet.width() > 0 && vents[a].overlaps(outlet)) {
            throw std::invalid_argument("vent span overlaps the outlet");
        }
    }
    if (outlet.width() > 0 && !on_ceiling(outlet)) {
        throw std::invalid_argument("outlet span off the ceiling");
    }
    if (occupants.width() > 0 &&
        (occupants.lo < 0.0 || occupants.hi > length_x)) {
        throw std::invalid_argument("occupant span off the floor");
    }
    if (monitor_height < 0.0 || monitor_height > height_z) {
        throw std::invalid_argument("monitor height outside the domain");
    }

    // Advective CFL against the maximum supply speed (3.24 m/s), with the
    // outlet concentration factor: the return vent can carry the combined
    // inflow of all groups over a narrower span.
    double inlet_width = 0.0;
    for (const auto& v : vents) inlet_width += v.width();
    if (outlet.width() > 0 && inlet_width > 0) {
        const double w_out = 3.24 * inlet_width / outlet.width();
        const double cfl = 3.24 * dt_inner / dx() + std::max(3.24, w_out) * dt_inner / dz();
        if (cfl > 1.0) {
            throw std::invalid_argument("dt_inner violates the advective CFL limit for max supply speed");
        }
    }
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string span_str(const Span& s) {
    std::ostringstream os;
    os << std::setprecision(17) << s.lo << " " << s.hi;
    return os.str();
}

Span parse_span(const std::string& v) {
    std::istringstream is(v);
    Span s;
    if (!(is >> s.lo >> s.hi)) throw std::invalid_argument("bad span value: " + v);
    return s;
}

}  // namespace

RoomConfig RoomConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open room config: " + path);

    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto pos = line.find('=');
        if (pos == std::string::npos) continue;
        kv[trim(line.substr(0, pos))] = trim(line.substr(pos + 1));
    }

    RoomConfig c = RoomConfig::defaults();
    c.vents.clear();
    c.outlet = Span{};

    auto get_d = [&](const char* k, double def) {
        auto it = kv.find(k);
        return it != kv.end() ? std::stod(it->second) : def;
    };
    auto get_i = [&](const char* k, int def) {
        auto it = kv.find(k);
        return it != kv.end() ? std::stoi(it->second) : def;
    };

    c.length_x = get_d("length_x", c.length_x);
    c.height_z = get_d("height_z", c.height_z);
    c.depth_y = get_d("depth_y", c.depth_y);
    c.nx = get_i("nx", c.nx);
    c.nz = get_i("nz", c.nz);
    c.d_eff = get_d("d_eff", c.d_eff);
    c.nu_eff = get_d("nu_eff", c.nu_eff);
    c.rho_air = get_d("rho_air", c.rho_air);
    c.dt_inner = get_d("dt_inner", c.dt_inner);
    c.record_interval = get_d("record_interval", c.record_interval);
    c.inlet_co2 = get_d("inlet_co2", c.inlet_co2);
    c.monitor_height = get_d("monitor_height", c.monitor_height);
    c.steady_tol = get_d("steady_tol", c.steady_tol);
    c.steady_time_cap = get_d("steady_time_cap", c.steady_time_cap);
    c.vel_tol = get_d("vel_tol", c.vel_tol);
    c.vel_max_iters = get_i("vel_max_iters", c.vel_max_iters);

    for (int g = 0;; ++g) {
        auto it = kv.find("vent" + std::to_string(g + 1));
        if (it == kv.end()) break;
        c.vents.push_back(parse_span(it->second));
    }
    if (c.vents.empty() && kv.find("vent1") == kv.end() && kv.count("no_vents") == 0) {
        c.vents = RoomConfig::defaults().vents;  // file omitted vents entirely
    }
    if (auto it = kv.find("outlet"); it != kv.end()) {
        c.outlet = parse_span(it->second);
    } else if (kv.count("no_vents") == 0) {
        c.outlet = RoomConfig::defaults().outlet;
    }
    if (auto it = kv.find("occupants"); it != kv.end()) {
        c.occupants = parse_span(it->second);
    } else {
        c.occupants = RoomConfig::defaults().occupants;
    }

    c.validate();
    return c;
}

void RoomConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write room config: " + path);
    out << std::setprecision(17);
    out << "# desk-scale 2D room\n";
    out << "length_x = " << length_x << "\n";
    out << "height_z = " << height_z << "\n";
    out << "depth_y = " << depth_y << "\n";
    out << "nx = " << nx << "\n";
    out << "nz = " << nz << "\n";
    for (size_t g = 0; g < vents.size(); ++g) {
        out << "vent" << (g + 1) << " = " << span_str(vents[g]) << "\n";
    }
    if (vents.empty()) out << "no_vents = 1\n";
    if (outlet.width() > 0) out << "outlet = " << span_str(outlet) << "\n";
    out << "occupants = " << span_str(occupants) << "\n";
    out << "d_eff = " << d_eff << "\n";
    out << "nu_eff = " << nu_eff << "\n";
    out << "rho_air = " << rho_air << "\n";
    out << "dt_inner = " << dt_inner << "\n";
    out << "record_interval = " << record_interval << "\n";
    out << "inlet_co2 = " << inlet_co2 << "\n";
    out << "monitor_height = " << monitor_height << "\n";
    out << "steady_tol = " << steady_tol << "\n";
    out << "steady_time_cap = " << steady_time_cap << "\n";
    out << "vel_tol = " << vel_tol << "\n";
    out << "vel_max_iters = " << vel_max_iters << "\n";
}

std::string RoomConfig::fingerprint() const {
    std::ostringstream os;
    os << std::setprecision(17);
    os << length_x << "|" << height_z << "|" << depth_y << "|" << nx << "|" << nz;
    for (const auto& v : vents) os << "|v" << v.lo << "," << v.hi;
    os << "|o" << outlet.lo << "," << outlet.hi;
    os << "|p" << occupants.lo << "," << occupants.hi;
    os << "|" << d_eff << "|" << nu_eff << "|" << rho_air << "|" << dt_inner << "|"
       << record_interval << "|" << inlet_co2 << "|" << monitor_height;
    const std::string s = os.str();

    // FNV-1a 64
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << h;
    return hex.str();
}

}  // namespace vent::cfd
