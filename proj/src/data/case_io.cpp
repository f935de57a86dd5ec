#include "vent/data/case_io.hpp"

#include "vent/io/bin.hpp"

#include <json.hpp>

#include <cstring>
#include <fstream>

namespace vent::data {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'V', 'E', 'N', 'T', 'C', 'A', 'S', '1'};

json action_to_json(const ControlAction& a) {
    return json{{"rates", a.rates}, {"angles", a.angles}};
}

ControlAction action_from_json(const json& j) {
    ControlAction a;
    for (int i = 0; i < 6; ++i) {
        a.rates[i] = j.at("rates").at(i).get<double>();
        a.angles[i] = j.at("angles").at(i).get<double>();
    }
    return a;
}

std::vector<double> monitor_x_coords(const cfd::RoomConfig& cfg) {
    std::vector<double> xs(static_cast<size_t>(cfg.nx));
    for (int i = 0; i < cfg.nx; ++i) xs[static_cast<size_t>(i)] = (i + 0.5) * cfg.dx();
    return xs;
}

void write_container(const cfd::TransientCase& tc, const cfd::RoomConfig& cfg,
                     const std::string& kind, const std::string& path) {
    io::require_little_endian();
    const int nx = cfg.nx;
    const int nz = cfg.nz;
    const auto n_records = tc.records.size();

    const auto monitor_x = monitor_x_coords(cfg);
    std::vector<double> fields;
    fields.reserve(n_records * tc.records.front().co2.size());
    std::vector<double> times;
    for (const auto& r : tc.records) {
        fields.insert(fields.end(), r.co2.begin(), r.co2.end());
        times.push_back(r.time);
    }

    json header;
    header["kind"] = kind;
    header["action"] = action_to_json(tc.action);
    header["n_p"] = tc.occupancy.n_p;
    header["steady_case_id"] = tc.steady_case_id;
    header["nx"] = nx;
    header["nz"] = nz;
    header["records"] = n_records;
    header["record_times"] = times;
    header["record_interval"] = cfg.record_interval;
    header["monitor_height"] = cfg.monitor_height;
    header["config_fingerprint"] = cfg.fingerprint();
    header["blocks"] = json::array({
        json{{"name", "monitor_x"}, {"count", monitor_x.size()}},
        json{{"name", "monitor_trace"}, {"count", tc.monitor_trace.size()}},
        json{{"name", "fields"}, {"count", fields.size()}},
    });

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write case file: " + path);
    out.write(kMagic, sizeof(kMagic));
    const std::string hs = header.dump();
    io::write_u32(out, static_cast<std::uint32_t>(hs.size()));
    out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
    io::write_f32_block(out, monitor_x);
    io::write_f32_block(out, tc.monitor_trace);
    io::write_f32_block(out, fields);
    if (!out) throw std::runtime_error("short write on case file: " + path);
}

struct Container {
    json header;
    std::vector<double> monitor_x;
    std::vector<double> monitor_trace;
    std::vector<double> fields;
};

Container read_container(const std::string& path,
                         const std::optional<std::string>& expected_fingerprint) {
    io::require_little_endian();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open case file: " + path);

    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, "VENTCAS", 7) != 0) {
        throw io::VersionError("not a case file: " + path);
    }
    if (magic[7] != '1') {
        throw io::VersionError("unsupported case format version in " + path);
    }

    const auto hlen = io::read_u32(in, "header length");
    std::string hs(hlen, '\0');
    in.read(hs.data(), hlen);
    if (static_cast<std::uint32_t>(in.gcount()) != hlen) {
        throw io::TruncatedError("truncated header in " + path);
    }

    Container c;
    c.header = json::parse(hs);
    if (expected_fingerprint &&
        c.header.at("config_fingerprint").get<std::string>() != *expected_fingerprint) {
        throw io::FingerprintError("config fingerprint mismatch in " + path);
    }

    const auto& blocks = c.header.at("blocks");
    c.monitor_x = io::read_f32_block(in, blocks.at(0).at("count").get<size_t>(), "monitor_x");
    c.monitor_trace =
        io::read_f32_block(in, blocks.at(1).at("count").get<size_t>(), "monitor_trace");
    c.fields = io::read_f32_block(in, blocks.at(2).at("count").get<size_t>(), "fields");
    return c;
}

}  // namespace

void write_case(const cfd::TransientCase& tc, const cfd::RoomConfig& cfg,
                const std::string& path) {
    write_container(tc, cfg, "transient", path);
}

StoredCase read_case(const std::string& path,
                     const std::optional<std::string>& expected_fingerprint) {
    Container c = read_container(path, expected_fingerprint);
    StoredCase sc;
    sc.config_fingerprint = c.header.at("config_fingerprint").get<std::string>();
    sc.monitor_x = std::move(c.monitor_x);
    sc.data.action = action_from_json(c.header.at("action"));
    sc.data.occupancy = Occupancy(c.header.at("n_p").get<int>());
    sc.data.steady_case_id = c.header.at("steady_case_id").get<int>();
    sc.data.monitor_trace = std::move(c.monitor_trace);

    const int nx = c.header.at("nx").get<int>();
    const int nz = c.header.at("nz").get<int>();
    const auto n_records = c.header.at("records").get<size_t>();
    const auto cells = static_cast<size_t>(nx) * nz;
    if (c.fields.size() != n_records * cells) {
        throw io::TruncatedError("field block size does not match the header in " + path);
    }
    const auto times = c.header.at("record_times").get<std::vector<double>>();
    sc.data.records.reserve(n_records);
    for (size_t r = 0; r < n_records; ++r) {
        cfd::Snapshot snap(nx, nz);
        std::copy(c.fields.begin() + static_cast<std::ptrdiff_t>(r * cells),
                  c.fields.begin() + static_cast<std::ptrdiff_t>((r + 1) * cells),
                  snap.co2.begin());
        snap.time = times.at(r);
        sc.data.records.push_back(std::move(snap));
    }
    return sc;
}

void write_steady(const cfd::Snapshot& snap, const ControlAction& action,
                  const Occupancy& occupancy, const cfd::RoomConfig& cfg,
                  const std::string& path) {
    cfd::TransientCase tc;
    tc.records.push_back(snap);
    tc.monitor_trace = cfd::sample_monitor(snap, cfg);
    tc.action = action;
    tc.occupancy = occupancy;
    tc.steady_case_id = -1;
    write_container(tc, cfg, "steady", path);
}

cfd::Snapshot read_steady(const std::string& path,
                          const std::optional<std::string>& expected_fingerprint) {
    StoredCase sc = read_case(path, expected_fingerprint);
    if (sc.data.records.size() != 1) {
        throw std::runtime_error("steady case file holds more than one record: " + path);
    }
    return sc.data.records.front();
}

void export_snapshot_csv(const cfd::Snapshot& snap, const cfd::RoomConfig& cfg,
                         const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write snapshot CSV: " + path);
    out << "z_m\\x_m";
    for (int i = 0; i < cfg.nx; ++i) out << "," << (i + 0.5) * cfg.dx();
    out << "\n";
    for (int k = 0; k < cfg.nz; ++k) {
        out << (k + 0.5) * cfg.dz();
        for (int i = 0; i < cfg.nx; ++i) out << "," << snap.at(i, k);
        out << "\n";
    }
}

}  // namespace vent::data
