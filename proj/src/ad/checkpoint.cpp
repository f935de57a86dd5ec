#include "vent/ad/checkpoint.hpp"

#include "vent/io/bin.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace vent::ad {

using nlohmann::json;

namespace {
constexpr char kMagic[8] = {'V', 'E', 'N', 'T', 'C', 'K', 'P', '1'};
}

const LoadedTensor& Checkpoint::find(const std::string& name) const {
    for (const auto& t : tensors) {
        if (t.name == name) return t;
    }
    throw std::runtime_error("checkpoint is missing tensor '" + name + "'");
}

void save_checkpoint(const std::string& path, const json& meta,
                     const std::vector<Param>& params) {
    io::require_little_endian();
    json header;
    header["meta"] = meta;
    header["tensors"] = json::array();
    for (const auto& p : params) {
        header["tensors"].push_back(json{{"name", p.name},
                                         {"rows", p.tensor.rows()},
                                         {"cols", p.tensor.cols()}});
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out.write(kMagic, sizeof(kMagic));
    const std::string hs = header.dump();
    io::write_u32(out, static_cast<std::uint32_t>(hs.size()));
    out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
    for (const auto& p : params) io::write_f64_block(out, p.tensor.value());
    if (!out) throw std::runtime_error("short write on checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    io::require_little_endian();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);

    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, "VENTCKP", 7) != 0) {
        throw io::VersionError("not a checkpoint file: " + path);
    }
    if (magic[7] != '1') throw io::VersionError("unsupported checkpoint version in " + path);

    const auto hlen = io::read_u32(in, "checkpoint header length");
    std::string hs(hlen, '\0');
    in.read(hs.data(), hlen);
    if (static_cast<std::uint32_t>(in.gcount()) != hlen) {
        throw io::TruncatedError("truncated checkpoint header in " + path);
    }

    json header = json::parse(hs);
    Checkpoint ck;
    ck.meta = header.at("meta");
    for (const auto& tj : header.at("tensors")) {
        LoadedTensor t;
        t.name = tj.at("name").get<std::string>();
        t.rows = tj.at("rows").get<int>();
        t.cols = tj.at("cols").get<int>();
        t.values = io::read_f64_block(in, static_cast<size_t>(t.rows) * t.cols, t.name);
        ck.tensors.push_back(std::move(t));
    }
    return ck;
}

}  // namespace vent::ad
