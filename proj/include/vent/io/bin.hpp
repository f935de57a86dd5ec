#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vent::io {

// Case files and checkpoints are little-endian; refuse to run elsewhere
// rather than silently writing a different format.
inline void require_little_endian() {
    const std::uint16_t probe = 1;
    if (*reinterpret_cast<const std::uint8_t*>(&probe) != 1) {
        throw std::runtime_error("big-endian hosts are not supported by the binary formats");
    }
}

struct TruncatedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct VersionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FingerprintError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void write_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), 4);
}

inline std::uint32_t read_u32(std::istream& in, const std::string& what) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    if (!in) throw TruncatedError("truncated while reading " + what);
    return v;
}

inline void write_f32_block(std::ostream& out, const std::vector<double>& values) {
    std::vector<float> buf(values.size());
    for (size_t n = 0; n < values.size(); ++n) buf[n] = static_cast<float>(values[n]);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
}

inline std::vector<double> read_f32_block(std::istream& in, size_t count,
                                          const std::string& what) {
    std::vector<float> buf(count);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(count * sizeof(float)));
    if (static_cast<size_t>(in.gcount()) != count * sizeof(float)) {
        throw TruncatedError("truncated block '" + what + "'");
    }
    std::vector<double> out(count);
    for (size_t n = 0; n < count; ++n) out[n] = static_cast<double>(buf[n]);
    return out;
}

inline void write_f64_block(std::ostream& out, const std::vector<double>& values) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
}

inline std::vector<double> read_f64_block(std::istream& in, size_t count,
                                          const std::string& what) {
    std::vector<double> out(count);
    in.read(reinterpret_cast<char*>(out.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<size_t>(in.gcount()) != count * sizeof(double)) {
        throw TruncatedError("truncated block '" + what + "'");
    }
    return out;
}

}  // namespace vent::io
