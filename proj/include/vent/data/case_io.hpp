#pragma once

#include "vent/cfd/simulator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vent::data {

// On-disk layout: 8-byte magic with the format version, a length-prefixed
// JSON header (action, occupancy, steady id, grid shape, record interval,
// config fingerprint, block table), then the float32 blocks in table order:
// monitor x coordinates, monitor ppm time series (record-major), and the
// full cell fields per record. Reading quantizes through float32, so a
// read-back case re-serializes to identical bytes.
struct StoredCase {
    cfd::TransientCase data;
    std::vector<double> monitor_x;  // meters
    std::string config_fingerprint;
};

void write_case(const cfd::TransientCase& tc, const cfd::RoomConfig& cfg,
                const std::string& path);

// `expected_fingerprint`, when given, is checked against the header and a
// mismatch raises io::FingerprintError.
StoredCase read_case(const std::string& path,
                     const std::optional<std::string>& expected_fingerprint = std::nullopt);

// Steady cases reuse the container with a single record.
void write_steady(const cfd::Snapshot& snap, const ControlAction& action,
                  const Occupancy& occupancy, const cfd::RoomConfig& cfg,
                  const std::string& path);
cfd::Snapshot read_steady(const std::string& path,
                          const std::optional<std::string>& expected_fingerprint = std::nullopt);

// Debug export of one field as a dense CSV grid (header row of x centers,
// then one row per z level from the floor up).
void export_snapshot_csv(const cfd::Snapshot& snap, const cfd::RoomConfig& cfg,
                         const std::string& path);

}  // namespace vent::data
