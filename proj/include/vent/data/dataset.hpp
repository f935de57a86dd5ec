#pragma once

#include "vent/data/case_io.hpp"
#include "vent/rng.hpp"

#include <string>
#include <utility>
#include <vector>

namespace vent::data {

struct CaseEntry {
    int id = -1;
    std::string file;
    ControlAction action;
    int n_p = 0;
    int steady_case_id = -1;  // transient only
    bool ok = true;
    std::string error;
};

struct DatasetManifest {
    std::vector<CaseEntry> steady_cases;
    std::vector<CaseEntry> transient_cases;
    std::string config_fingerprint;
    std::string config_file;
    std::uint64_t rng_seed = 0;

    bool complete() const;
    void save(const std::string& path) const;
    static DatasetManifest load(const std::string& path);

    // Referential integrity: every transient points at an existing steady
    // id and every referenced file is present on disk. Returns the list of
    // problems (empty when intact).
    std::vector<std::string> check(const std::string& root_dir) const;
};

// One draw of Eq.-style uniform controls: rates U[rate_min, rate_max],
// angles U[angle_min, angle_max], occupancy U{10..80}, all independent.
std::pair<ControlAction, Occupancy> sample_controls(Rng& rng, const ControlBounds& bounds = {});

inline constexpr int kOccupancyMin = 10;
inline constexpr int kOccupancyMax = 80;

struct BuildOptions {
    int n_steady = 10;
    int n_transient = 60;
    std::uint64_t seed = 7;
    double duration = 1800.0;
    int threads = 1;
};

// Two-phase dataset generation: steady cases under sampled controls, then
// transients from random steady initial conditions under fresh controls.
// Case files land in out_dir; failures are recorded per case rather than
// aborting the run.
DatasetManifest build_dataset(const cfd::RoomConfig& cfg, const BuildOptions& opt,
                              const std::string& out_dir);

// Deterministic shuffled split over transient case ids; disjoint and
// exhaustive for any ratio in (0, 1).
std::pair<std::vector<int>, std::vector<int>> train_test_split(const DatasetManifest& manifest,
                                                               double ratio,
                                                               std::uint64_t seed);

struct NormStats {
    double co2_mean = 0.0;
    double co2_std = 1.0;
    ControlBounds bounds;
    int n_p_min = kOccupancyMin;
    int n_p_max = kOccupancyMax;
    std::string fingerprint;  // config fingerprint the stats belong to

    double z(double ppm) const { return (ppm - co2_mean) / co2_std; }
    double ppm(double z_val) const { return z_val * co2_std + co2_mean; }
};

// Z-score statistics over the monitor traces of the training cases only.
NormStats compute_norm_stats(const DatasetManifest& manifest, const std::vector<int>& train_ids,
                             const std::string& root_dir);

// Sliding windows cut from one case with stride 1: history of H+1 records
// per monitor point plus the (action, n_p) parameters, targets the next T
// records. History and target are point-major: history[i*(H+1)+h],
// target[i*T+k].
struct TrainingWindow {
    std::vector<double> history;
    std::vector<double> target;
    std::array<double, 13> params_raw{};  // 6 rates, 6 angles, n_p
    int case_id = -1;
    int offset = 0;
};

inline constexpr int kHistorySteps = 12;  // H
inline constexpr int kHorizonSteps = 6;   // T

std::vector<TrainingWindow> build_windows(const cfd::TransientCase& tc, int nx,
                                          int case_id, int history = kHistorySteps,
                                          int horizon = kHorizonSteps);

// Normalized 2D query coordinates of the monitor line for a config.
std::vector<std::array<double, 2>> monitor_query_points(const cfd::RoomConfig& cfg);

}  // namespace vent::data
