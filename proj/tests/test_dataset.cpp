#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vent/data/dataset.hpp"
#include "vent/io/bin.hpp"

#include <filesystem>
#include <fstream>

using namespace vent;
using namespace vent::data;
namespace fs = std::filesystem;

namespace {

cfd::RoomConfig tiny_config() {
    cfd::RoomConfig cfg = cfd::RoomConfig::defaults();
    cfg.nx = 48;
    cfg.nz = 12;
    cfg.dt_inner = 0.03;
    cfg.steady_time_cap = 1200.0;
    return cfg;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::path("tmp_test") / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

std::vector<char> slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("sample_controls: bounds, determinism, and mean of the rate distribution") {
    Rng rng(123);
    double rate_sum = 0.0;
    const int draws = 10000;
    for (int d = 0; d < draws; ++d) {
        auto [action, occ] = sample_controls(rng);
        for (int i = 0; i < 6; ++i) {
            CHECK(action.rates[i] >= 0.324);
            CHECK(action.rates[i] <= 3.24);
            CHECK(action.angles[i] >= 45.0);
            CHECK(action.angles[i] <= 135.0);
            rate_sum += action.rates[i];
        }
        CHECK(occ.n_p >= kOccupancyMin);
        CHECK(occ.n_p <= kOccupancyMax);
    }
    CHECK(rate_sum / (6.0 * draws) == doctest::Approx(1.782).epsilon(0.03 / 1.782));

    Rng a(77), b(77);
    for (int d = 0; d < 100; ++d) {
        auto [aa, ao] = sample_controls(a);
        auto [ba, bo] = sample_controls(b);
        CHECK(aa.rates == ba.rates);
        CHECK(aa.angles == ba.angles);
        CHECK(ao.n_p == bo.n_p);
    }
}

TEST_CASE("case files round-trip and reject corruption") {
    TempDir dir("case_io");
    cfd::RoomConfig cfg = tiny_config();
    const auto action = ControlAction::uniform(1.2, 80.0);
    auto steady = cfd::run_steady(cfg, action, Occupancy(42));
    auto tc = cfd::run_transient(steady.snapshot, cfg, action, Occupancy(42), 120.0, 0);

    const std::string path = (dir.path / "case.vcase").string();
    write_case(tc, cfg, path);
    auto sc = read_case(path);

    CHECK(sc.data.occupancy.n_p == 42);
    CHECK(sc.data.steady_case_id == 0);
    CHECK(sc.data.action.rates == tc.action.rates);
    CHECK(sc.data.action.angles == tc.action.angles);
    CHECK(sc.config_fingerprint == cfg.fingerprint());
    REQUIRE(sc.data.records.size() == tc.records.size());
    for (size_t r = 0; r < tc.records.size(); ++r) {
        for (size_t n = 0; n < tc.records[r].co2.size(); ++n) {
            // Stored as float32: reading back gives exactly the quantized value.
            CHECK(sc.data.records[r].co2[n] ==
                  static_cast<double>(static_cast<float>(tc.records[r].co2[n])));
        }
    }
    for (size_t n = 0; n < tc.monitor_trace.size(); ++n) {
        CHECK(sc.data.monitor_trace[n] ==
              static_cast<double>(static_cast<float>(tc.monitor_trace[n])));
    }

    // A second write of the read-back case is byte-identical.
    const std::string path2 = (dir.path / "case2.vcase").string();
    write_case(sc.data, cfg, path2);
    CHECK(slurp(path) == slurp(path2));

    // Truncation is a distinct, explicit error.
    auto bytes = slurp(path);
    std::ofstream cut((dir.path / "cut.vcase").string(), std::ios::binary);
    cut.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 257));
    cut.close();
    CHECK_THROWS_AS(read_case((dir.path / "cut.vcase").string()), io::TruncatedError);

    // Version and fingerprint mismatches are distinct errors too.
    bytes[7] = '9';
    std::ofstream vf((dir.path / "ver.vcase").string(), std::ios::binary);
    vf.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    vf.close();
    CHECK_THROWS_AS(read_case((dir.path / "ver.vcase").string()), io::VersionError);
    CHECK_THROWS_AS(read_case(path, std::string("deadbeefdeadbeef")), io::FingerprintError);
}

TEST_CASE("build_dataset: counts, integrity, replay, and bitwise determinism") {
    cfd::RoomConfig cfg = tiny_config();
    BuildOptions opt;
    opt.n_steady = 2;
    opt.n_transient = 3;
    opt.seed = 99;
    opt.duration = 600.0;

    TempDir dir_a("ds_a");
    auto ma = build_dataset(cfg, opt, dir_a.str());
    CHECK(ma.steady_cases.size() == 2);
    CHECK(ma.transient_cases.size() == 3);
    CHECK(ma.complete());
    CHECK(ma.check(dir_a.str()).empty());
    for (const auto& t : ma.transient_cases) {
        CHECK(t.steady_case_id >= 0);
        CHECK(t.steady_case_id < 2);
    }

    // Replay: stored action/occupancy/init reproduce the stored records.
    {
        const auto& entry = ma.transient_cases[1];
        auto sc = read_case((dir_a.path / entry.file).string(), ma.config_fingerprint);
        auto init = read_steady(
            (dir_a.path / ma.steady_cases[static_cast<size_t>(entry.steady_case_id)].file)
                .string(),
            ma.config_fingerprint);
        auto replay = cfd::run_transient(init, cfg, sc.data.action, sc.data.occupancy,
                                         opt.duration, entry.steady_case_id);
        REQUIRE(replay.records.size() == sc.data.records.size());
        double max_diff = 0.0;
        for (size_t r = 0; r < replay.records.size(); ++r) {
            for (size_t n = 0; n < replay.records[r].co2.size(); ++n) {
                max_diff = std::max(max_diff,
                                    std::abs(replay.records[r].co2[n] - sc.data.records[r].co2[n]));
            }
        }
        CHECK(max_diff < 1e-3);
    }

    // Same seed, fresh directory: byte-identical case files.
    TempDir dir_b("ds_b");
    auto mb = build_dataset(cfg, opt, dir_b.str());
    for (const auto& t : ma.transient_cases) {
        CHECK(slurp((dir_a.path / t.file).string()) == slurp((dir_b.path / t.file).string()));
    }
    for (const auto& s : ma.steady_cases) {
        CHECK(slurp((dir_a.path / s.file).string()) == slurp((dir_b.path / s.file).string()));
    }
    CHECK(mb.complete());

    // Dangling entries are detected once a case file disappears.
    fs::remove(dir_a.path / ma.transient_cases[0].file);
    CHECK_FALSE(ma.check(dir_a.str()).empty());
}

TEST_CASE("train_test_split is a deterministic partition") {
    DatasetManifest m;
    for (int id = 0; id < 60; ++id) {
        CaseEntry e;
        e.id = id;
        e.steady_case_id = 0;
        m.transient_cases.push_back(e);
    }
    auto [train, test] = train_test_split(m, 0.8, 5);
    CHECK(train.size() == 48);
    CHECK(test.size() == 12);

    std::vector<int> all = train;
    all.insert(all.end(), test.begin(), test.end());
    std::sort(all.begin(), all.end());
    for (int id = 0; id < 60; ++id) CHECK(all[static_cast<size_t>(id)] == id);

    auto [train2, test2] = train_test_split(m, 0.8, 5);
    CHECK(train == train2);
    CHECK(test == test2);
    auto [train3, test3] = train_test_split(m, 0.8, 6);
    CHECK(train != train3);

    CHECK_THROWS_AS(train_test_split(m, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(train_test_split(m, 1.0, 1), std::invalid_argument);
}

TEST_CASE("norm stats: z-transform closes, test cases never contribute") {
    cfd::RoomConfig cfg = tiny_config();
    BuildOptions opt;
    opt.n_steady = 1;
    opt.n_transient = 4;
    opt.seed = 321;
    opt.duration = 600.0;
    TempDir dir("ds_norm");
    auto m = build_dataset(cfg, opt, dir.str());

    const std::vector<int> train_ids{0, 1};
    auto stats = compute_norm_stats(m, train_ids, dir.str());
    CHECK(stats.co2_std > 1e-6);

    // Recomputation oracle: z-scoring the training data gives mean 0, std 1.
    double zsum = 0.0, zsum2 = 0.0;
    size_t count = 0;
    for (int id : train_ids) {
        auto sc = read_case((dir.path / m.transient_cases[static_cast<size_t>(id)].file).string());
        for (double v : sc.data.monitor_trace) {
            const double z = stats.z(v);
            zsum += z;
            zsum2 += z * z;
            ++count;
        }
    }
    CHECK(zsum / static_cast<double>(count) == doctest::Approx(0.0).epsilon(1e-6).scale(1.0));
    CHECK(zsum2 / static_cast<double>(count) == doctest::Approx(1.0).epsilon(1e-6));

    // Deleting a non-training case leaves the stats bit-identical.
    fs::remove(dir.path / m.transient_cases[3].file);
    auto stats2 = compute_norm_stats(m, train_ids, dir.str());
    CHECK(stats2.co2_mean == stats.co2_mean);
    CHECK(stats2.co2_std == stats.co2_std);

    // A constant trace has no spread and is rejected.
    auto sc = read_case((dir.path / m.transient_cases[0].file).string());
    for (auto& v : sc.data.monitor_trace) v = 400.0;
    write_case(sc.data, cfg, (dir.path / m.transient_cases[0].file).string());
    CHECK_THROWS(compute_norm_stats(m, {0}, dir.str()));
}

TEST_CASE("build_windows: stride-1 layout") {
    cfd::TransientCase tc;
    tc.action = ControlAction::uniform(2.0, 100.0);
    tc.occupancy = Occupancy(33);
    const int nx = 4;
    const int records = 60;
    for (int r = 0; r < records; ++r) {
        for (int i = 0; i < nx; ++i) {
            tc.monitor_trace.push_back(1000.0 * r + i);
        }
    }

    auto windows = build_windows(tc, nx, 17);
    CHECK(windows.size() == 42);  // 60 - (12 + 1 + 6) + 1
    const auto& w = windows[5];
    CHECK(w.case_id == 17);
    CHECK(w.offset == 5);
    CHECK(w.params_raw[0] == 2.0);
    CHECK(w.params_raw[6] == 100.0);
    CHECK(w.params_raw[12] == 33.0);
    // history[i*(H+1)+h] = trace(offset+h, i)
    CHECK(w.history[0 * 13 + 0] == 1000.0 * 5 + 0);
    CHECK(w.history[2 * 13 + 12] == 1000.0 * 17 + 2);
    // target[i*T+k] = trace(offset+13+k, i)
    CHECK(w.target[1 * 6 + 0] == 1000.0 * 18 + 1);
    CHECK(w.target[3 * 6 + 5] == 1000.0 * 23 + 3);

    cfd::TransientCase tiny = tc;
    tiny.monitor_trace.resize(static_cast<size_t>(nx) * 18);  // shorter than one window
    CHECK(build_windows(tiny, nx, 0).empty());
}
