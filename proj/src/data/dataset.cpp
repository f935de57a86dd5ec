#include "vent/data/dataset.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace vent::data {

namespace fs = std::filesystem;
using nlohmann::json;

bool DatasetManifest::complete() const {
    for (const auto& c : steady_cases) {
        if (!c.ok) return false;
    }
    for (const auto& c : transient_cases) {
        if (!c.ok) return false;
    }
    return true;
}

namespace {

json entry_to_json(const CaseEntry& c) {
    json j{{"id", c.id},
           {"file", c.file},
           {"rates", c.action.rates},
           {"angles", c.action.angles},
           {"n_p", c.n_p},
           {"ok", c.ok}};
    if (c.steady_case_id >= 0) j["steady_case_id"] = c.steady_case_id;
    if (!c.ok) j["error"] = c.error;
    return j;
}

CaseEntry entry_from_json(const json& j) {
    CaseEntry c;
    c.id = j.at("id").get<int>();
    c.file = j.at("file").get<std::string>();
    for (int i = 0; i < 6; ++i) {
        c.action.rates[i] = j.at("rates").at(i).get<double>();
        c.action.angles[i] = j.at("angles").at(i).get<double>();
    }
    c.n_p = j.at("n_p").get<int>();
    c.steady_case_id = j.value("steady_case_id", -1);
    c.ok = j.at("ok").get<bool>();
    c.error = j.value("error", "");
    return c;
}

}  // namespace

void DatasetManifest::save(const std::string& path) const {
    json j;
    j["version"] = 1;
    j["rng_seed"] = rng_seed;
    j["config_fingerprint"] = config_fingerprint;
    j["config_file"] = config_file;
    j["steady"] = json::array();
    for (const auto& c : steady_cases) j["steady"].push_back(entry_to_json(c));
    j["transient"] = json::array();
    for (const auto& c : transient_cases) j["transient"].push_back(entry_to_json(c));

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << j.dump(2) << "\n";
}

DatasetManifest DatasetManifest::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path);
    json j = json::parse(in);
    DatasetManifest m;
    m.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    m.config_fingerprint = j.at("config_fingerprint").get<std::string>();
    m.config_file = j.at("config_file").get<std::string>();
    for (const auto& e : j.at("steady")) m.steady_cases.push_back(entry_from_json(e));
    for (const auto& e : j.at("transient")) m.transient_cases.push_back(entry_from_json(e));
    return m;
}

std::vector<std::string> DatasetManifest::check(const std::string& root_dir) const {
    std::vector<std::string> problems;
    std::vector<int> steady_ids;
    for (const auto& c : steady_cases) steady_ids.push_back(c.id);
    for (const auto& c : steady_cases) {
        if (c.ok && !fs::exists(fs::path(root_dir) / c.file)) {
            problems.push_back("missing steady case file: " + c.file);
        }
    }
    for (const auto& c : transient_cases) {
        if (c.ok && !fs::exists(fs::path(root_dir) / c.file)) {
            problems.push_back("missing transient case file: " + c.file);
        }
        if (std::find(steady_ids.begin(), steady_ids.end(), c.steady_case_id) ==
            steady_ids.end()) {
            problems.push_back("transient " + std::to_string(c.id) +
                               " references unknown steady id " +
                               std::to_string(c.steady_case_id));
        }
    }
    return problems;
}

std::pair<ControlAction, Occupancy> sample_controls(Rng& rng, const ControlBounds& bounds) {
    ControlAction a;
    for (int i = 0; i < 6; ++i) a.rates[i] = rng.uniform(bounds.rate_min, bounds.rate_max);
    for (int i = 0; i < 6; ++i) a.angles[i] = rng.uniform(bounds.angle_min, bounds.angle_max);
    const auto n_p = static_cast<int>(rng.uniform_int(kOccupancyMin, kOccupancyMax));
    return {a, Occupancy(n_p)};
}

namespace {

std::string case_name(const char* prefix, int id) {
    std::ostringstream os;
    os << prefix << "_" << std::setw(3) << std::setfill('0') << id << ".vcase";
    return os.str();
}

}  // namespace

DatasetManifest build_dataset(const cfd::RoomConfig& cfg, const BuildOptions& opt,
                              const std::string& out_dir) {
    if (opt.n_steady < 1) throw std::invalid_argument("need at least one steady case");
    cfg.validate();
    fs::create_directories(out_dir);

    DatasetManifest manifest;
    manifest.rng_seed = opt.seed;
    manifest.config_fingerprint = cfg.fingerprint();
    manifest.config_file = "room.cfg";
    cfg.save((fs::path(out_dir) / manifest.config_file).string());

    // Steady phase. Each case draws from its own seed stream so results do
    // not depend on scheduling.
    manifest.steady_cases.resize(static_cast<size_t>(opt.n_steady));
    std::vector<cfd::Snapshot> steady_fields(static_cast<size_t>(opt.n_steady));
    auto steady_job = [&](int id) {
        Rng rng(Rng::mix(opt.seed, static_cast<std::uint64_t>(id)));
        auto [action, occ] = sample_controls(rng);
        CaseEntry e;
        e.id = id;
        e.file = case_name("steady", id);
        e.action = action;
        e.n_p = occ.n_p;
        try {
            auto res = run_steady(cfg, action, occ);
            if (!res.converged) {
                e.ok = false;
                e.error = "steady run hit the time cap";
            }
            steady_fields[static_cast<size_t>(id)] = res.snapshot;
            write_steady(res.snapshot, action, occ, cfg, (fs::path(out_dir) / e.file).string());
        } catch (const std::exception& ex) {
            e.ok = false;
            e.error = ex.what();
        }
        manifest.steady_cases[static_cast<size_t>(id)] = e;
    };

    auto transient_job = [&](int id) {
        Rng rng(Rng::mix(opt.seed, 1000003ULL + static_cast<std::uint64_t>(id)));
        const auto init_id = static_cast<int>(rng.uniform_int(0, opt.n_steady - 1));
        auto [action, occ] = sample_controls(rng);
        CaseEntry e;
        e.id = id;
        e.file = case_name("case", id);
        e.action = action;
        e.n_p = occ.n_p;
        e.steady_case_id = init_id;
        try {
            if (!manifest.steady_cases[static_cast<size_t>(init_id)].ok) {
                throw std::runtime_error("initial steady case " + std::to_string(init_id) +
                                         " failed");
            }
            auto tc = run_transient(steady_fields[static_cast<size_t>(init_id)], cfg, action,
                                    occ, opt.duration, init_id);
            write_case(tc, cfg, (fs::path(out_dir) / e.file).string());
        } catch (const std::exception& ex) {
            e.ok = false;
            e.error = ex.what();
        }
        manifest.transient_cases[static_cast<size_t>(id)] = e;
    };

    auto run_jobs = [&](int count, auto&& job) {
        const int workers = std::max(1, opt.threads);
        if (workers == 1) {
            for (int id = 0; id < count; ++id) job(id);
            return;
        }
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&]() {
                for (int id = next.fetch_add(1); id < count; id = next.fetch_add(1)) job(id);
            });
        }
        for (auto& th : pool) th.join();
    };

    run_jobs(opt.n_steady, steady_job);
    manifest.transient_cases.resize(static_cast<size_t>(opt.n_transient));
    run_jobs(opt.n_transient, transient_job);

    manifest.save((fs::path(out_dir) / "manifest.json").string());
    return manifest;
}

std::pair<std::vector<int>, std::vector<int>> train_test_split(const DatasetManifest& manifest,
                                                               double ratio,
                                                               std::uint64_t seed) {
    if (ratio <= 0.0 || ratio >= 1.0) throw std::invalid_argument("split ratio must be in (0,1)");
    std::vector<int> ids;
    for (const auto& c : manifest.transient_cases) {
        if (c.ok) ids.push_back(c.id);
    }
    Rng rng(Rng::mix(seed, 0xA11CEULL));
    for (size_t n = ids.size(); n > 1; --n) {  // Fisher-Yates
        const auto j = static_cast<size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
        std::swap(ids[n - 1], ids[j]);
    }
    const auto n_train = static_cast<size_t>(std::floor(ratio * static_cast<double>(ids.size())));
    std::vector<int> train(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<int> test(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {train, test};
}

NormStats compute_norm_stats(const DatasetManifest& manifest, const std::vector<int>& train_ids,
                             const std::string& root_dir) {
    if (train_ids.empty()) throw std::invalid_argument("empty training set");

    double sum = 0.0, sum2 = 0.0;
    size_t count = 0;
    for (int id : train_ids) {
        const auto& entry = manifest.transient_cases.at(static_cast<size_t>(id));
        const auto sc = read_case((fs::path(root_dir) / entry.file).string(),
                                  manifest.config_fingerprint);
        for (double v : sc.data.monitor_trace) {
            sum += v;
            sum2 += v * v;
            ++count;
        }
    }
    NormStats stats;
    stats.co2_mean = sum / static_cast<double>(count);
    const double var = sum2 / static_cast<double>(count) - stats.co2_mean * stats.co2_mean;
    stats.co2_std = std::sqrt(std::max(0.0, var));
    stats.fingerprint = manifest.config_fingerprint;
    if (stats.co2_std < 1e-6) {
        throw std::runtime_error("degenerate CO2 spread in the training data (std ~ 0)");
    }
    return stats;
}

std::vector<TrainingWindow> build_windows(const cfd::TransientCase& tc, int nx, int case_id,
                                          int history, int horizon) {
    const auto n_records = static_cast<int>(tc.records.empty()
                                                ? tc.monitor_trace.size() / static_cast<size_t>(nx)
                                                : tc.records.size());
    const int window = history + 1 + horizon;
    std::vector<TrainingWindow> out;
    if (n_records < window) return out;

    std::array<double, 13> params{};
    for (int i = 0; i < 6; ++i) {
        params[static_cast<size_t>(i)] = tc.action.rates[static_cast<size_t>(i)];
        params[static_cast<size_t>(6 + i)] = tc.action.angles[static_cast<size_t>(i)];
    }
    params[12] = static_cast<double>(tc.occupancy.n_p);

    const auto trace = [&](int record, int i) {
        return tc.monitor_trace[static_cast<size_t>(record) * nx + static_cast<size_t>(i)];
    };

    for (int j = 0; j + window <= n_records; ++j) {
        TrainingWindow w;
        w.case_id = case_id;
        w.offset = j;
        w.params_raw = params;
        w.history.resize(static_cast<size_t>(nx) * (history + 1));
        w.target.resize(static_cast<size_t>(nx) * horizon);
        for (int i = 0; i < nx; ++i) {
            for (int h = 0; h <= history; ++h) {
                w.history[static_cast<size_t>(i) * (history + 1) + h] = trace(j + h, i);
            }
            for (int k = 0; k < horizon; ++k) {
                w.target[static_cast<size_t>(i) * horizon + k] = trace(j + history + 1 + k, i);
            }
        }
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<std::array<double, 2>> monitor_query_points(const cfd::RoomConfig& cfg) {
    std::vector<std::array<double, 2>> pts(static_cast<size_t>(cfg.nx));
    const double zn = cfg.monitor_height / cfg.height_z;
    for (int i = 0; i < cfg.nx; ++i) {
        pts[static_cast<size_t>(i)] = {(i + 0.5) * cfg.dx() / cfg.length_x, zn};
    }
    return pts;
}

}  // namespace vent::data
