#include "csn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "csn/protocols.hpp"

namespace csn {

namespace fs = std::filesystem;

unsigned default_jobs()
{
    if (const char* env = std::getenv("CSN_JOBS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<ScenarioResult> run_scenarios(const std::vector<ScenarioConfig>& configs, unsigned jobs)
{
    struct Task {
        std::size_t scenario;
        std::size_t seed_index;
    };
    std::vector<Task> tasks;
    std::vector<ScenarioResult> results(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
        configs[i].validate();
        results[i].config = configs[i];
        results[i].per_seed.resize(configs[i].seeds.size());
        for (std::size_t k = 0; k < configs[i].seeds.size(); ++k) {
            tasks.push_back({i, k});
        }
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(tasks.size());
    auto worker = [&] {
        for (auto t = next++; t < tasks.size(); t = next++) {
            const auto& task = tasks[t];
            try {
                const auto& cfg = configs[task.scenario];
                Simulation sim(cfg, cfg.seeds[task.seed_index]);
                results[task.scenario].per_seed[task.seed_index] = sim.run();
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };
    const auto n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    for (auto& r : results) {
        r.averaged = average_logs(r.per_seed);
    }
    return results;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, unsigned jobs)
{
    return std::move(run_scenarios({cfg}, jobs).front());
}

void write_scenario_outputs(const ScenarioResult& result, const fs::path& dir)
{
    fs::create_directories(dir);
    std::vector<std::pair<fs::path, std::string>> files;
    const auto& name = result.config.name;
    std::vector<RunSummary> rows;
    for (std::size_t k = 0; k < result.per_seed.size(); ++k) {
        std::ostringstream os;
        write_timeseries_csv(os, result.per_seed[k]);
        files.emplace_back(dir / (name + "_seed" + std::to_string(result.config.seeds[k]) + ".csv"), os.str());
        rows.push_back(result.per_seed[k].summary);
    }
    {
        std::ostringstream os;
        write_timeseries_csv(os, result.averaged);
        files.emplace_back(dir / (name + "_mean.csv"), os.str());
    }
    rows.push_back(result.averaged.summary);
    {
        std::ostringstream os;
        write_summary_csv(os, rows);
        files.emplace_back(dir / (name + "_summary.csv"), os.str());
    }

    std::vector<fs::path> staged;
    try {
        for (const auto& [path, body] : files) {
            auto tmp = path;
            tmp += ".tmp";
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << body;
            out.close();
            if (!out) {
                throw std::runtime_error("failed writing " + tmp.string());
            }
            staged.push_back(tmp);
        }
    } catch (...) {
        for (const auto& p : staged) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        throw;
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
        fs::rename(staged[i], files[i].first);
    }
}

ScenarioConfig base_config()
{
    ScenarioConfig c;
    c.field = FieldSpec{350.0, 350.0, 70.0};
    c.radio_range = 100.0;
    c.sim_time = 500.0;
    c.round_length = 100.0;
    c.sampling_period = 1.0;
    c.sample_bytes = 100;
    c.storage_bytes = 300 * c.sample_bytes;
    c.metric_tick = 10.0;
    c.seeds = {1, 2, 3, 4, 5};
    c.aggregation = {AggregationKind::ConstantRatio, 0.5};
    c.energy = EnergyModel::make(5.5e-8, 40.0);
    return c;
}

namespace {

constexpr ProtocolKind kAllProtocols[] = {ProtocolKind::LS, ProtocolKind::CLS, ProtocolKind::CBCS, ProtocolKind::CCS};
constexpr std::uint32_t kDensities[] = {50, 100, 150};

// Storage large enough that no node fills during a 500 s run.
constexpr Bytes kUnbounded = 1'000'000'000;

std::vector<ScenarioConfig> density_matrix(const std::string& prefix)
{
    std::vector<ScenarioConfig> out;
    for (const auto p : kAllProtocols) {
        for (const auto n : kDensities) {
            auto c = base_config();
            c.protocol = p;
            c.nodes = n;
            c.storage_bytes = kUnbounded;
            c.name = prefix + "_" + to_string(p) + "_n" + std::to_string(n);
            out.push_back(c);
        }
    }
    return out;
}

std::vector<ScenarioConfig> depletion_matrix(const std::string& prefix)
{
    std::vector<ScenarioConfig> out;
    for (const auto p : {ProtocolKind::LS, ProtocolKind::CBCS}) {
        for (const auto a : {ActivityModel::Even, ActivityModel::Uneven}) {
            auto c = base_config();
            c.protocol = p;
            c.nodes = 100;
            c.aggregation_period = 10.0;
            c.activity.model = a;
            c.name = prefix + "_" + to_string(p) + (a == ActivityModel::Even ? "_even" : "_uneven");
            out.push_back(c);
        }
    }
    return out;
}

std::vector<ScenarioConfig> biased_matrix()
{
    std::vector<ScenarioConfig> out;
    for (const auto kind : {AggregationKind::ConstantRatio, AggregationKind::OnePacket}) {
        auto c = base_config();
        c.protocol = ProtocolKind::CBCS;
        c.zone_counts = {{6, 5}, {8, 4}, {16, 3}, {18, 2}};
        c.round_length = 10.0;
        c.sim_time = 3000.0;
        c.aggregation.kind = kind;
        c.name = std::string("fig7_") + (kind == AggregationKind::ConstantRatio ? "constant" : "one_packet");
        out.push_back(c);
    }
    return out;
}

std::string label(const ScenarioConfig& c)
{
    std::string s = to_string(c.protocol);
    s += c.activity.model == ActivityModel::Even ? "_even" : "_uneven";
    return s;
}

template <class F>
std::string time_table(const std::vector<ScenarioResult>& results, const std::vector<std::string>& suffixes, F column)
{
    std::ostringstream os;
    os << "# t";
    for (const auto& r : results) {
        for (const auto& sfx : suffixes) {
            os << ' ' << label(r.config) << sfx;
        }
    }
    os << '\n';
    const auto rows = results.front().averaged.ticks.size();
    for (std::size_t i = 0; i < rows; ++i) {
        os << format_number(results.front().averaged.ticks[i].t);
        for (const auto& r : results) {
            for (std::size_t s = 0; s < suffixes.size(); ++s) {
                os << ' ' << format_number(column(r.averaged.ticks[i], s));
            }
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace

const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names{"fig1_storage", "fig2_energy",   "fig3_collection", "fig4_depletion",
                                                "fig5_bincov",  "fig6_manifold", "fig7_biased"};
    return names;
}

ExperimentPreset expand_preset(std::string_view name)
{
    ExperimentPreset p;
    p.name = std::string(name);
    if (name == "fig1_storage") {
        p.description = "mean storage per sensor vs density, four protocols";
        p.scenarios = density_matrix("fig1");
    } else if (name == "fig2_energy") {
        p.description = "pre/post energy vs density, four protocols";
        p.scenarios = density_matrix("fig2");
    } else if (name == "fig3_collection") {
        p.description = "mean collection time vs density, four protocols";
        p.scenarios = density_matrix("fig3");
    } else if (name == "fig4_depletion") {
        p.description = "depleted-sensor fraction over time, LS/CBCS x even/uneven";
        p.scenarios = depletion_matrix("fig4");
    } else if (name == "fig5_bincov") {
        p.description = "binary coverage over time, LS/CBCS x even/uneven";
        p.scenarios = depletion_matrix("fig5");
    } else if (name == "fig6_manifold") {
        p.description = "manifold coverage over time, LS/CBCS x even/uneven";
        p.scenarios = depletion_matrix("fig6");
    } else if (name == "fig7_biased") {
        p.description = "per-zone coverage under biased deployment, constant vs one-packet aggregation";
        p.scenarios = biased_matrix();
    } else {
        throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
    }
    return p;
}

std::string preset_table(std::string_view name, const std::vector<ScenarioResult>& results)
{
    std::ostringstream os;
    if (name == "fig1_storage" || name == "fig2_energy" || name == "fig3_collection") {
        if (name == "fig1_storage") {
            os << "# protocol density mean_storage_bytes\n";
        } else if (name == "fig2_energy") {
            os << "# protocol density pre_energy_J post_energy_J\n";
        } else {
            os << "# protocol density mean_collection_s\n";
        }
        for (const auto& r : results) {
            const auto& s = r.averaged.summary;
            os << s.protocol << ' ' << s.density << ' ';
            if (name == "fig1_storage") {
                os << format_number(s.mean_storage_final_bytes);
            } else if (name == "fig2_energy") {
                os << format_number(s.pre_energy_j) << ' ' << format_number(s.post_energy_j);
            } else {
                os << format_number(s.mean_collection_s);
            }
            os << '\n';
        }
        return os.str();
    }
    if (name == "fig4_depletion") {
        return time_table(results, {""}, [](const TickRow& t, std::size_t) { return t.depleted_frac; });
    }
    if (name == "fig5_bincov") {
        return time_table(results, {""}, [](const TickRow& t, std::size_t) { return t.bincov; });
    }
    if (name == "fig6_manifold") {
        return time_table(results, {"_any", "_quarter", "_half", "_full"}, [](const TickRow& t, std::size_t s) {
            const double cols[] = {t.bincov, t.cov25, t.cov50, t.cov100};
            return cols[s];
        });
    }
    if (name == "fig7_biased") {
        os << "# t";
        for (const auto& r : results) {
            for (const auto& [z, n] : r.config.zone_counts) {
                os << ' ' << to_string(r.config.aggregation.kind) << "_Z-" << n;
            }
        }
        os << '\n';
        const auto rows = results.front().averaged.ticks.size();
        for (std::size_t i = 0; i < rows; ++i) {
            os << format_number(results.front().averaged.ticks[i].t);
            for (const auto& r : results) {
                for (const auto& [z, n] : r.config.zone_counts) {
                    double live = 0.0;
                    for (const auto& log : r.per_seed) {
                        live += log.zone_live[i][z];
                    }
                    os << ' ' << format_number(live / static_cast<double>(r.per_seed.size()));
                }
            }
            os << '\n';
        }
        return os.str();
    }
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

std::vector<ScenarioResult> run_preset(std::string_view name, const fs::path& dir, unsigned jobs)
{
    const auto preset = expand_preset(name);
    auto results = run_scenarios(preset.scenarios, jobs);
    for (const auto& r : results) {
        write_scenario_outputs(r, dir);
    }
    std::ofstream out(dir / (preset.name + ".dat"), std::ios::binary | std::ios::trunc);
    out << preset_table(name, results);
    if (!out) {
        throw std::runtime_error("failed writing plot data for " + preset.name);
    }
    return results;
}

}  // namespace csn
