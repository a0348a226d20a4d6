#include "csn/csn.h"

#include <cstring>
#include <filesystem>
#include <sstream>
#include <string>

#include "csn/config.hpp"
#include "csn/harness.hpp"
#include "csn/protocols.hpp"

struct csn_scenario {
    csn::ScenarioConfig config;
};

struct csn_result {
    csn::MetricsLog log;
};

namespace {

thread_local std::string g_last_error;

csn_status fail(csn_status code, const std::string& msg)
{
    g_last_error = msg;
    return code;
}

// Maps C++ exceptions onto status codes at the boundary.
template <class F>
csn_status guarded(F&& body)
{
    try {
        g_last_error.clear();
        return body();
    } catch (const csn::ConfigError& e) {
        return fail(CSN_ERR_CONFIG, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(CSN_ERR_IO, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(CSN_ERR_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(CSN_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(CSN_ERR_INTERNAL, "unknown error");
    }
}

char* dup(const std::string& s)
{
    auto* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

bool known_preset(const char* name)
{
    for (const auto& n : csn::preset_names()) {
        if (n == name) {
            return true;
        }
    }
    return false;
}

}  // namespace

extern "C" {

const char* csn_version(void) { return "1.0.0"; }

const char* csn_last_error(void) { return g_last_error.c_str(); }

csn_status csn_scenario_parse(const char* text, csn_scenario** out)
{
    if (!text || !out) {
        return fail(CSN_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        *out = new csn_scenario{csn::parse_config(text)};
        return CSN_OK;
    });
}

csn_status csn_scenario_load(const char* path, csn_scenario** out)
{
    if (!path || !out) {
        return fail(CSN_ERR_ARGUMENT, "null argument");
    }
    if (!std::filesystem::exists(path)) {
        return fail(CSN_ERR_IO, std::string("cannot open config file ") + path);
    }
    return guarded([&] {
        *out = new csn_scenario{csn::load_config(path)};
        return CSN_OK;
    });
}

csn_status csn_scenario_from_preset(const char* preset, size_t index, csn_scenario** out)
{
    if (!preset || !out) {
        return fail(CSN_ERR_ARGUMENT, "null argument");
    }
    if (!known_preset(preset)) {
        return fail(CSN_ERR_UNKNOWN_PRESET, std::string("unknown preset '") + preset + "'");
    }
    return guarded([&] {
        auto p = csn::expand_preset(preset);
        if (index >= p.scenarios.size()) {
            return fail(CSN_ERR_ARGUMENT, "preset scenario index out of range");
        }
        *out = new csn_scenario{p.scenarios[index]};
        return CSN_OK;
    });
}

void csn_scenario_free(csn_scenario* scenario) { delete scenario; }

csn_status csn_scenario_serialize(const csn_scenario* scenario, char** out)
{
    if (!scenario || !out) {
        return fail(CSN_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        *out = dup(csn::serialize_config(scenario->config));
        return CSN_OK;
    });
}

size_t csn_scenario_seed_count(const csn_scenario* scenario)
{
    return scenario ? scenario->config.seeds.size() : 0;
}

void csn_string_free(char* s) { delete[] s; }

csn_status csn_simulate(const csn_scenario* scenario, uint64_t seed, csn_result** out)
{
    if (!scenario || !out) {
        return fail(CSN_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        csn::Simulation sim(scenario->config, seed);
        *out = new csn_result{sim.run()};
        return CSN_OK;
    });
}

void csn_result_free(csn_result* result) { delete result; }

csn_status csn_result_summary(const csn_result* result, csn_summary* out)
{
    if (!result || !out) {
        return fail(CSN_ERR_ARGUMENT, "null argument");
    }
    const auto& s = result->log.summary;
    *out = csn_summary{s.pre_energy_j, s.post_energy_j, s.loss_frac, s.mean_collection_s,
                       s.mean_storage_final_bytes, s.density};
    return CSN_OK;
}

csn_status csn_result_ledger(const csn_result* result, csn_ledger* out)
{
    if (!result || !out) {
        return fail(CSN_ERR_ARGUMENT, "null argument");
    }
    const auto& l = result->log.ledger;
    *out = csn_ledger{l.generated,       l.stored_raw, l.suppressed, l.collision_lost,
                      l.lost_to_storage, l.stored,     l.storage_j,  l.radio_j()};
    return CSN_OK;
}

size_t csn_result_tick_count(const csn_result* result) { return result ? result->log.ticks.size() : 0; }

csn_status csn_result_tick(const csn_result* result, size_t index, csn_tick* out)
{
    if (!result || !out) {
        return fail(CSN_ERR_ARGUMENT, "null argument");
    }
    if (index >= result->log.ticks.size()) {
        return fail(CSN_ERR_ARGUMENT, "tick index out of range");
    }
    const auto& r = result->log.ticks[index];
    *out = csn_tick{r.t, r.mean_storage_bytes, r.depleted_frac, r.bincov, r.cov25, r.cov50, r.cov100,
                    r.deadzone_frac};
    return CSN_OK;
}

csn_status csn_result_timeseries_csv(const csn_result* result, char** out)
{
    if (!result || !out) {
        return fail(CSN_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        std::ostringstream os;
        csn::write_timeseries_csv(os, result->log);
        *out = dup(os.str());
        return CSN_OK;
    });
}

csn_status csn_run_scenario(const csn_scenario* scenario, const char* out_dir, unsigned jobs)
{
    if (!scenario || !out_dir) {
        return fail(CSN_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const auto result = csn::run_scenario(scenario->config, jobs == 0 ? csn::default_jobs() : jobs);
        csn::write_scenario_outputs(result, out_dir);
        return CSN_OK;
    });
}

csn_status csn_run_preset(const char* name, const char* out_dir, unsigned jobs)
{
    if (!name || !out_dir) {
        return fail(CSN_ERR_ARGUMENT, "null argument");
    }
    if (!known_preset(name)) {
        return fail(CSN_ERR_UNKNOWN_PRESET, std::string("unknown preset '") + name + "'");
    }
    return guarded([&] {
        csn::run_preset(name, out_dir, jobs == 0 ? csn::default_jobs() : jobs);
        return CSN_OK;
    });
}

size_t csn_preset_count(void) { return csn::preset_names().size(); }

const char* csn_preset_name(size_t index)
{
    const auto& names = csn::preset_names();
    return index < names.size() ? names[index].c_str() : nullptr;
}

const char* csn_preset_description(size_t index)
{
    static thread_local std::string desc;
    const auto& names = csn::preset_names();
    if (index >= names.size()) {
        return nullptr;
    }
    desc = csn::expand_preset(names[index]).description;
    return desc.c_str();
}

size_t csn_preset_scenario_count(const char* name)
{
    if (!name || !known_preset(name)) {
        return 0;
    }
    return csn::expand_preset(name).scenarios.size();
}

}  // extern "C"
