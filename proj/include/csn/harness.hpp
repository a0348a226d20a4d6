#pragma once

// Seed sweeps, figure presets and CSV/plot-data output.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "csn/config.hpp"
#include "csn/metrics.hpp"

namespace csn {

struct ScenarioResult {
    ScenarioConfig config;
    std::vector<MetricsLog> per_seed;
    MetricsLog averaged;
};

/// Worker count from CSN_JOBS, else the hardware concurrency.
unsigned default_jobs();

/// Runs every seed of every scenario; results keep the input order no matter
/// how many workers run them.
std::vector<ScenarioResult> run_scenarios(const std::vector<ScenarioConfig>& configs, unsigned jobs);

ScenarioResult run_scenario(const ScenarioConfig& cfg, unsigned jobs = 1);

/// Writes `<name>_seed<k>.csv`, `<name>_mean.csv` and `<name>_summary.csv`
/// into `dir`. Files are staged and renamed into place only once all of them
/// are written.
void write_scenario_outputs(const ScenarioResult& result, const std::filesystem::path& dir);

struct ExperimentPreset {
    std::string name;
    std::string description;
    std::vector<ScenarioConfig> scenarios;
};

const std::vector<std::string>& preset_names();
/// Throws std::invalid_argument for an unknown name.
ExperimentPreset expand_preset(std::string_view name);

/// Reference field, radio and energy constants shared by all presets.
ScenarioConfig base_config();

/// Runs a preset and writes per-scenario CSVs plus `<preset>.dat`, a
/// whitespace-separated table keyed by the figure's axes.
std::vector<ScenarioResult> run_preset(std::string_view name, const std::filesystem::path& dir, unsigned jobs);

/// Builds the plot-data table for an already-run preset.
std::string preset_table(std::string_view name, const std::vector<ScenarioResult>& results);

}  // namespace csn
