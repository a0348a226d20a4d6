// Command-line front end. Talks to the simulator only through csn.h.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "csn/csn.h"

namespace {

int report(csn_status st, const std::string& what)
{
    if (st == CSN_OK) {
        return 0;
    }
    std::cerr << "csnsim: " << what << ": " << csn_last_error() << '\n';
    switch (st) {
    case CSN_ERR_CONFIG:
        return 2;
    case CSN_ERR_IO:
        return 3;
    case CSN_ERR_UNKNOWN_PRESET:
        return 4;
    default:
        return 1;
    }
}

unsigned jobs_from(int jobs)
{
    return jobs > 0 ? static_cast<unsigned>(jobs) : 0u;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Discrete-event simulator for storage-constrained sensor networks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(csn_version()));

    int jobs = 0;
    app.add_option("-j,--jobs", jobs, "worker threads (default: CSN_JOBS or hardware concurrency)")
        ->check(CLI::NonNegativeNumber);

    std::string run_config;
    std::string run_out = "out";
    auto* run = app.add_subcommand("run", "run every seed of a scenario and write CSVs");
    run->add_option("--config", run_config, "scenario file")->required();
    run->add_option("--out", run_out, "output directory")->capture_default_str();

    std::string preset_name;
    std::string preset_out;
    auto* preset = app.add_subcommand("preset", "run a named experiment preset");
    preset->add_option("name", preset_name, "preset name (see list-presets)")->required();
    preset->add_option("--out", preset_out, "output directory")->required();

    auto* list = app.add_subcommand("list-presets", "print preset names and descriptions");

    std::string validate_config;
    bool validate_print = false;
    auto* validate = app.add_subcommand("validate", "check a scenario file without running it");
    validate->add_option("--config", validate_config, "scenario file")->required();
    validate->add_flag("--print", validate_print, "print the resolved configuration");

    CLI11_PARSE(app, argc, argv);

    if (*run) {
        csn_scenario* sc = nullptr;
        if (const int rc = report(csn_scenario_load(run_config.c_str(), &sc), run_config)) {
            return rc;
        }
        const int rc = report(csn_run_scenario(sc, run_out.c_str(), jobs_from(jobs)), "run");
        const auto seeds = csn_scenario_seed_count(sc);
        csn_scenario_free(sc);
        if (rc == 0) {
            std::cout << "wrote " << seeds << " seed(s) to " << run_out << '\n';
        }
        return rc;
    }
    if (*preset) {
        const int rc = report(csn_run_preset(preset_name.c_str(), preset_out.c_str(), jobs_from(jobs)), preset_name);
        if (rc == 0) {
            std::cout << "wrote preset " << preset_name << " to " << preset_out << '\n';
        }
        return rc;
    }
    if (*list) {
        for (size_t i = 0; i < csn_preset_count(); ++i) {
            const char* name = csn_preset_name(i);
            std::printf("%-16s %2zu scenarios  %s\n", name, csn_preset_scenario_count(name), csn_preset_description(i));
        }
        return 0;
    }
    if (*validate) {
        csn_scenario* sc = nullptr;
        if (const int rc = report(csn_scenario_load(validate_config.c_str(), &sc), validate_config)) {
            return rc;
        }
        if (validate_print) {
            char* text = nullptr;
            if (csn_scenario_serialize(sc, &text) == CSN_OK) {
                std::cout << text;
                csn_string_free(text);
            }
        } else {
            std::cout << validate_config << ": ok\n";
        }
        csn_scenario_free(sc);
        return 0;
    }
    return 1;
}
