#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <string>

#include "csn/csn.h"

namespace fs = std::filesystem;

namespace {

const char* kSmall = "[scenario]\nname = capi\nprotocol = CBCS\nnodes = 40\nsim_time = 100\nround_length = 50\nseeds = 1,2\n";

struct Scenario {
    csn_scenario* p = nullptr;
    ~Scenario() { csn_scenario_free(p); }
};

struct Result {
    csn_result* p = nullptr;
    ~Result() { csn_result_free(p); }
};

}  // namespace

TEST_CASE("version string")
{
    CHECK(std::strlen(csn_version()) > 0);
}

TEST_CASE("parse errors carry a status and a message naming the key")
{
    Scenario s;
    CHECK(csn_scenario_parse("[scenario]\nnodes = many\n", &s.p) == CSN_ERR_CONFIG);
    CHECK(s.p == nullptr);
    CHECK(std::string(csn_last_error()).find("scenario.nodes") != std::string::npos);
    CHECK(csn_scenario_parse(nullptr, &s.p) == CSN_ERR_ARGUMENT);
    CHECK(csn_scenario_load("/definitely/missing.ini", &s.p) == CSN_ERR_IO);
}

TEST_CASE("serialize round-trips through the C layer")
{
    Scenario a;
    REQUIRE(csn_scenario_parse(kSmall, &a.p) == CSN_OK);
    CHECK(csn_scenario_seed_count(a.p) == 2);
    char* text = nullptr;
    REQUIRE(csn_scenario_serialize(a.p, &text) == CSN_OK);
    Scenario b;
    REQUIRE(csn_scenario_parse(text, &b.p) == CSN_OK);
    char* again = nullptr;
    REQUIRE(csn_scenario_serialize(b.p, &again) == CSN_OK);
    CHECK(std::string(text) == std::string(again));
    csn_string_free(text);
    csn_string_free(again);
}

TEST_CASE("simulate one seed and read results")
{
    Scenario s;
    REQUIRE(csn_scenario_parse(kSmall, &s.p) == CSN_OK);
    Result r;
    REQUIRE(csn_simulate(s.p, 1, &r.p) == CSN_OK);

    csn_summary sum{};
    REQUIRE(csn_result_summary(r.p, &sum) == CSN_OK);
    CHECK(sum.density == 40);
    CHECK(sum.pre_energy_j > 0.0);
    CHECK(sum.loss_frac >= 0.0);

    csn_ledger l{};
    REQUIRE(csn_result_ledger(r.p, &l) == CSN_OK);
    CHECK(l.generated == 40u * 100u * 100u);
    CHECK(l.generated == l.stored_raw + l.suppressed + l.collision_lost + l.lost_to_storage);

    REQUIRE(csn_result_tick_count(r.p) == 11);
    csn_tick t{};
    REQUIRE(csn_result_tick(r.p, 10, &t) == CSN_OK);
    CHECK(t.t == 100.0);
    CHECK(csn_result_tick(r.p, 11, &t) == CSN_ERR_ARGUMENT);

    char* csv = nullptr;
    REQUIRE(csn_result_timeseries_csv(r.p, &csv) == CSN_OK);
    CHECK(std::string(csv).rfind("t,mean_storage_bytes,", 0) == 0);
    csn_string_free(csv);

    Result again;
    REQUIRE(csn_simulate(s.p, 1, &again.p) == CSN_OK);
    csn_summary sum2{};
    csn_result_summary(again.p, &sum2);
    CHECK(sum2.pre_energy_j == sum.pre_energy_j);
    CHECK(sum2.mean_storage_final_bytes == sum.mean_storage_final_bytes);
}

TEST_CASE("run a scenario to disk")
{
    const auto dir = fs::temp_directory_path() / "csn_capi_run";
    fs::remove_all(dir);
    Scenario s;
    REQUIRE(csn_scenario_parse(kSmall, &s.p) == CSN_OK);
    REQUIRE(csn_run_scenario(s.p, dir.c_str(), 2) == CSN_OK);
    CHECK(fs::exists(dir / "capi_seed1.csv"));
    CHECK(fs::exists(dir / "capi_seed2.csv"));
    CHECK(fs::exists(dir / "capi_mean.csv"));
    CHECK(fs::exists(dir / "capi_summary.csv"));
    fs::remove_all(dir);
}

TEST_CASE("presets")
{
    CHECK(csn_preset_count() == 7);
    CHECK(std::string(csn_preset_name(0)) == "fig1_storage");
    CHECK(csn_preset_name(7) == nullptr);
    CHECK(csn_preset_scenario_count("fig1_storage") == 12);
    CHECK(csn_preset_scenario_count("nope") == 0);
    CHECK(std::strlen(csn_preset_description(6)) > 0);
    CHECK(csn_run_preset("nope", "/tmp", 1) == CSN_ERR_UNKNOWN_PRESET);

    Scenario s;
    REQUIRE(csn_scenario_from_preset("fig7_biased", 1, &s.p) == CSN_OK);
    char* text = nullptr;
    REQUIRE(csn_scenario_serialize(s.p, &text) == CSN_OK);
    CHECK(std::string(text).find("model = one_packet") != std::string::npos);
    csn_string_free(text);
    Scenario t;
    CHECK(csn_scenario_from_preset("fig7_biased", 2, &t.p) == CSN_ERR_ARGUMENT);
}

TEST_CASE("null handles are rejected")
{
    csn_summary sum{};
    CHECK(csn_result_summary(nullptr, &sum) == CSN_ERR_ARGUMENT);
    CHECK(csn_result_tick_count(nullptr) == 0);
    CHECK(csn_simulate(nullptr, 1, nullptr) == CSN_ERR_ARGUMENT);
    csn_scenario_free(nullptr);
    csn_result_free(nullptr);
    csn_string_free(nullptr);
}
