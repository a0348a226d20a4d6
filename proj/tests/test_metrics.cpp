#include <doctest.h>

#include <sstream>
#include <vector>

#include "csn/deployment.hpp"
#include "csn/metrics.hpp"
#include "csn/protocols.hpp"

using namespace csn;

namespace {

// Two zones: zone 0 holds nodes 0-3, zone 1 holds nodes 4-5.
std::vector<Zone> two_zones()
{
    std::vector<Zone> z(2);
    z[0].id = 0;
    z[0].members = {0, 1, 2, 3};
    z[1].id = 1;
    z[1].members = {4, 5};
    return z;
}

std::vector<NodeStatus> all_live()
{
    std::vector<NodeStatus> s(6);
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i].zone = i < 4 ? 0 : 1;
    }
    return s;
}

void kill(std::vector<NodeStatus>& s, NodeId id)
{
    s[id].can_store = false;
    s[id].depleted = true;
}

}  // namespace

TEST_CASE("fresh network is fully covered")
{
    const auto z = two_zones();
    const auto s = all_live();
    CHECK(binary_coverage(z, s) == 1.0);
    for (const double th : {0.25, 0.5, 1.0}) {
        CHECK(manifold_coverage(z, s, th) == 1.0);
    }
    CHECK(dead_zone_fraction(z, s) == 0.0);
}

TEST_CASE("dead network has no coverage")
{
    const auto z = two_zones();
    auto s = all_live();
    for (NodeId i = 0; i < 6; ++i) {
        kill(s, i);
    }
    CHECK(binary_coverage(z, s) == 0.0);
    CHECK(manifold_coverage(z, s, 0.25) == 0.0);
    CHECK(dead_zone_fraction(z, s) == 1.0);
}

TEST_CASE("manifold thresholds are inclusive")
{
    const auto z = two_zones();
    auto s = all_live();
    kill(s, 0);
    kill(s, 1);
    kill(s, 2);
    // zone 0: 1 of 4 live
    CHECK(manifold_coverage(z, s, 0.25) == 1.0);
    CHECK(manifold_coverage(z, s, 0.5) == 0.5);
    CHECK(manifold_coverage(z, s, 1.0) == 0.5);
    CHECK(binary_coverage(z, s) == 1.0);
    CHECK(zone_live_fraction(z[0], s) == 0.25);
    CHECK(zone_live_fraction(z[1], s) == 1.0);
    CHECK_THROWS_AS(manifold_coverage(z, s, 1.5), std::invalid_argument);
}

TEST_CASE("a node whose path is blocked is not live but not depleted")
{
    const auto z = two_zones();
    auto s = all_live();
    s[4].can_store = false;
    s[5].can_store = false;
    CHECK(binary_coverage(z, s) == 0.5);
    CHECK(dead_zone_fraction(z, s) == 0.0);
}

TEST_CASE("empty zones are ignored")
{
    auto z = two_zones();
    z.push_back(Zone{2, {}, {}, Activity::Low});
    const auto s = all_live();
    CHECK(binary_coverage(z, s) == 1.0);
    CHECK(zone_live_fraction(z[2], s) == 0.0);
}

TEST_CASE("collection time and energy")
{
    const ChannelConfig ch;
    const auto e = EnergyModel::make(5.5e-8, 40.0);
    std::vector<SensorNode> one(1);
    one[0].storage_cap = 2'000'000;
    one[0].storage_used = 1'000'000;
    const auto r = run_collection(one, ch, e);
    CHECK(r.mean_time_s == doctest::Approx(32.0));
    CHECK(r.post_energy_j == doctest::Approx(2.2));
    CHECK(one[0].energy_post == doctest::Approx(2.2));
    CHECK(r.holders == 1);

    std::vector<SensorNode> empty(3);
    const auto v = run_collection(empty, ch, e);
    CHECK(v.mean_time_s == 0.0);
    CHECK(v.post_energy_j == 0.0);
    CHECK(v.holders == 0);
}

TEST_CASE("collection averages over nodes holding data")
{
    std::vector<SensorNode> nodes(3);
    nodes[0].storage_used = 31250;
    nodes[1].storage_used = 93750;
    const auto r = run_collection(nodes, ChannelConfig{}, EnergyModel::make(5.5e-8, 40.0));
    CHECK(r.mean_time_s == doctest::Approx(2.0));
    CHECK(r.holders == 2);
}

TEST_CASE("local storage depletes at S / (D * rate)")
{
    ScenarioConfig c;
    c.protocol = ProtocolKind::LS;
    c.nodes = 20;
    c.sim_time = 400;
    c.sample_bytes = 100;
    c.storage_bytes = 300 * 100;
    c.metric_tick = 1;
    c.seeds = {1};
    Simulation sim(c, 1);
    const auto log = sim.run();
    REQUIRE(log.ticks.size() == 401);
    CHECK(log.ticks[299].bincov == 1.0);
    CHECK(log.ticks[299].depleted_frac == 0.0);
    CHECK(log.ticks[300].depleted_frac == 1.0);
    CHECK(log.ticks[301].bincov == 0.0);
    CHECK(log.ticks[301].deadzone_frac == 1.0);
    CHECK(log.ticks[100].mean_storage_bytes == 100 * 100);
}

TEST_CASE("fractions stay in range and depletion never recedes")
{
    ScenarioConfig c;
    c.protocol = ProtocolKind::CBCS;
    c.nodes = 60;
    c.sim_time = 500;
    c.aggregation_period = 10;
    c.activity.model = ActivityModel::Uneven;
    c.seeds = {2};
    Simulation sim(c, 2);
    const auto log = sim.run();
    for (std::size_t i = 0; i < log.ticks.size(); ++i) {
        const auto& r = log.ticks[i];
        for (const double f : {r.depleted_frac, r.bincov, r.cov25, r.cov50, r.cov100, r.deadzone_frac}) {
            CHECK(f >= 0.0);
            CHECK(f <= 1.0);
        }
        if (i > 0) {
            CHECK(r.depleted_frac >= log.ticks[i - 1].depleted_frac);
            CHECK(r.deadzone_frac >= log.ticks[i - 1].deadzone_frac);
        }
    }
}

TEST_CASE("averaging is a per-column arithmetic mean")
{
    MetricsLog a;
    MetricsLog b;
    a.ticks = {{0, 10, 0, 1, 1, 1, 1, 0}, {10, 20, 0.5, 0.5, 0.5, 0.5, 0, 0.5}};
    b.ticks = {{0, 30, 0, 1, 1, 1, 1, 0}, {10, 40, 1.0, 0.0, 0.0, 0.0, 0, 1.0}};
    a.summary = {"CBCS", 50, "1", 1.0, 2.0, 0.1, 3.0, 100.0};
    b.summary = {"CBCS", 50, "2", 3.0, 4.0, 0.3, 5.0, 300.0};
    const MetricsLog logs[] = {a, b};
    const auto m = average_logs(logs);
    CHECK(m.ticks[0].mean_storage_bytes == 20);
    CHECK(m.ticks[1].depleted_frac == 0.75);
    CHECK(m.ticks[1].bincov == 0.25);
    CHECK(m.summary.seed == "mean");
    CHECK(m.summary.pre_energy_j == 2.0);
    CHECK(m.summary.loss_frac == doctest::Approx(0.2));
    CHECK(m.summary.mean_storage_final_bytes == 200.0);

    MetricsLog short_log;
    const MetricsLog bad[] = {a, short_log};
    CHECK_THROWS_AS(average_logs(bad), std::invalid_argument);
}

TEST_CASE("mean depletion time counts survivors at the horizon")
{
    MetricsLog log;
    log.depletion_time = {100.0, -1.0, 300.0, -1.0};
    CHECK(mean_depletion_time(log, 500.0) == doctest::Approx((100 + 500 + 300 + 500) / 4.0));
}

TEST_CASE("csv layout")
{
    MetricsLog log;
    log.ticks = {{0, 0, 0, 1, 1, 1, 1, 0}, {10, 1234.5, 0.25, 0.75, 0.5, 0.25, 0, 0.125}};
    std::ostringstream ts;
    write_timeseries_csv(ts, log);
    CHECK(ts.str() ==
          "t,mean_storage_bytes,depleted_frac,bincov,cov25,cov50,cov100,deadzone_frac\n"
          "0,0,0,1,1,1,1,0\n"
          "10,1234.5,0.25,0.75,0.5,0.25,0,0.125\n");

    const RunSummary rows[] = {{"LS", 100, "3", 0.275, 11.0, 0.0, 1.6, 50000.0}};
    std::ostringstream sm;
    write_summary_csv(sm, rows);
    CHECK(sm.str() ==
          "protocol,density,seed,pre_energy_J,post_energy_J,loss_frac,mean_collection_s,mean_storage_final_bytes\n"
          "LS,100,3,0.275,11,0,1.6,50000\n");
}
