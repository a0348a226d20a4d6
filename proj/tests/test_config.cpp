#include <doctest.h>

#include <string>

#include "csn/config.hpp"
#include "csn/random.hpp"

using namespace csn;

namespace {

std::string key_of(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "";
}

}  // namespace

TEST_CASE("defaults match the reference setup")
{
    const ScenarioConfig c;
    CHECK(c.field.width == 350.0);
    CHECK(c.field.zone_side == 70.0);
    CHECK(c.radio_range == 100.0);
    CHECK(c.sim_time == 500.0);
    CHECK(c.round_length == 100.0);
    CHECK(c.sampling_period == 1.0);
    CHECK(c.aggregation.alpha == 0.5);
    CHECK(c.coordination.min_reduction == 0.2);
    CHECK(c.coordination.max_reduction == 0.4);
    CHECK(c.storage_bytes == 300 * c.sample_bytes);
    CHECK(c.energy.e_store == 5.5e-8);
    CHECK(c.energy.radio_multiplier == 40.0);
    CHECK(c.channel.jitter_window == 0.43);
    CHECK(c.seeds.size() == 5);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("parse a full file")
{
    const auto c = parse_config(R"(
# comment
[scenario]
name = demo
protocol = ccs
nodes = 150
sim_time = 200
round_length = 50
aggregation_period = 10
seeds = 4, 9
storage_bytes = 5000

[aggregation]
model = one_packet

[activity]
model = uneven
high_fraction = 0.4

[channel]
jitter_window = 0
interference = none

[energy]
store_j_per_byte = 1e-8
radio_multiplier = 10
rx_j_per_byte = 5e-8
)");
    CHECK(c.name == "demo");
    CHECK(c.protocol == ProtocolKind::CCS);
    CHECK(c.nodes == 150);
    CHECK(c.sim_time == 200.0);
    CHECK(c.effective_aggregation_period() == 10.0);
    CHECK(c.seeds == std::vector<std::uint64_t>{4, 9});
    CHECK(c.storage_bytes == 5000);
    CHECK(c.aggregation.kind == AggregationKind::OnePacket);
    CHECK(c.activity.model == ActivityModel::Uneven);
    CHECK(c.channel.interference_scope == InterferenceScope::None);
    CHECK(c.energy.e_radio_tx == doctest::Approx(1e-7));
    CHECK(c.energy.e_radio_rx == 5e-8);
}

TEST_CASE("rx cost follows tx cost unless given")
{
    const auto c = parse_config("[energy]\nstore_j_per_byte = 1e-8\nradio_multiplier = 10\n");
    CHECK(c.energy.e_radio_rx == c.energy.e_radio_tx);
}

TEST_CASE("biased zone counts")
{
    const auto c = parse_config("[scenario]\nzone_counts = 6:5, 8:4, 16:3, 18:2\n");
    REQUIRE(c.zone_counts.size() == 4);
    CHECK(c.zone_counts[0] == std::pair<ZoneId, std::uint32_t>{6, 5});
    CHECK(c.node_count() == 14);
}

TEST_CASE("errors name the offending key")
{
    CHECK(key_of("[scenario]\nprotocol = XYZ\n") == "scenario.protocol");
    CHECK(key_of("[scenario]\nnodes = -3\n") == "scenario.nodes");
    CHECK(key_of("[scenario]\nnodes = 0\n") == "scenario.nodes");
    CHECK(key_of("[scenario]\nbogus = 1\n") == "scenario.bogus");
    CHECK(key_of("[scenario]\nnodes = 5\nnodes = 6\n") == "scenario.nodes");
    CHECK(key_of("[nowhere]\n") == "nowhere");
    CHECK(key_of("[scenario]\nround_length = 70\n") == "scenario.round_length");
    CHECK(key_of("[scenario]\nzone_counts = 99:1\n") == "scenario.zone_counts");
    CHECK(key_of("[scenario]\nzone_counts = 3\n") == "scenario.zone_counts");
    CHECK(key_of("[scenario]\nseeds =\n") == "scenario.seeds");
    CHECK(key_of("[aggregation]\nalpha = 0\n") == "aggregation.alpha");
    CHECK(key_of("[aggregation]\nmodel = zip\n") == "aggregation.model");
    CHECK(key_of("[coordination]\nmin = 0.5\nmax = 0.4\n") == "coordination.min");
    CHECK(key_of("[channel]\njitter_window = -1\n") == "channel");
    CHECK(key_of("[channel]\nbandwidth = abc\n") == "channel.bandwidth");
    CHECK(key_of("[field]\nzone_side = 90\n") == "field");
    CHECK(key_of("nodes = 5\n") == "line 1");
    CHECK(key_of("[scenario]\njunk line\n") == "line 2");
}

TEST_CASE("missing file")
{
    CHECK_THROWS_AS(load_config("/nonexistent/cfg.ini"), ConfigError);
}

TEST_CASE("serialize and re-parse round-trips")
{
    ScenarioConfig c;
    CHECK(parse_config(serialize_config(c)) == c);

    auto rng = make_stream(17, Stream::Topology);
    const ProtocolKind kinds[] = {ProtocolKind::LS, ProtocolKind::CLS, ProtocolKind::CBCS, ProtocolKind::CCS};
    for (int i = 0; i < 50; ++i) {
        ScenarioConfig r;
        r.name = "r" + std::to_string(i);
        r.protocol = kinds[rng.below(4)];
        r.nodes = 1 + static_cast<std::uint32_t>(rng.below(200));
        r.round_length = 25.0 * static_cast<double>(1 + rng.below(4));
        r.sim_time = r.round_length * static_cast<double>(1 + rng.below(8));
        r.metric_tick = r.round_length / 5.0;
        r.sampling_period = rng.uniform(0.1, 3.0);
        r.aggregation.alpha = rng.uniform(0.01, 1.0);
        r.aggregation.kind = rng.bernoulli(0.5) ? AggregationKind::OnePacket : AggregationKind::ConstantRatio;
        r.coordination.min_reduction = rng.uniform(0.0, 0.3);
        r.coordination.max_reduction = r.coordination.min_reduction + rng.uniform(0.0, 0.3);
        r.channel.jitter_window = rng.uniform(0.0, 1.0);
        r.channel.bandwidth = rng.uniform(1000.0, 1e6);
        r.energy = EnergyModel::make(rng.uniform(1e-9, 1e-7), rng.uniform(1.0, 100.0));
        r.seeds = {rng.below(1000), rng.below(1000)};
        if (rng.bernoulli(0.3)) {
            r.zone_counts = {{static_cast<ZoneId>(rng.below(25)), 1 + static_cast<std::uint32_t>(rng.below(6))}};
        }
        REQUIRE_NOTHROW(r.validate());
        const auto text = serialize_config(r);
        CHECK(parse_config(text) == r);
        CHECK(serialize_config(parse_config(text)) == text);
    }
}

TEST_CASE("protocol helpers")
{
    CHECK(parse_protocol("cbcs") == ProtocolKind::CBCS);
    CHECK(to_string(ProtocolKind::CLS) == "CLS");
    CHECK(is_collaborative(ProtocolKind::CCS));
    CHECK_FALSE(is_collaborative(ProtocolKind::CLS));
    CHECK(is_coordinated(ProtocolKind::CLS));
    CHECK_FALSE(is_coordinated(ProtocolKind::CBCS));
}
