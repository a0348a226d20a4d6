#pragma once

// Scenario configuration and its text format.
//
// The format is INI-like: `[section]` headers followed by `key = value`
// lines; `#` starts a comment. Unknown sections or keys are errors. See
// README.md for the full key list.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csn/channel.hpp"
#include "csn/deployment.hpp"
#include "csn/types.hpp"

namespace csn {

enum class ProtocolKind { LS, CLS, CBCS, CCS };

std::string to_string(ProtocolKind p);
ProtocolKind parse_protocol(std::string_view s);

inline bool is_collaborative(ProtocolKind p) { return p == ProtocolKind::CBCS || p == ProtocolKind::CCS; }
inline bool is_coordinated(ProtocolKind p) { return p == ProtocolKind::CLS || p == ProtocolKind::CCS; }

/// Thrown for invalid configuration; `key()` names the offending
/// `section.key`.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key + ": " + what), key_(std::move(key))
    {
    }
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct CoordinationConfig {
    double min_reduction = 0.2;
    double max_reduction = 0.4;
    Bytes meta_bytes = 64;

    bool operator==(const CoordinationConfig&) const = default;
};

enum class ActivityModel { Even, Uneven };

struct ActivityConfig {
    ActivityModel model = ActivityModel::Even;
    double high_fraction = 0.5;
    double multiplier = 2.0;

    bool operator==(const ActivityConfig&) const = default;
};

struct ScenarioConfig {
    std::string name = "scenario";
    ProtocolKind protocol = ProtocolKind::CBCS;
    std::uint32_t nodes = 100;
    /// Non-empty selects a biased deployment and overrides `nodes`.
    std::vector<std::pair<ZoneId, std::uint32_t>> zone_counts;
    FieldSpec field;
    double radio_range = 100.0;
    double sim_time = 500.0;
    double round_length = 100.0;
    double sampling_period = 1.0;
    /// CH flush interval within a round; 0 means once per round.
    double aggregation_period = 0.0;
    /// Member-to-CH batching interval; 0 sends every sample as it is taken.
    double batch_period = 0.0;
    Bytes sample_bytes = 100;
    Bytes storage_bytes = 30000;
    double metric_tick = 10.0;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    AggregationModel aggregation;
    CoordinationConfig coordination;
    ActivityConfig activity;
    ChannelConfig channel;
    Bytes ad_bytes = 32;
    EnergyModel energy;

    std::uint32_t node_count() const;
    double effective_aggregation_period() const;

    /// Throws ConfigError naming the first offending key.
    void validate() const;
    bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);
std::string serialize_config(const ScenarioConfig& cfg);

}  // namespace csn
