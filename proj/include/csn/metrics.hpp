#pragma once

// Coverage, depletion and collection metrics plus the CSV schemas they are
// exported in.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "csn/channel.hpp"
#include "csn/deployment.hpp"
#include "csn/types.hpp"

namespace csn {

/// What a coverage metric needs to know about one sensor at an instant.
struct NodeStatus {
    ZoneId zone = 0;
    bool generating = true;
    /// The node's current storing path (itself, or its cluster head) can
    /// accept another sample.
    bool can_store = true;
    /// The node's own flash cannot hold another sample.
    bool depleted = false;
};

/// Manifold thresholds reported per tick: any (> 0), 25%, 50%, 100%.
inline constexpr double kAnyThreshold = 0.0;

/// Fraction of non-empty zones in which at least one generating sensor can
/// still have its reading stored. Equals manifold_coverage at kAnyThreshold.
double binary_coverage(std::span<const Zone> zones, std::span<const NodeStatus> nodes);

/// Fraction of non-empty zones where the live share of members is at least
/// `threshold`. A threshold of 0 means "at least one live member".
double manifold_coverage(std::span<const Zone> zones, std::span<const NodeStatus> nodes, double threshold);

/// Fraction of non-empty zones whose members are all depleted.
double dead_zone_fraction(std::span<const Zone> zones, std::span<const NodeStatus> nodes);

/// Live share of a single zone (0 for an empty zone).
double zone_live_fraction(const Zone& zone, std::span<const NodeStatus> nodes);

struct CollectionResult {
    double mean_time_s = 0.0;
    double post_energy_j = 0.0;
    std::size_t holders = 0;
};

/// One-hop reach-back: each node with data sends it to the observer, polled
/// sequentially so nothing collides. Adds each node's transfer cost to its
/// energy_post.
CollectionResult run_collection(std::span<SensorNode> nodes, const ChannelConfig& channel,
                                const EnergyModel& energy);

struct TickRow {
    double t = 0.0;
    double mean_storage_bytes = 0.0;
    double depleted_frac = 0.0;
    double bincov = 0.0;
    double cov25 = 0.0;
    double cov50 = 0.0;
    double cov100 = 0.0;
    double deadzone_frac = 0.0;

    bool operator==(const TickRow&) const = default;
};

/// Byte and energy ledger for one run.
struct Ledger {
    Bytes generated = 0;
    Bytes suppressed = 0;       // removed by coordination before any handling
    Bytes collision_lost = 0;   // sample bytes in collided data packets
    Bytes lost_to_storage = 0;  // rejected by a full node
    Bytes stored_raw = 0;       // sample bytes that made it into storage, pre-aggregation
    Bytes stored = 0;           // bytes actually written to flash
    std::uint64_t data_packets = 0;       // sample-carrying transmissions offered to the channel
    std::uint64_t data_packets_lost = 0;  // of which collided
    Bytes radio_tx_bytes = 0;
    Bytes radio_rx_bytes = 0;
    double storage_j = 0.0;
    double radio_tx_j = 0.0;
    double radio_rx_j = 0.0;
    double idle_j = 0.0;

    double pre_energy() const { return storage_j + radio_tx_j + radio_rx_j + idle_j; }
    double radio_j() const { return radio_tx_j + radio_rx_j; }
    /// Collided share of data packets; control traffic is excluded.
    double data_loss_fraction() const
    {
        return data_packets == 0 ? 0.0 : static_cast<double>(data_packets_lost) / static_cast<double>(data_packets);
    }
    bool operator==(const Ledger&) const = default;
};

struct RunSummary {
    std::string protocol;
    std::uint32_t density = 0;
    std::string seed;
    double pre_energy_j = 0.0;
    double post_energy_j = 0.0;
    double loss_frac = 0.0;
    double mean_collection_s = 0.0;
    double mean_storage_final_bytes = 0.0;

    bool operator==(const RunSummary&) const = default;
};

struct MetricsLog {
    double tick_period = 10.0;
    std::vector<TickRow> ticks;
    /// zone_live[k][z]: live share of zone z at tick k.
    std::vector<std::vector<double>> zone_live;
    /// Time each node's own flash became full; negative if it never did.
    std::vector<double> depletion_time;
    RunSummary summary;
    Ledger ledger;
    double collection_holders = 0.0;

    bool operator==(const MetricsLog&) const = default;
};

/// Arithmetic mean per column per tick across runs of the same scenario.
MetricsLog average_logs(std::span<const MetricsLog> logs);

/// Mean node depletion time, counting never-depleted nodes at `horizon`.
double mean_depletion_time(const MetricsLog& log, double horizon);

inline constexpr const char* kTimeseriesHeader =
    "t,mean_storage_bytes,depleted_frac,bincov,cov25,cov50,cov100,deadzone_frac";
inline constexpr const char* kSummaryHeader =
    "protocol,density,seed,pre_energy_J,post_energy_J,loss_frac,mean_collection_s,mean_storage_final_bytes";

std::string format_number(double v);
void write_timeseries_csv(std::ostream& os, const MetricsLog& log);
void write_summary_row(std::ostream& os, const RunSummary& s);
void write_summary_csv(std::ostream& os, std::span<const RunSummary> rows);

}  // namespace csn
