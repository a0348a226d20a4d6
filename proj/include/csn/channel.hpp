#pragma once

// Unreliable single-hop contention channel. No carrier sense, no ACKs:
// overlapping transmissions inside one zone destroy each other.

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "csn/random.hpp"
#include "csn/types.hpp"

namespace csn {

enum class InterferenceScope { Zone, None };

struct ChannelConfig {
    double bandwidth = 31250.0;   // bytes/s
    double jitter_window = 0.43;  // s, calibrated against uniform CBCS loss at 50 and 150 nodes
    InterferenceScope interference_scope = InterferenceScope::Zone;

    void validate() const;
    bool operator==(const ChannelConfig&) const = default;
};

struct Transmission {
    NodeId src = 0;
    NodeId dst = kBroadcast;
    ZoneId zone = 0;
    SimTime start;
    SimTime duration;
    Bytes bytes = 0;

    SimTime end() const { return start + duration; }
};

enum class TxOutcome { Delivered, Collided };

/// Airtime for `bytes`, rounded up to whole microseconds (at least 1 us for
/// non-empty packets).
SimTime airtime(Bytes bytes, const ChannelConfig& cfg);

/// nominal + U[0, window).
SimTime jittered_start(SimTime nominal, double window, Rng& rng);

/// Batch form of the collision rule: a transmission is delivered iff no other
/// transmission in its zone overlaps [start, end).
std::vector<TxOutcome> resolve_collisions(std::span<const Transmission> txs, InterferenceScope scope);

struct ChannelCounters {
    std::uint64_t offered_packets = 0;
    std::uint64_t collided_packets = 0;
    Bytes offered_bytes = 0;
    Bytes delivered_bytes = 0;
    Bytes collided_bytes = 0;
};

/// Incremental form used by the simulator: `begin` at the start instant,
/// `finish` once the transmission's end has passed.
class Channel {
public:
    Channel(ChannelConfig cfg, std::vector<ZoneId> node_zone, std::size_t zone_count);

    /// Registers a transmission. Unicast to a node in another zone throws
    /// std::logic_error.
    std::uint64_t begin(const Transmission& tx);
    TxOutcome finish(std::uint64_t id);
    const Transmission& get(std::uint64_t id) const { return active_.at(id).tx; }

    const ChannelConfig& config() const { return cfg_; }
    const ChannelCounters& totals() const { return totals_; }
    const ChannelCounters& zone_totals(ZoneId z) const { return per_zone_.at(z); }
    double loss_fraction() const;
    std::size_t in_flight() const { return active_.size(); }

private:
    struct Active {
        Transmission tx;
        bool collided = false;
    };

    ChannelConfig cfg_;
    std::vector<ZoneId> node_zone_;
    std::vector<std::vector<std::uint64_t>> zone_active_;
    std::unordered_map<std::uint64_t, Active> active_;
    std::uint64_t next_id_ = 1;
    ChannelCounters totals_;
    std::vector<ChannelCounters> per_zone_;
};

}  // namespace csn
