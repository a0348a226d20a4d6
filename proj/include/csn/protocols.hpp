#pragma once

// The four storage-management protocols, run as one event-driven simulation:
//
//   LS    every sensor writes its own samples to local flash.
//   CLS   LS plus per-round all-to-all coordination inside each zone that
//         suppresses redundant samples at the source.
//   CBCS  per-zone cluster head (CH) elected each round by available
//         storage; members forward samples, the CH aggregates and stores.
//   CCS   CBCS plus the same source-side suppression as CLS.
//
// A round starts with an election phase (advertisements over the lossy
// channel). Samples taken before the election resolves, or by a node that
// ends up without a CH, are stored locally.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "csn/channel.hpp"
#include "csn/config.hpp"
#include "csn/deployment.hpp"
#include "csn/engine.hpp"
#include "csn/metrics.hpp"
#include "csn/random.hpp"

namespace csn {

struct Advertisement {
    NodeId node = 0;
    Bytes available = 0;
};

/// Argmax of advertised storage among the advertisements that were actually
/// delivered; ties go to the lowest node id. Empty input elects nobody.
std::optional<NodeId> elect_ch(std::span<const Advertisement> delivered);

/// Per-zone redundancy estimate: fraction of samples suppressed this round.
struct CoordinationState {
    double reduction = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Draws a fresh reduction uniformly from [min, max).
CoordinationState draw_coordination(const CoordinationConfig& cfg, Rng& rng);

struct RoundState {
    std::uint64_t round_index = 0;
    double round_length = 0.0;
    std::map<ZoneId, std::optional<NodeId>> ch_of_zone;
    std::map<ZoneId, std::vector<NodeId>> members_of;
};

class Simulation {
public:
    /// Builds the topology from the config and `seed`.
    Simulation(const ScenarioConfig& cfg, std::uint64_t seed);
    /// Uses a caller-supplied topology; node caps and sampling periods are
    /// overwritten from the config.
    Simulation(const ScenarioConfig& cfg, Topology topo, std::uint64_t seed);

    /// Storage phase, in-flight drain, final aggregation, then collection.
    MetricsLog run();

    /// Advances the storage phase to `t` seconds (<= sim_time). Repeated calls
    /// must be non-decreasing.
    void run_until(double t);

    void set_trace(std::function<void(const Event&)> trace) { trace_ = std::move(trace); }

    std::span<const SensorNode> nodes() const { return nodes_; }
    const ZoneGrid& grid() const { return grid_; }
    const Ledger& ledger() const { return ledger_; }
    const Channel& channel() const { return channel_; }
    const MetricsLog& log() const { return log_; }
    double now() const { return engine_.now().seconds(); }
    RoundState round_state() const;
    double zone_reduction(ZoneId z) const { return zones_.at(z).coord.reduction; }
    /// Rounds in which each node served as CH.
    const std::vector<std::vector<std::uint64_t>>& ch_history() const { return ch_history_; }
    /// Storage-path view of every node at the current instant.
    std::vector<NodeStatus> node_status() const;

private:
    struct Buffer {
        std::vector<DataSample> samples;
        double volume = 0.0;  // full-resolution bytes represented
        Bytes raw = 0;        // bytes actually received
    };

    struct ZoneRuntime {
        std::optional<NodeId> ch;
        bool electing = false;
        bool ch_full = false;
        SimTime ch_since;
        std::vector<Advertisement> delivered_ads;
        CoordinationState coord;
    };

    struct Packet {
        NodeId src = 0;
        NodeId dst = kBroadcast;
        ZoneId zone = 0;
        EventKind kind = EventKind::DataMsg;
        std::vector<DataSample> samples;
        double scale = 1.0;
        Bytes bytes = 0;
        Bytes advertised = 0;
        std::uint64_t tx = 0;
    };

    void init(std::uint64_t seed);
    void dispatch(const Event& ev);
    void on_sample(NodeId id);
    void on_batch_flush(NodeId id);
    void route(NodeId id, std::vector<DataSample> samples);
    void store_locally(NodeId id, std::span<const DataSample> samples);
    void on_round_start(std::uint64_t round);
    void close_round();
    void flush_buffer(NodeId id);
    Bytes aggregated_size(const Buffer& buf) const;
    void ch_accept(NodeId ch, const DataSample& s, double scale);
    void coordinate(ZoneId z);
    void start_election(ZoneId z, SimTime t0);
    void resolve_election(ZoneId z);
    void send_packet(Packet p, SimTime start);
    void on_tx_start(std::uint64_t packet_id);
    void on_tx_end(std::uint64_t packet_id);
    void mark_ch_full(ZoneId z);
    void charge_tx(NodeId id, Bytes bytes);
    void charge_rx(NodeId id, Bytes bytes);
    void charge_idle(ZoneId z, SimTime until);
    void note_store(NodeId id);
    void record_tick();
    bool can_store(const SensorNode& n) const;
    void finalize();

    ScenarioConfig cfg_;
    std::uint64_t seed_;
    std::vector<SensorNode> nodes_;
    ZoneGrid grid_;
    std::vector<ZoneRuntime> zones_;
    std::vector<Buffer> buffers_;
    std::vector<std::vector<DataSample>> batches_;
    std::vector<std::vector<std::uint64_t>> ch_history_;
    Engine engine_;
    Channel channel_;
    Rng jitter_rng_;
    Rng coord_rng_;
    Rng suppress_rng_;
    std::unordered_map<std::uint64_t, Packet> packets_;
    std::uint64_t next_packet_ = 1;
    std::uint64_t round_ = 0;
    SimTime sim_end_;
    SimTime drain_end_;
    Ledger ledger_;
    MetricsLog log_;
    bool finished_ = false;
    std::function<void(const Event&)> trace_;
};

}  // namespace csn
