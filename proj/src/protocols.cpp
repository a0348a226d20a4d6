#include "csn/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "csn/aggregation.hpp"

namespace csn {

namespace {

enum : std::uint8_t {
    kSampleTake = 0,
    kSampleBatchFlush = 1,
};

enum : std::uint8_t {
    kRoundBegin = 0,
    kRoundFlush = 1,
};

enum : std::uint8_t {
    kTxStart = 0,
    kTxEnd = 1,
    kElectionResolve = 2,
};

Topology build_topology(const ScenarioConfig& cfg, std::uint64_t seed)
{
    cfg.validate();
    NodeDefaults d;
    d.storage_cap = cfg.storage_bytes;
    d.sampling_period = SimTime::from_seconds(cfg.sampling_period);
    d.radio_range = cfg.radio_range;
    if (cfg.zone_counts.empty()) {
        return generate_uniform(cfg.nodes, cfg.field, seed, d);
    }
    return generate_biased(cfg.zone_counts, cfg.field, seed, d);
}

std::vector<ZoneId> zones_of(const std::vector<SensorNode>& nodes)
{
    std::vector<ZoneId> out;
    out.reserve(nodes.size());
    for (const auto& n : nodes) {
        out.push_back(n.zone);
    }
    return out;
}

}  // namespace

std::optional<NodeId> elect_ch(std::span<const Advertisement> delivered)
{
    std::optional<Advertisement> best;
    for (const auto& ad : delivered) {
        if (!best || ad.available > best->available ||
            (ad.available == best->available && ad.node < best->node)) {
            best = ad;
        }
    }
    if (!best) {
        return std::nullopt;
    }
    return best->node;
}

CoordinationState draw_coordination(const CoordinationConfig& cfg, Rng& rng)
{
    CoordinationState s;
    s.min = cfg.min_reduction;
    s.max = cfg.max_reduction;
    s.reduction = cfg.min_reduction == cfg.max_reduction ? cfg.min_reduction
                                                         : rng.uniform(cfg.min_reduction, cfg.max_reduction);
    return s;
}

Simulation::Simulation(const ScenarioConfig& cfg, std::uint64_t seed)
    : Simulation(cfg, build_topology(cfg, seed), seed)
{
}

Simulation::Simulation(const ScenarioConfig& cfg, Topology topo, std::uint64_t seed)
    : cfg_(cfg),
      seed_(seed),
      nodes_(std::move(topo.nodes)),
      grid_(std::move(topo.grid)),
      engine_(SimTime::from_seconds(cfg.sim_time)),
      channel_(cfg.channel, zones_of(nodes_), grid_.size()),
      jitter_rng_(make_stream(seed, Stream::Jitter)),
      coord_rng_(make_stream(seed, Stream::Coordination)),
      suppress_rng_(make_stream(seed, Stream::Suppression))
{
    cfg_.validate();
    init(seed);
}

void Simulation::init(std::uint64_t seed)
{
    sim_end_ = SimTime::from_seconds(cfg_.sim_time);
    // in-flight packets from the last samples still complete after sim_time
    Bytes largest = std::max(cfg_.sample_bytes, cfg_.ad_bytes);
    if (cfg_.batch_period > 0.0) {
        const double fastest = cfg_.sampling_period / cfg_.activity.multiplier;
        largest = std::max<Bytes>(largest, cfg_.sample_bytes *
                                               static_cast<Bytes>(std::ceil(cfg_.batch_period / fastest) + 1.0));
    }
    drain_end_ = sim_end_ + SimTime::from_seconds(cfg_.channel.jitter_window + 1.0) + airtime(largest, cfg_.channel);

    if (cfg_.activity.model == ActivityModel::Uneven) {
        grid_ = assign_activity(std::move(grid_), cfg_.activity.high_fraction, seed);
    }
    const auto base = SimTime::from_seconds(cfg_.sampling_period);
    const auto fast = SimTime::from_seconds(cfg_.sampling_period / cfg_.activity.multiplier);
    for (auto& n : nodes_) {
        if (n.zone >= grid_.size() || grid_.zone_of(n.pos) != n.zone) {
            throw std::invalid_argument("node " + std::to_string(n.id) + " lies outside its zone");
        }
        n.storage_cap = cfg_.storage_bytes;
        n.storage_used = 0;
        n.energy_pre = 0.0;
        n.energy_post = 0.0;
        n.role = Role::Unclustered;
        n.radio_range = cfg_.radio_range;
        n.sampling_period = grid_.zone(n.zone).activity == Activity::High ? fast : base;
    }
    zones_.assign(grid_.size(), ZoneRuntime{});
    buffers_.assign(nodes_.size(), Buffer{});
    batches_.assign(nodes_.size(), {});
    ch_history_.assign(nodes_.size(), {});
    log_.tick_period = cfg_.metric_tick;
    log_.depletion_time.assign(nodes_.size(), -1.0);
    log_.summary.protocol = to_string(cfg_.protocol);
    log_.summary.density = static_cast<std::uint32_t>(nodes_.size());
    log_.summary.seed = std::to_string(seed);

    // Ticks go in first so that, at equal times, a tick observes the state
    // left by all strictly earlier events.
    const auto tick = SimTime::from_seconds(cfg_.metric_tick);
    for (SimTime t; t <= sim_end_; t = t + tick) {
        engine_.schedule(t, EventKind::MetricTick);
    }
    if (is_collaborative(cfg_.protocol) || is_coordinated(cfg_.protocol)) {
        const auto round = SimTime::from_seconds(cfg_.round_length);
        const auto flush = SimTime::from_seconds(cfg_.effective_aggregation_period());
        std::uint64_t r = 0;
        for (SimTime t; t < sim_end_; t = t + round, ++r) {
            engine_.schedule(t, EventKind::RoundStart, {0, 0, r, kRoundBegin});
            if (is_collaborative(cfg_.protocol)) {
                for (SimTime f = t + flush; f < t + round && f < sim_end_; f = f + flush) {
                    engine_.schedule(f, EventKind::RoundStart, {0, 0, r, kRoundFlush});
                }
            }
        }
    }
    for (const auto& n : nodes_) {
        engine_.schedule(SimTime{}, EventKind::Sample, {n.id, n.zone, 0, kSampleTake});
        if (is_collaborative(cfg_.protocol) && cfg_.batch_period > 0.0) {
            engine_.schedule(SimTime::from_seconds(cfg_.batch_period), EventKind::Sample,
                             {n.id, n.zone, 0, kSampleBatchFlush});
        }
    }
}

void Simulation::dispatch(const Event& ev)
{
    if (trace_) {
        trace_(ev);
    }
    switch (ev.kind) {
    case EventKind::MetricTick:
        record_tick();
        break;
    case EventKind::RoundStart:
        if (ev.payload.phase == kRoundBegin) {
            on_round_start(ev.payload.ref);
        } else {
            for (NodeId id = 0; id < nodes_.size(); ++id) {
                flush_buffer(id);
            }
        }
        break;
    case EventKind::Sample:
        if (ev.payload.phase == kSampleTake) {
            on_sample(ev.payload.node);
        } else {
            on_batch_flush(ev.payload.node);
        }
        break;
    case EventKind::ElectionMsg:
    case EventKind::DataMsg:
    case EventKind::CoordMsg:
        if (ev.payload.phase == kTxStart) {
            on_tx_start(ev.payload.ref);
        } else if (ev.payload.phase == kTxEnd) {
            on_tx_end(ev.payload.ref);
        } else {
            resolve_election(ev.payload.zone);
        }
        break;
    case EventKind::CollectionStart:
        break;
    }
}

void Simulation::run_until(double t)
{
    const auto until = SimTime::from_seconds(t);
    if (until > sim_end_) {
        throw std::invalid_argument("run_until beyond sim_time");
    }
    engine_.run(until, [this](const Event& ev) { dispatch(ev); });
}

MetricsLog Simulation::run()
{
    if (!finished_) {
        run_until(cfg_.sim_time);
        finalize();
        finished_ = true;
    }
    return log_;
}

void Simulation::finalize()
{
    engine_.extend_end(drain_end_);
    engine_.run(drain_end_, [this](const Event& ev) { dispatch(ev); });
    if (channel_.in_flight() != 0) {
        throw std::logic_error("transmissions still in flight after drain");
    }
    for (NodeId id = 0; id < nodes_.size(); ++id) {
        if (!batches_[id].empty()) {
            store_locally(id, batches_[id]);
            batches_[id].clear();
        }
    }
    close_round();
    for (ZoneId z = 0; z < zones_.size(); ++z) {
        charge_idle(z, sim_end_);
    }

    auto collection = run_collection(nodes_, cfg_.channel, cfg_.energy);
    Bytes total = 0;
    for (const auto& n : nodes_) {
        total += n.storage_used;
    }
    log_.ledger = ledger_;
    log_.collection_holders = static_cast<double>(collection.holders);
    auto& s = log_.summary;
    s.pre_energy_j = ledger_.pre_energy();
    s.post_energy_j = collection.post_energy_j;
    s.loss_frac = ledger_.data_loss_fraction();
    s.mean_collection_s = collection.mean_time_s;
    s.mean_storage_final_bytes = static_cast<double>(total) / static_cast<double>(nodes_.size());
}

void Simulation::on_sample(NodeId id)
{
    auto& n = nodes_[id];
    const auto now = engine_.now();
    const auto next = now + n.sampling_period;
    if (next < sim_end_) {
        engine_.schedule(next, EventKind::Sample, {id, n.zone, 0, kSampleTake});
    }

    const DataSample s{id, n.zone, now, cfg_.sample_bytes};
    ledger_.generated += s.size;
    if (is_coordinated(cfg_.protocol) && suppress_rng_.bernoulli(zones_[n.zone].coord.reduction)) {
        ledger_.suppressed += s.size;
        return;
    }
    if (!is_collaborative(cfg_.protocol)) {
        store_locally(id, {&s, 1});
        return;
    }
    if (cfg_.batch_period > 0.0) {
        batches_[id].push_back(s);
        return;
    }
    route(id, {s});
}

void Simulation::on_batch_flush(NodeId id)
{
    const auto next = engine_.now() + SimTime::from_seconds(cfg_.batch_period);
    if (next <= sim_end_) {
        engine_.schedule(next, EventKind::Sample, {id, nodes_[id].zone, 0, kSampleBatchFlush});
    }
    if (batches_[id].empty()) {
        return;
    }
    auto batch = std::move(batches_[id]);
    batches_[id].clear();
    route(id, std::move(batch));
}

void Simulation::route(NodeId id, std::vector<DataSample> samples)
{
    const auto& n = nodes_[id];
    const auto& zone = zones_[n.zone];
    if (zone.electing || !zone.ch || zone.ch_full || n.role == Role::Unclustered) {
        store_locally(id, samples);
        return;
    }
    const double scale = cfg_.protocol == ProtocolKind::CCS ? 1.0 / (1.0 - zone.coord.reduction) : 1.0;
    if (*zone.ch == id) {
        for (const auto& s : samples) {
            ch_accept(id, s, scale);
        }
        return;
    }
    Packet p;
    p.src = id;
    p.dst = *zone.ch;
    p.zone = n.zone;
    p.kind = EventKind::DataMsg;
    p.scale = scale;
    for (const auto& s : samples) {
        p.bytes += s.size;
    }
    p.samples = std::move(samples);
    send_packet(std::move(p), jittered_start(engine_.now(), cfg_.channel.jitter_window, jitter_rng_));
}

void Simulation::store_locally(NodeId id, std::span<const DataSample> samples)
{
    auto& n = nodes_[id];
    for (const auto& s : samples) {
        if (try_store(n, s.size, cfg_.energy) == StoreResult::Stored) {
            ledger_.stored_raw += s.size;
            ledger_.stored += s.size;
            ledger_.storage_j += storage_energy(s.size, cfg_.energy);
            note_store(id);
        } else {
            ledger_.lost_to_storage += s.size;
        }
    }
}

void Simulation::note_store(NodeId id)
{
    const auto& n = nodes_[id];
    if (n.storage_free() < cfg_.sample_bytes && log_.depletion_time[id] < 0.0) {
        log_.depletion_time[id] = engine_.now().seconds();
    }
}

void Simulation::on_round_start(std::uint64_t round)
{
    close_round();
    round_ = round;
    const auto t0 = engine_.now();
    for (ZoneId z = 0; z < zones_.size(); ++z) {
        if (grid_.zone(z).members.empty()) {
            continue;
        }
        if (is_coordinated(cfg_.protocol)) {
            coordinate(z);
        }
        if (is_collaborative(cfg_.protocol)) {
            start_election(z, t0);
        }
    }
}

void Simulation::close_round()
{
    for (NodeId id = 0; id < nodes_.size(); ++id) {
        flush_buffer(id);
    }
    const auto now = engine_.now() < sim_end_ ? engine_.now() : sim_end_;
    for (ZoneId z = 0; z < zones_.size(); ++z) {
        charge_idle(z, now);
        zones_[z].ch.reset();
        zones_[z].ch_full = false;
    }
    for (auto& n : nodes_) {
        n.role = Role::Unclustered;
    }
}

void Simulation::flush_buffer(NodeId id)
{
    auto& buf = buffers_[id];
    if (buf.samples.empty()) {
        return;
    }
    const Bytes out = aggregated_size(buf);
    auto& n = nodes_[id];
    if (try_store(n, out, cfg_.energy) == StoreResult::Stored) {
        ledger_.stored_raw += buf.raw;
        ledger_.stored += out;
        ledger_.storage_j += storage_energy(out, cfg_.energy);
        note_store(id);
        if (n.storage_free() < cfg_.sample_bytes && zones_[n.zone].ch == id) {
            mark_ch_full(n.zone);
        }
    } else {
        ledger_.lost_to_storage += buf.raw;
        if (zones_[n.zone].ch == id) {
            mark_ch_full(n.zone);
        }
    }
    buf = Buffer{};
}

void Simulation::mark_ch_full(ZoneId z)
{
    auto& zone = zones_[z];
    if (zone.ch_full || !zone.ch) {
        return;
    }
    zone.ch_full = true;
    // the CH tells its members to fall back to local storage; the CH radio is
    // on for its tenure and members listen for this one notice
    charge_tx(*zone.ch, cfg_.ad_bytes);
    for (const auto m : grid_.zone(z).members) {
        if (m != *zone.ch) {
            charge_rx(m, cfg_.ad_bytes);
        }
    }
    nodes_[*zone.ch].role = Role::Unclustered;
    for (const auto m : grid_.zone(z).members) {
        nodes_[m].role = Role::Unclustered;
    }
}

void Simulation::coordinate(ZoneId z)
{
    const auto& members = grid_.zone(z).members;
    const Bytes meta = cfg_.coordination.meta_bytes;
    for (const auto m : members) {
        charge_tx(m, meta);
        charge_rx(m, meta * (members.size() - 1));
    }
    zones_[z].coord = draw_coordination(cfg_.coordination, coord_rng_);
}

void Simulation::start_election(ZoneId z, SimTime t0)
{
    auto& zone = zones_[z];
    zone.electing = true;
    zone.delivered_ads.clear();
    for (const auto m : grid_.zone(z).members) {
        Packet p;
        p.src = m;
        p.dst = kBroadcast;
        p.zone = z;
        p.kind = EventKind::ElectionMsg;
        p.bytes = cfg_.ad_bytes;
        p.advertised = nodes_[m].storage_free();
        send_packet(std::move(p), jittered_start(t0, cfg_.channel.jitter_window, jitter_rng_));
    }
    // one microsecond past the last possible advertisement end
    const auto window_us = static_cast<std::int64_t>(std::llround(cfg_.channel.jitter_window * 1e6));
    const auto resolve = t0 + SimTime::from_micros(window_us) + airtime(cfg_.ad_bytes, cfg_.channel) +
                         SimTime::from_micros(1);
    engine_.schedule(resolve, EventKind::ElectionMsg, {0, z, 0, kElectionResolve});
}

void Simulation::resolve_election(ZoneId z)
{
    auto& zone = zones_[z];
    zone.electing = false;
    zone.ch = elect_ch(zone.delivered_ads);
    zone.ch_full = false;
    zone.ch_since = engine_.now();
    if (!zone.ch) {
        return;
    }
    ch_history_[*zone.ch].push_back(round_);
    for (const auto m : grid_.zone(z).members) {
        nodes_[m].role = m == *zone.ch ? Role::ClusterHead : Role::Member;
    }
    if (nodes_[*zone.ch].storage_free() < cfg_.sample_bytes) {
        mark_ch_full(z);
    }
}

void Simulation::send_packet(Packet p, SimTime start)
{
    const auto id = next_packet_++;
    const auto kind = p.kind;
    const auto zone = p.zone;
    packets_.emplace(id, std::move(p));
    engine_.schedule(start, kind, {packets_.at(id).src, zone, id, kTxStart});
}

void Simulation::on_tx_start(std::uint64_t packet_id)
{
    auto& p = packets_.at(packet_id);
    Transmission tx;
    tx.src = p.src;
    tx.dst = p.dst;
    tx.zone = p.zone;
    tx.start = engine_.now();
    tx.duration = airtime(p.bytes, cfg_.channel);
    tx.bytes = p.bytes;
    p.tx = channel_.begin(tx);
    // the sender pays whether or not the packet survives
    charge_tx(p.src, p.bytes);
    engine_.schedule(tx.end(), p.kind, {p.src, p.zone, packet_id, kTxEnd});
}

void Simulation::on_tx_end(std::uint64_t packet_id)
{
    auto node = packets_.extract(packet_id);
    auto& p = node.mapped();
    const auto outcome = channel_.finish(p.tx);
    if (p.kind == EventKind::ElectionMsg) {
        if (outcome == TxOutcome::Delivered) {
            zones_[p.zone].delivered_ads.push_back({p.src, p.advertised});
            for (const auto m : grid_.zone(p.zone).members) {
                if (m != p.src) {
                    charge_rx(m, p.bytes);
                }
            }
        }
        return;
    }
    ++ledger_.data_packets;
    if (outcome == TxOutcome::Collided) {
        ++ledger_.data_packets_lost;
        ledger_.collision_lost += p.bytes;
        return;
    }
    charge_rx(p.dst, p.bytes);
    for (const auto& s : p.samples) {
        ch_accept(p.dst, s, p.scale);
    }
}

Bytes Simulation::aggregated_size(const Buffer& buf) const
{
    if (buf.samples.empty()) {
        return 0;
    }
    const double volume = cfg_.protocol == ProtocolKind::CCS ? buf.volume : static_cast<double>(buf.raw);
    return aggregate_volume(volume, buf.samples.size(), buf.samples.front().size, cfg_.aggregation);
}

void Simulation::ch_accept(NodeId ch, const DataSample& s, double scale)
{
    auto& buf = buffers_[ch];
    const double volume = cfg_.protocol == ProtocolKind::CCS ? buf.volume + static_cast<double>(s.size) * scale
                                                             : static_cast<double>(buf.raw + s.size);
    const Bytes largest = buf.samples.empty() ? s.size : buf.samples.front().size;
    const Bytes grown = aggregate_volume(volume, buf.samples.size() + 1, largest, cfg_.aggregation);
    if (!buf.samples.empty() && grown > nodes_[ch].storage_free()) {
        // the pooled record would no longer fit: store what we have and
        // send the zone back to local storage
        flush_buffer(ch);
        if (zones_[nodes_[ch].zone].ch == ch) {
            mark_ch_full(nodes_[ch].zone);
        }
    }
    buf.samples.push_back(s);
    buf.raw += s.size;
    buf.volume += static_cast<double>(s.size) * scale;
}

void Simulation::charge_tx(NodeId id, Bytes bytes)
{
    const double e = radio_energy(bytes, RadioDirection::Tx, cfg_.energy);
    nodes_[id].energy_pre += e;
    ledger_.radio_tx_bytes += bytes;
    ledger_.radio_tx_j += e;
}

void Simulation::charge_rx(NodeId id, Bytes bytes)
{
    const double e = radio_energy(bytes, RadioDirection::Rx, cfg_.energy);
    nodes_[id].energy_pre += e;
    ledger_.radio_rx_bytes += bytes;
    ledger_.radio_rx_j += e;
}

void Simulation::charge_idle(ZoneId z, SimTime until)
{
    auto& zone = zones_[z];
    if (!zone.ch || cfg_.energy.idle_watts <= 0.0 || until <= zone.ch_since) {
        zone.ch_since = until;
        return;
    }
    const double e = cfg_.energy.idle_watts * (until - zone.ch_since).seconds();
    nodes_[*zone.ch].energy_pre += e;
    ledger_.idle_j += e;
    zone.ch_since = until;
}

bool Simulation::can_store(const SensorNode& n) const
{
    const auto& zone = zones_[n.zone];
    if (is_collaborative(cfg_.protocol) && !zone.electing && zone.ch && !zone.ch_full &&
        n.role != Role::Unclustered) {
        return nodes_[*zone.ch].storage_free() >= cfg_.sample_bytes;
    }
    return n.storage_free() >= cfg_.sample_bytes;
}

std::vector<NodeStatus> Simulation::node_status() const
{
    std::vector<NodeStatus> out;
    out.reserve(nodes_.size());
    for (const auto& n : nodes_) {
        out.push_back({n.zone, true, can_store(n), n.storage_free() < cfg_.sample_bytes});
    }
    return out;
}

void Simulation::record_tick()
{
    const auto status = node_status();
    const auto zones = grid_.zones();
    TickRow row;
    row.t = engine_.now().seconds();
    double used = 0.0;
    std::size_t depleted = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        used += static_cast<double>(nodes_[i].storage_used);
        depleted += status[i].depleted ? 1 : 0;
    }
    row.mean_storage_bytes = used / static_cast<double>(nodes_.size());
    row.depleted_frac = static_cast<double>(depleted) / static_cast<double>(nodes_.size());
    row.bincov = binary_coverage(zones, status);
    row.cov25 = manifold_coverage(zones, status, 0.25);
    row.cov50 = manifold_coverage(zones, status, 0.5);
    row.cov100 = manifold_coverage(zones, status, 1.0);
    row.deadzone_frac = dead_zone_fraction(zones, status);
    log_.ticks.push_back(row);

    std::vector<double> live;
    live.reserve(zones.size());
    for (const auto& z : zones) {
        live.push_back(zone_live_fraction(z, status));
    }
    log_.zone_live.push_back(std::move(live));
}

RoundState Simulation::round_state() const
{
    RoundState rs;
    rs.round_index = round_;
    rs.round_length = cfg_.round_length;
    for (ZoneId z = 0; z < zones_.size(); ++z) {
        rs.ch_of_zone[z] = zones_[z].ch;
        if (zones_[z].ch && !zones_[z].ch_full) {
            auto& list = rs.members_of[z];
            for (const auto m : grid_.zone(z).members) {
                if (nodes_[m].role == Role::Member) {
                    list.push_back(m);
                }
            }
        }
    }
    return rs;
}

}  // namespace csn
