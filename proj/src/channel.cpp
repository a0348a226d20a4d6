#include "csn/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace csn {

namespace {

bool overlaps(const Transmission& a, const Transmission& b)
{
    return a.start < b.end() && b.start < a.end();
}

void count(ChannelCounters& c, const Transmission& tx, TxOutcome outcome)
{
    ++c.offered_packets;
    c.offered_bytes += tx.bytes;
    if (outcome == TxOutcome::Collided) {
        ++c.collided_packets;
        c.collided_bytes += tx.bytes;
    } else {
        c.delivered_bytes += tx.bytes;
    }
}

}  // namespace

void ChannelConfig::validate() const
{
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw std::invalid_argument("channel bandwidth must be positive");
    }
    if (!(jitter_window >= 0.0) || !std::isfinite(jitter_window)) {
        throw std::invalid_argument("channel jitter_window must be non-negative");
    }
}

SimTime airtime(Bytes bytes, const ChannelConfig& cfg)
{
    if (bytes == 0) {
        return SimTime{};
    }
    const double us = std::ceil(static_cast<double>(bytes) / cfg.bandwidth * 1e6 - 1e-6);
    return SimTime::from_micros(std::max<std::int64_t>(1, static_cast<std::int64_t>(us)));
}

SimTime jittered_start(SimTime nominal, double window, Rng& rng)
{
    if (!(window >= 0.0)) {
        throw std::invalid_argument("jitter window must be non-negative");
    }
    if (window == 0.0) {
        return nominal;
    }
    const auto window_us = static_cast<std::int64_t>(std::llround(window * 1e6));
    if (window_us == 0) {
        return nominal;
    }
    return nominal + SimTime::from_micros(static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(window_us))));
}

std::vector<TxOutcome> resolve_collisions(std::span<const Transmission> txs, InterferenceScope scope)
{
    std::vector<TxOutcome> out(txs.size(), TxOutcome::Delivered);
    if (scope == InterferenceScope::None) {
        return out;
    }
    for (std::size_t i = 0; i < txs.size(); ++i) {
        for (std::size_t j = i + 1; j < txs.size(); ++j) {
            if (txs[i].zone == txs[j].zone && overlaps(txs[i], txs[j])) {
                out[i] = TxOutcome::Collided;
                out[j] = TxOutcome::Collided;
            }
        }
    }
    return out;
}

Channel::Channel(ChannelConfig cfg, std::vector<ZoneId> node_zone, std::size_t zone_count)
    : cfg_(cfg), node_zone_(std::move(node_zone)), zone_active_(zone_count), per_zone_(zone_count)
{
    cfg_.validate();
}

std::uint64_t Channel::begin(const Transmission& tx)
{
    if (tx.src >= node_zone_.size() || node_zone_[tx.src] != tx.zone) {
        throw std::logic_error("transmitter " + std::to_string(tx.src) + " is not in zone " + std::to_string(tx.zone));
    }
    if (tx.dst != kBroadcast && (tx.dst >= node_zone_.size() || node_zone_[tx.dst] != tx.zone)) {
        throw std::logic_error("cross-zone unicast from node " + std::to_string(tx.src) + " to node " +
                               std::to_string(tx.dst));
    }
    const auto id = next_id_++;
    Active entry{tx, false};
    if (cfg_.interference_scope == InterferenceScope::Zone) {
        for (const auto other : zone_active_[tx.zone]) {
            auto& o = active_.at(other);
            if (overlaps(o.tx, tx)) {
                o.collided = true;
                entry.collided = true;
            }
        }
    }
    active_.emplace(id, entry);
    zone_active_[tx.zone].push_back(id);
    return id;
}

TxOutcome Channel::finish(std::uint64_t id)
{
    const auto it = active_.find(id);
    if (it == active_.end()) {
        throw std::logic_error("unknown transmission id");
    }
    const Active a = it->second;
    active_.erase(it);
    auto& list = zone_active_[a.tx.zone];
    list.erase(std::find(list.begin(), list.end(), id));
    const auto outcome = a.collided ? TxOutcome::Collided : TxOutcome::Delivered;
    count(totals_, a.tx, outcome);
    count(per_zone_[a.tx.zone], a.tx, outcome);
    return outcome;
}

double Channel::loss_fraction() const
{
    if (totals_.offered_packets == 0) {
        return 0.0;
    }
    return static_cast<double>(totals_.collided_packets) / static_cast<double>(totals_.offered_packets);
}

}  // namespace csn
