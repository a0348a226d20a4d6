#include "csn/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace csn {

namespace {

struct ZoneCount {
    std::size_t members = 0;
    std::size_t live = 0;
    std::size_t depleted = 0;
};

ZoneCount count_zone(const Zone& zone, std::span<const NodeStatus> nodes)
{
    ZoneCount c;
    for (const auto id : zone.members) {
        const auto& n = nodes[id];
        ++c.members;
        if (n.generating && n.can_store) {
            ++c.live;
        }
        if (n.depleted) {
            ++c.depleted;
        }
    }
    return c;
}

bool meets(const ZoneCount& c, double threshold)
{
    if (threshold <= kAnyThreshold) {
        return c.live > 0;
    }
    // live / members >= threshold, in integers where possible
    return static_cast<double>(c.live) >= threshold * static_cast<double>(c.members) - 1e-12;
}

}  // namespace

double manifold_coverage(std::span<const Zone> zones, std::span<const NodeStatus> nodes, double threshold)
{
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw std::invalid_argument("coverage threshold must lie in [0, 1]");
    }
    std::size_t populated = 0;
    std::size_t covered = 0;
    for (const auto& z : zones) {
        const auto c = count_zone(z, nodes);
        if (c.members == 0) {
            continue;
        }
        ++populated;
        if (meets(c, threshold)) {
            ++covered;
        }
    }
    return populated == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(populated);
}

double binary_coverage(std::span<const Zone> zones, std::span<const NodeStatus> nodes)
{
    return manifold_coverage(zones, nodes, kAnyThreshold);
}

double dead_zone_fraction(std::span<const Zone> zones, std::span<const NodeStatus> nodes)
{
    std::size_t populated = 0;
    std::size_t dead = 0;
    for (const auto& z : zones) {
        const auto c = count_zone(z, nodes);
        if (c.members == 0) {
            continue;
        }
        ++populated;
        if (c.depleted == c.members) {
            ++dead;
        }
    }
    return populated == 0 ? 0.0 : static_cast<double>(dead) / static_cast<double>(populated);
}

double zone_live_fraction(const Zone& zone, std::span<const NodeStatus> nodes)
{
    const auto c = count_zone(zone, nodes);
    return c.members == 0 ? 0.0 : static_cast<double>(c.live) / static_cast<double>(c.members);
}

CollectionResult run_collection(std::span<SensorNode> nodes, const ChannelConfig& channel,
                                const EnergyModel& energy)
{
    CollectionResult r;
    double time_sum = 0.0;
    for (auto& n : nodes) {
        if (n.storage_used == 0) {
            continue;
        }
        ++r.holders;
        time_sum += static_cast<double>(n.storage_used) / channel.bandwidth;
        const double e = radio_energy(n.storage_used, RadioDirection::Tx, energy);
        n.energy_post += e;
        r.post_energy_j += e;
    }
    if (r.holders > 0) {
        r.mean_time_s = time_sum / static_cast<double>(r.holders);
    }
    return r;
}

MetricsLog average_logs(std::span<const MetricsLog> logs)
{
    if (logs.empty()) {
        throw std::invalid_argument("nothing to average");
    }
    MetricsLog out;
    const auto k = static_cast<double>(logs.size());
    out.tick_period = logs.front().tick_period;
    out.ticks.resize(logs.front().ticks.size());
    for (const auto& log : logs) {
        if (log.ticks.size() != out.ticks.size()) {
            throw std::invalid_argument("cannot average logs with different tick counts");
        }
        for (std::size_t i = 0; i < log.ticks.size(); ++i) {
            const auto& src = log.ticks[i];
            auto& dst = out.ticks[i];
            dst.t = src.t;
            dst.mean_storage_bytes += src.mean_storage_bytes / k;
            dst.depleted_frac += src.depleted_frac / k;
            dst.bincov += src.bincov / k;
            dst.cov25 += src.cov25 / k;
            dst.cov50 += src.cov50 / k;
            dst.cov100 += src.cov100 / k;
            dst.deadzone_frac += src.deadzone_frac / k;
        }
    }
    const auto& first = logs.front().summary;
    out.summary.protocol = first.protocol;
    out.summary.density = first.density;
    out.summary.seed = "mean";
    for (const auto& log : logs) {
        const auto& s = log.summary;
        out.summary.pre_energy_j += s.pre_energy_j / k;
        out.summary.post_energy_j += s.post_energy_j / k;
        out.summary.loss_frac += s.loss_frac / k;
        out.summary.mean_collection_s += s.mean_collection_s / k;
        out.summary.mean_storage_final_bytes += s.mean_storage_final_bytes / k;
        out.collection_holders += log.collection_holders / k;
    }
    return out;
}

double mean_depletion_time(const MetricsLog& log, double horizon)
{
    if (log.depletion_time.empty()) {
        return horizon;
    }
    double sum = 0.0;
    for (const double t : log.depletion_time) {
        sum += t < 0.0 ? horizon : t;
    }
    return sum / static_cast<double>(log.depletion_time.size());
}

std::string format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void write_timeseries_csv(std::ostream& os, const MetricsLog& log)
{
    os << kTimeseriesHeader << '\n';
    for (const auto& r : log.ticks) {
        os << format_number(r.t) << ',' << format_number(r.mean_storage_bytes) << ','
           << format_number(r.depleted_frac) << ',' << format_number(r.bincov) << ','
           << format_number(r.cov25) << ',' << format_number(r.cov50) << ',' << format_number(r.cov100)
           << ',' << format_number(r.deadzone_frac) << '\n';
    }
}

void write_summary_row(std::ostream& os, const RunSummary& s)
{
    os << s.protocol << ',' << s.density << ',' << s.seed << ',' << format_number(s.pre_energy_j) << ','
       << format_number(s.post_energy_j) << ',' << format_number(s.loss_frac) << ','
       << format_number(s.mean_collection_s) << ',' << format_number(s.mean_storage_final_bytes) << '\n';
}

void write_summary_csv(std::ostream& os, std::span<const RunSummary> rows)
{
    os << kSummaryHeader << '\n';
    for (const auto& r : rows) {
        write_summary_row(os, r);
    }
}

}  // namespace csn
