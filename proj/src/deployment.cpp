#include "csn/deployment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "csn/random.hpp"

namespace csn {

namespace {

std::uint32_t whole_multiple(double total, double side, const char* what)
{
    const double k = total / side;
    const double r = std::round(k);
    if (r < 1.0 || std::abs(k - r) > 1e-9) {
        throw std::invalid_argument(std::string("field ") + what + " must be a positive integer multiple of zone_side");
    }
    return static_cast<std::uint32_t>(r);
}

SensorNode make_node(NodeId id, Position pos, ZoneId zone, const NodeDefaults& d)
{
    SensorNode n;
    n.id = id;
    n.pos = pos;
    n.zone = zone;
    n.storage_cap = d.storage_cap;
    n.sampling_period = d.sampling_period;
    n.radio_range = d.radio_range;
    return n;
}

}  // namespace

void FieldSpec::validate(double radio_range) const
{
    if (!(zone_side > 0.0) || !(width > 0.0) || !(height > 0.0)) {
        throw std::invalid_argument("field dimensions must be positive");
    }
    whole_multiple(width, zone_side, "width");
    whole_multiple(height, zone_side, "height");
    if (!(zone_side * std::sqrt(2.0) < radio_range)) {
        throw std::invalid_argument("zone diagonal must be shorter than the radio range");
    }
}

std::uint32_t FieldSpec::zones_x() const { return whole_multiple(width, zone_side, "width"); }
std::uint32_t FieldSpec::zones_y() const { return whole_multiple(height, zone_side, "height"); }

ZoneGrid::ZoneGrid(const FieldSpec& field) : field_(field)
{
    const auto nx = field.zones_x();
    const auto ny = field.zones_y();
    zones_.reserve(static_cast<std::size_t>(nx) * ny);
    for (std::uint32_t row = 0; row < ny; ++row) {
        for (std::uint32_t col = 0; col < nx; ++col) {
            Zone z;
            z.id = row * nx + col;
            z.bounds = {col * field.zone_side, row * field.zone_side,
                        (col + 1) * field.zone_side, (row + 1) * field.zone_side};
            zones_.push_back(std::move(z));
        }
    }
}

ZoneId ZoneGrid::zone_of(Position p) const
{
    if (!(p.x >= 0.0 && p.x <= field_.width && p.y >= 0.0 && p.y <= field_.height)) {
        throw std::out_of_range("position outside the field");
    }
    const auto nx = field_.zones_x();
    const auto ny = field_.zones_y();
    auto col = std::min<std::uint32_t>(static_cast<std::uint32_t>(p.x / field_.zone_side), nx - 1);
    auto row = std::min<std::uint32_t>(static_cast<std::uint32_t>(p.y / field_.zone_side), ny - 1);
    return row * nx + col;
}

Topology generate_uniform(std::uint32_t n, const FieldSpec& field, std::uint64_t seed,
                          const NodeDefaults& defaults)
{
    if (n == 0) {
        throw std::invalid_argument("node count must be at least 1");
    }
    field.validate(defaults.radio_range);
    Topology topo{{}, ZoneGrid(field)};
    auto rng = make_stream(seed, Stream::Topology);
    topo.nodes.reserve(n);
    for (NodeId id = 0; id < n; ++id) {
        // [0, width) keeps every draw inside a half-open zone
        const Position pos{rng.uniform(0.0, field.width), rng.uniform(0.0, field.height)};
        const ZoneId z = topo.grid.zone_of(pos);
        topo.nodes.push_back(make_node(id, pos, z, defaults));
        topo.grid.zone(z).members.push_back(id);
    }
    return topo;
}

Topology generate_biased(std::span<const std::pair<ZoneId, std::uint32_t>> zone_counts,
                         const FieldSpec& field, std::uint64_t seed, const NodeDefaults& defaults)
{
    field.validate(defaults.radio_range);
    Topology topo{{}, ZoneGrid(field)};
    auto rng = make_stream(seed, Stream::Topology);
    NodeId next = 0;
    for (const auto& [zid, count] : zone_counts) {
        if (zid >= topo.grid.size()) {
            throw std::invalid_argument("unknown zone id " + std::to_string(zid) + " (grid has " +
                                        std::to_string(topo.grid.size()) + " zones)");
        }
        if (count == 0) {
            throw std::invalid_argument("biased zone counts must be at least 1");
        }
        const Rect b = topo.grid.zone(zid).bounds;
        for (std::uint32_t i = 0; i < count; ++i) {
            const Position pos{rng.uniform(b.x0, b.x1), rng.uniform(b.y0, b.y1)};
            topo.nodes.push_back(make_node(next, pos, zid, defaults));
            topo.grid.zone(zid).members.push_back(next);
            ++next;
        }
    }
    if (topo.nodes.empty()) {
        throw std::invalid_argument("biased deployment places no nodes");
    }
    return topo;
}

ZoneGrid assign_activity(ZoneGrid grid, double high_fraction, std::uint64_t seed)
{
    if (!(high_fraction >= 0.0 && high_fraction <= 1.0)) {
        throw std::invalid_argument("high_fraction must lie in [0, 1]");
    }
    const std::size_t total = grid.size();
    const auto high = static_cast<std::size_t>(std::ceil(high_fraction * static_cast<double>(total) - 1e-9));
    std::vector<ZoneId> order(total);
    std::iota(order.begin(), order.end(), ZoneId{0});
    auto rng = make_stream(seed, Stream::Activity);
    // partial Fisher-Yates: the first `high` slots are the chosen zones
    for (std::size_t i = 0; i < high && i + 1 < total; ++i) {
        const auto j = i + rng.below(total - i);
        std::swap(order[i], order[j]);
    }
    for (auto& z : grid.zones()) {
        z.activity = Activity::Low;
    }
    for (std::size_t i = 0; i < high; ++i) {
        grid.zone(order[i]).activity = Activity::High;
    }
    return grid;
}

double max_intra_zone_distance(const Topology& topo)
{
    double worst = 0.0;
    for (const auto& z : topo.grid.zones()) {
        for (std::size_t i = 0; i < z.members.size(); ++i) {
            for (std::size_t j = i + 1; j < z.members.size(); ++j) {
                worst = std::max(worst, distance(topo.nodes[z.members[i]].pos, topo.nodes[z.members[j]].pos));
            }
        }
    }
    return worst;
}

void write_topology(std::ostream& os, const Topology& topo)
{
    os << "# id x y zone\n";
    char line[128];
    for (const auto& n : topo.nodes) {
        std::snprintf(line, sizeof line, "%u %.6f %.6f %u\n", n.id, n.pos.x, n.pos.y, n.zone);
        os << line;
    }
}

}  // namespace csn
