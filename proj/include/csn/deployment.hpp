#pragma once

// Field tiling and topology generation.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "csn/types.hpp"

namespace csn {

struct FieldSpec {
    double width = 350.0;
    double height = 350.0;
    double zone_side = 70.0;

    /// Throws if the field does not tile into whole zones, or if a zone's
    /// diagonal is not strictly inside `radio_range`.
    void validate(double radio_range) const;
    std::uint32_t zones_x() const;
    std::uint32_t zones_y() const;
    bool operator==(const FieldSpec&) const = default;
};

struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
    bool contains(Position p) const { return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1; }
};

enum class Activity { Low, High };

struct Zone {
    ZoneId id = 0;
    Rect bounds;
    std::vector<NodeId> members;
    Activity activity = Activity::Low;
};

class ZoneGrid {
public:
    ZoneGrid() = default;
    explicit ZoneGrid(const FieldSpec& field);

    /// Half-open tiling; points on the far field edge fold into the last
    /// row/column so the mapping is total over the closed field.
    ZoneId zone_of(Position p) const;

    const FieldSpec& field() const { return field_; }
    std::size_t size() const { return zones_.size(); }
    const Zone& zone(ZoneId id) const { return zones_.at(id); }
    Zone& zone(ZoneId id) { return zones_.at(id); }
    std::span<const Zone> zones() const { return zones_; }
    std::span<Zone> zones() { return zones_; }

private:
    FieldSpec field_;
    std::vector<Zone> zones_;
};

struct Topology {
    std::vector<SensorNode> nodes;
    ZoneGrid grid;
};

/// Node template applied to every generated sensor.
struct NodeDefaults {
    Bytes storage_cap = 30000;
    SimTime sampling_period = SimTime::from_seconds(1.0);
    double radio_range = 100.0;
};

Topology generate_uniform(std::uint32_t n, const FieldSpec& field, std::uint64_t seed,
                          const NodeDefaults& defaults = {});

Topology generate_biased(std::span<const std::pair<ZoneId, std::uint32_t>> zone_counts,
                         const FieldSpec& field, std::uint64_t seed,
                         const NodeDefaults& defaults = {});

/// Marks ceil(high_fraction * zones) distinct zones High and the rest Low.
ZoneGrid assign_activity(ZoneGrid grid, double high_fraction, std::uint64_t seed);

/// Largest pairwise member distance found in any zone.
double max_intra_zone_distance(const Topology& topo);

/// Plain-text dump: one `id x y zone` row per node.
void write_topology(std::ostream& os, const Topology& topo);

}  // namespace csn
