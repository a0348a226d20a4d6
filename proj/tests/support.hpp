#pragma once

#include <vector>

#include "csn/config.hpp"
#include "csn/deployment.hpp"

namespace csn::test {

/// Topology with nodes at the given positions on the configured field.
inline Topology place(const ScenarioConfig& cfg, const std::vector<Position>& at)
{
    Topology t{{}, ZoneGrid(cfg.field)};
    for (std::size_t i = 0; i < at.size(); ++i) {
        SensorNode n;
        n.id = static_cast<NodeId>(i);
        n.pos = at[i];
        n.zone = t.grid.zone_of(at[i]);
        n.storage_cap = cfg.storage_bytes;
        t.grid.zone(n.zone).members.push_back(n.id);
        t.nodes.push_back(n);
    }
    return t;
}

/// `k` nodes spread inside zone (col, row) of a 70 m grid.
inline std::vector<Position> cluster(int col, int row, int k)
{
    std::vector<Position> out;
    for (int i = 0; i < k; ++i) {
        out.push_back({col * 70.0 + 10.0 + 5.0 * i, row * 70.0 + 10.0 + 3.0 * i});
    }
    return out;
}

/// Lossless, jitter-free channel for exact accounting.
inline ScenarioConfig quiet(ScenarioConfig c)
{
    c.channel.jitter_window = 0.0;
    c.channel.interference_scope = InterferenceScope::None;
    return c;
}

}  // namespace csn::test
