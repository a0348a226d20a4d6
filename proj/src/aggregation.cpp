#include "csn/aggregation.hpp"

#include <algorithm>
#include <cmath>

namespace csn {

Bytes aggregate(std::span<const DataSample> samples, const AggregationModel& model)
{
    if (samples.empty()) {
        return 0;
    }
    if (model.kind == AggregationKind::OnePacket) {
        return samples.front().size;
    }
    Bytes total = 0;
    for (const auto& s : samples) {
        total += s.size;
    }
    const double scaled = model.alpha * static_cast<double>(total);
    // tolerate representation error in alpha (0.5 * 1000 must be 500, not 501)
    return std::min<Bytes>(total, static_cast<Bytes>(std::ceil(scaled - 1e-9 * scaled)));
}

Bytes aggregate_volume(double volume, std::size_t count, Bytes largest, const AggregationModel& model)
{
    if (count == 0) {
        return 0;
    }
    if (model.kind == AggregationKind::OnePacket) {
        return largest;
    }
    const double scaled = model.alpha * volume;
    return static_cast<Bytes>(std::ceil(scaled - 1e-9 * scaled));
}

}  // namespace csn
