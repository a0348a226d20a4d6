#pragma once

#include <span>

#include "csn/types.hpp"

namespace csn {

/// Bytes a cluster head writes for one batch of pooled samples.
/// ConstantRatio: ceil(alpha * sum of sizes). OnePacket: the size of one
/// sample, or 0 for an empty batch.
Bytes aggregate(std::span<const DataSample> samples, const AggregationModel& model);

/// ConstantRatio over a full-resolution volume that may exceed the bytes
/// actually received (sources that thinned their own reporting). `volume` is
/// the reconstructed byte volume; `largest` is the biggest single sample.
Bytes aggregate_volume(double volume, std::size_t count, Bytes largest, const AggregationModel& model);

}  // namespace csn
