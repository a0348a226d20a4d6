#include "csn/types.hpp"

namespace csn {

EnergyModel EnergyModel::make(double e_store, double radio_multiplier)
{
    return make(e_store, radio_multiplier, e_store * radio_multiplier);
}

EnergyModel EnergyModel::make(double e_store, double radio_multiplier, double e_radio_rx)
{
    EnergyModel m;
    m.e_store = e_store;
    m.radio_multiplier = radio_multiplier;
    m.e_radio_tx = e_store * radio_multiplier;
    m.e_radio_rx = e_radio_rx;
    m.validate();
    return m;
}

void EnergyModel::validate() const
{
    if (!(e_store > 0.0) || !(radio_multiplier > 0.0) || !(e_radio_tx > 0.0) || !(e_radio_rx > 0.0)) {
        throw std::invalid_argument("energy model costs must be strictly positive");
    }
    if (e_radio_tx != e_store * radio_multiplier) {
        throw std::invalid_argument("e_radio_tx must equal radio_multiplier * e_store");
    }
    if (!(idle_watts >= 0.0)) {
        throw std::invalid_argument("idle_watts must be non-negative");
    }
}

double storage_energy(Bytes bytes, const EnergyModel& m)
{
    return static_cast<double>(bytes) * m.e_store;
}

double radio_energy(Bytes bytes, RadioDirection dir, const EnergyModel& m)
{
    const double per_byte = dir == RadioDirection::Tx ? m.e_radio_tx : m.e_radio_rx;
    return static_cast<double>(bytes) * per_byte;
}

StoreResult try_store(SensorNode& node, Bytes bytes, const EnergyModel& m)
{
    if (bytes > node.storage_free()) {
        return StoreResult::Rejected;
    }
    node.storage_used += bytes;
    node.energy_pre += storage_energy(bytes, m);
    return StoreResult::Stored;
}

void AggregationModel::validate() const
{
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("aggregation alpha must lie in (0, 1]");
    }
}

std::string to_string(Role r)
{
    switch (r) {
    case Role::Member: return "member";
    case Role::ClusterHead: return "ch";
    case Role::Unclustered: return "unclustered";
    }
    return "?";
}

std::string to_string(AggregationKind k)
{
    return k == AggregationKind::ConstantRatio ? "constant" : "one_packet";
}

}  // namespace csn
