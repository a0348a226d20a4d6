#pragma once

// Core value types and the flash/radio cost model.

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace csn {

using NodeId = std::uint32_t;
using ZoneId = std::uint32_t;
using Bytes = std::uint64_t;

inline constexpr NodeId kBroadcast = std::numeric_limits<NodeId>::max();

/// Simulated time with microsecond granularity. Integer ticks keep the event
/// queue ordering exact.
class SimTime {
public:
    constexpr SimTime() = default;

    static constexpr SimTime from_micros(std::int64_t us) { return SimTime(us); }
    static SimTime from_seconds(double s)
    {
        if (!std::isfinite(s)) {
            throw std::invalid_argument("non-finite time value");
        }
        return SimTime(static_cast<std::int64_t>(std::llround(s * 1e6)));
    }

    constexpr std::int64_t micros() const { return us_; }
    constexpr double seconds() const { return static_cast<double>(us_) / 1e6; }

    constexpr auto operator<=>(const SimTime&) const = default;
    constexpr SimTime operator+(SimTime o) const { return SimTime(us_ + o.us_); }
    constexpr SimTime operator-(SimTime o) const { return SimTime(us_ - o.us_); }
    constexpr SimTime operator*(std::int64_t k) const { return SimTime(us_ * k); }

private:
    constexpr explicit SimTime(std::int64_t us) : us_(us) {}
    std::int64_t us_ = 0;
};

struct Position {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Position&) const = default;
};

inline double distance(Position a, Position b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

enum class Role { Member, ClusterHead, Unclustered };

struct DataSample {
    NodeId origin = 0;
    ZoneId zone = 0;
    SimTime t_gen;
    Bytes size = 0;
};

struct SensorNode {
    NodeId id = 0;
    Position pos;
    ZoneId zone = 0;
    Bytes storage_cap = 0;
    Bytes storage_used = 0;
    double energy_pre = 0.0;
    double energy_post = 0.0;
    Role role = Role::Unclustered;
    SimTime sampling_period = SimTime::from_seconds(1.0);
    double radio_range = 100.0;

    Bytes storage_free() const { return storage_cap - storage_used; }
    bool operator==(const SensorNode&) const = default;
};

/// Per-byte energy costs. Radio tx cost is derived from the flash cost via
/// `radio_multiplier`; rx defaults to the tx cost.
struct EnergyModel {
    double e_store = 5.5e-8;
    double radio_multiplier = 40.0;
    double e_radio_tx = 5.5e-8 * 40.0;
    double e_radio_rx = 5.5e-8 * 40.0;
    double idle_watts = 0.0;

    static EnergyModel make(double e_store, double radio_multiplier);
    static EnergyModel make(double e_store, double radio_multiplier, double e_radio_rx);

    void validate() const;
    bool operator==(const EnergyModel&) const = default;
};

enum class RadioDirection { Tx, Rx };

double storage_energy(Bytes bytes, const EnergyModel& m);
double radio_energy(Bytes bytes, RadioDirection dir, const EnergyModel& m);

enum class StoreResult { Stored, Rejected };

/// All-or-nothing write into node flash. Rejected leaves the node untouched.
StoreResult try_store(SensorNode& node, Bytes bytes, const EnergyModel& m);

enum class AggregationKind { ConstantRatio, OnePacket };

struct AggregationModel {
    AggregationKind kind = AggregationKind::ConstantRatio;
    double alpha = 0.5;

    void validate() const;
    bool operator==(const AggregationModel&) const = default;
};

std::string to_string(Role r);
std::string to_string(AggregationKind k);

}  // namespace csn
