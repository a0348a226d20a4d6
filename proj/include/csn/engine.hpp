#pragma once

// Deterministic discrete-event core.

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "csn/types.hpp"

namespace csn {

enum class EventKind : std::uint8_t {
    Sample,
    RoundStart,
    ElectionMsg,
    DataMsg,
    CoordMsg,
    CollectionStart,
    MetricTick,
};

/// Kind-specific payload. Unused fields stay zero.
struct EventPayload {
    NodeId node = 0;
    ZoneId zone = 0;
    std::uint64_t ref = 0;    // transmission id, round index, ...
    std::uint8_t phase = 0;   // sub-step for multi-step kinds
};

struct Event {
    SimTime time;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::Sample;
    EventPayload payload;
};

struct SimClock {
    SimTime now;
    SimTime end;
};

/// Single-threaded event queue ordered by (time, seq).
class Engine {
public:
    using Dispatch = std::function<void(const Event&)>;

    explicit Engine(SimTime end);

    /// Enqueues `ev` and returns the seq it was assigned. Scheduling before
    /// `now()` throws std::logic_error.
    std::uint64_t schedule(SimTime time, EventKind kind, EventPayload payload = {});

    /// Dispatches events in (time, seq) order while their time is <= `until`.
    /// The clock finishes at `until`.
    void run(SimTime until, const Dispatch& dispatch);

    SimTime now() const { return clock_.now; }
    SimTime end() const { return clock_.end; }
    void extend_end(SimTime end);
    bool empty() const { return queue_.empty(); }
    std::size_t pending() const { return queue_.size(); }
    std::uint64_t dispatched() const { return dispatched_; }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const
        {
            if (a.time != b.time) {
                return a.time > b.time;
            }
            return a.seq > b.seq;
        }
    };

    SimClock clock_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t dispatched_ = 0;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
};

}  // namespace csn
