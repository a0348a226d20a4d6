#include "csn/engine.hpp"

#include <stdexcept>
#include <string>

namespace csn {

Engine::Engine(SimTime end)
{
    if (end < SimTime{}) {
        throw std::invalid_argument("simulation end must be non-negative");
    }
    clock_.end = end;
}

std::uint64_t Engine::schedule(SimTime time, EventKind kind, EventPayload payload)
{
    if (time < clock_.now) {
        throw std::logic_error("event scheduled in the past: t=" + std::to_string(time.seconds()) +
                               " now=" + std::to_string(clock_.now.seconds()));
    }
    const auto seq = next_seq_++;
    queue_.push(Event{time, seq, kind, payload});
    return seq;
}

void Engine::run(SimTime until, const Dispatch& dispatch)
{
    if (until > clock_.end) {
        throw std::invalid_argument("run horizon exceeds the clock end");
    }
    while (!queue_.empty() && queue_.top().time <= until) {
        const Event ev = queue_.top();
        queue_.pop();
        clock_.now = ev.time;
        ++dispatched_;
        dispatch(ev);
    }
    if (clock_.now < until) {
        clock_.now = until;
    }
}

void Engine::extend_end(SimTime end)
{
    if (end < clock_.now) {
        throw std::logic_error("clock end cannot move before now");
    }
    clock_.end = end;
}

}  // namespace csn
