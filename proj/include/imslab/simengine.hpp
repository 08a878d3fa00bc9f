#pragma once

#include "imslab/domain.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <vector>

namespace imslab::sim {

/// A handler saw a message its state machine has no transition for.
class HandlerPanic : public Error {
public:
    using Error::Error;
};

/// More events were dispatched than the configured cap allows.
class NonTermination : public Error {
public:
    using Error::Error;
};

/// A causal parent referenced by an event is not in the trace.
class OrphanEvent : public Error {
public:
    using Error::Error;
};

using Seq = std::uint64_t;

struct Payload {
    std::optional<SessionContext> session;
    std::optional<QoSContext> qos;

    friend bool operator==(const Payload&, const Payload&) = default;
};

struct Event {
    Seq seq = 0;
    std::optional<Seq> parent_seq; ///< event whose handling scheduled this one
    Millis sent_at = 0;
    Millis deliver_at = 0;
    NodeRole src = NodeRole::MN;
    NodeRole dst = NodeRole::MN;
    MessageKind kind = MessageKind::RtSol;
    Payload payload;

    friend bool operator==(const Event&, const Event&) = default;
};

struct Trace {
    std::vector<Event> delivered; ///< in dispatch order, i.e. sorted by (deliver_at, seq)
    std::vector<Event> dropped;
    std::size_t scheduled = 0;
    Millis terminal_clock = 0;

    const Event* find(Seq seq) const;
};

/// Maximum dispatched events before NonTermination.
inline constexpr std::size_t kDefaultEventCap = 10'000;

/// Single-threaded discrete-event engine over the fixed-delay handover
/// topology. Events are dispatched in (deliver_at, seq) order; node
/// processing time is zero.
class Engine {
public:
    using Handler = std::function<void(Engine&, const Event&)>;

    explicit Engine(DelayParams params, std::size_t event_cap = kDefaultEventCap);

    void on(NodeRole role, Handler handler);

    /// Schedules delivery after the link delay. Inside a handler the event
    /// being dispatched becomes the new event's causal parent.
    Event send(NodeRole src, NodeRole dst, MessageKind kind, Payload payload = {});

    /// Dispatches until the queue is empty and returns everything delivered.
    Trace run_until_quiescent();

    Millis now() const { return now_; }
    const DelayParams& params() const { return params_; }
    /// The event currently being dispatched, if any.
    const Event* current() const { return current_; }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.deliver_at != b.deliver_at) {
                return a.deliver_at > b.deliver_at;
            }
            return a.seq > b.seq;
        }
    };

    DelayParams params_;
    std::size_t event_cap_;
    std::array<Handler, kNodeRoleCount> handlers_{};
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    Trace trace_;
    Millis now_ = 0;
    Seq next_seq_ = 0;
    const Event* current_ = nullptr;
};

/// Causal chain from the root trigger to `final_seq`, root first. The link
/// delays along it sum to deliver_at(final) minus the trigger's send time.
std::vector<Event> critical_path(const Trace& trace, Seq final_seq);

/// One JSON object per delivered event, keys in the fixed order sent_at,
/// deliver_at, src, dst, kind, parent_seq, seq. parent_seq is null for a
/// root trigger.
std::string to_jsonl(const Trace& trace);

} // namespace imslab::sim
