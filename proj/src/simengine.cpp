#include "imslab/simengine.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <utility>

#include <json.hpp>

namespace imslab::sim {

const Event* Trace::find(Seq seq) const {
    // Dispatch order is not seq order, so this is a linear scan; traces are
    // a few dozen events.
    for (const auto& ev : delivered) {
        if (ev.seq == seq) {
            return &ev;
        }
    }
    for (const auto& ev : dropped) {
        if (ev.seq == seq) {
            return &ev;
        }
    }
    return nullptr;
}

Engine::Engine(DelayParams params, std::size_t event_cap)
    : params_(std::move(params)), event_cap_(event_cap) {}

void Engine::on(NodeRole role, Handler handler) {
    handlers_[static_cast<std::size_t>(role)] = std::move(handler);
}

Event Engine::send(NodeRole src, NodeRole dst, MessageKind kind, Payload payload) {
    Event ev;
    ev.seq = next_seq_++;
    if (current_ != nullptr) {
        ev.parent_seq = current_->seq;
    }
    ev.sent_at = now_;
    ev.deliver_at = now_ + link_delay(params_, src, dst);
    ev.src = src;
    ev.dst = dst;
    ev.kind = kind;
    ev.payload = std::move(payload);
    queue_.push(ev);
    ++trace_.scheduled;
    return ev;
}

Trace Engine::run_until_quiescent() {
    while (!queue_.empty()) {
        if (trace_.delivered.size() >= event_cap_) {
            throw NonTermination("event cap of " + std::to_string(event_cap_) +
                                 " dispatched events exceeded");
        }
        Event ev = queue_.top();
        queue_.pop();
        now_ = ev.deliver_at;

        auto& handler = handlers_[static_cast<std::size_t>(ev.dst)];
        if (!handler) {
            throw HandlerPanic("no handler registered for " + std::string(to_string(ev.dst)));
        }
        trace_.delivered.push_back(std::move(ev));
        // Copy: the handler may schedule events, but `delivered` only grows
        // here, so take a stable snapshot for the dispatch context.
        const Event dispatching = trace_.delivered.back();
        current_ = &dispatching;
        try {
            handler(*this, dispatching);
        } catch (...) {
            current_ = nullptr;
            throw;
        }
        current_ = nullptr;
    }
    trace_.terminal_clock = now_;
    Trace out = std::move(trace_);
    trace_ = Trace{};
    return out;
}

std::vector<Event> critical_path(const Trace& trace, Seq final_seq) {
    std::unordered_map<Seq, const Event*> by_seq;
    by_seq.reserve(trace.delivered.size());
    for (const auto& ev : trace.delivered) {
        by_seq.emplace(ev.seq, &ev);
    }

    std::vector<Event> path;
    auto it = by_seq.find(final_seq);
    if (it == by_seq.end()) {
        throw OrphanEvent("event " + std::to_string(final_seq) + " is not in the trace");
    }
    const Event* cursor = it->second;
    while (true) {
        path.push_back(*cursor);
        if (!cursor->parent_seq) {
            break;
        }
        auto parent = by_seq.find(*cursor->parent_seq);
        if (parent == by_seq.end()) {
            throw OrphanEvent("event " + std::to_string(cursor->seq) + " has missing parent " +
                              std::to_string(*cursor->parent_seq));
        }
        cursor = parent->second;
        if (path.size() > trace.delivered.size()) {
            throw OrphanEvent("causal chain loops at event " + std::to_string(cursor->seq));
        }
    }
    std::reverse(path.begin(), path.end());
    return path;
}

std::string to_jsonl(const Trace& trace) {
    std::ostringstream out;
    for (const auto& ev : trace.delivered) {
        nlohmann::ordered_json rec;
        rec["sent_at"] = ev.sent_at;
        rec["deliver_at"] = ev.deliver_at;
        rec["src"] = to_string(ev.src);
        rec["dst"] = to_string(ev.dst);
        rec["kind"] = to_string(ev.kind);
        rec["parent_seq"] = ev.parent_seq ? nlohmann::ordered_json(*ev.parent_seq) : nullptr;
        rec["seq"] = ev.seq;
        out << rec.dump() << '\n';
    }
    return out.str();
}

} // namespace imslab::sim
