#pragma once

#include "imslab/domain.hpp"
#include "imslab/simengine.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace imslab::schemes {

/// A context-transfer scheme reached a step that needs session state the
/// responsible P-CSCF does not hold.
class ContextMissing : public Error {
public:
    using Error::Error;
};

/// The flow went quiescent before its final leg was delivered.
class FlowStalled : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Flow description
// ---------------------------------------------------------------------------

enum class Branch : std::uint8_t {
    Main,       ///< serial handover path the closed-form delay sums up
    Concurrent, ///< side branch that should overlap the main path
};

/// One message of a scheme's ladder. A leg is sent by `src` as soon as every
/// leg in `after` has been delivered; the trigger leg has no gates.
struct Leg {
    std::size_t id = 0;
    NodeRole src = NodeRole::MN;
    NodeRole dst = NodeRole::MN;
    MessageKind kind = MessageKind::RtSol;
    std::vector<std::size_t> after;
    Branch branch = Branch::Main;
    std::string_view step;
};

struct Flow {
    SchemeId scheme = SchemeId::Standard;
    std::vector<Leg> legs;
    std::size_t trigger_leg = 0;
    std::size_t final_leg = 0;
};

/// Canonical ladder of a scheme, legs in id order.
Flow define_flow(SchemeId scheme);

/// Plain-text ladder, one line per leg: "t=+T_op MN -> oP-CSCF : MoveNotify".
/// Concurrent legs carry a "[concurrent]" suffix.
std::string ladder(const Flow& flow);

// ---------------------------------------------------------------------------
// Node state
// ---------------------------------------------------------------------------

enum class Phase : std::uint8_t {
    Idle,
    Serving,      ///< old side: holds the active session
    Moving,       ///< MN: handover started
    AddressReady, ///< MN: new CoA usable
    Bound,        ///< MN: HA and CN bindings refreshed
    Registered,   ///< MN / new P-CSCF: registration at the new P-CSCF done
    Restored,     ///< MN: session re-established
    Expecting,    ///< new P-CSCF: told a context is coming
    Transferring, ///< old P-CSCF: context being handed over
    Transferred,  ///< old P-CSCF: receiver acked the context
    Released,     ///< old P-CSCF: routes moved, state dropped
};

std::string_view to_string(Phase phase);

struct NodeState {
    Phase phase = Phase::Idle;
    std::optional<SessionContext> session; ///< P-CSCFs; MN keeps its own view
    std::optional<QoSContext> qos;         ///< P-CSCFs, ARs, S-CSCF
    std::optional<std::string> binding;    ///< HA / CN binding cache (CoA)
    std::optional<NodeRole> route;         ///< S-CSCF: P-CSCF serving the MN
    std::size_t register_legs = 0;
    std::size_t acks = 0;
    std::size_t invite_answers = 0;
    bool tunnel = false; ///< ARs: forwarding tunnel between old and new AR
};

using NodeStates = std::array<NodeState, kNodeRoleCount>;

inline NodeState& state_of(NodeStates& nodes, NodeRole role) {
    return nodes[static_cast<std::size_t>(role)];
}
inline const NodeState& state_of(const NodeStates& nodes, NodeRole role) {
    return nodes[static_cast<std::size_t>(role)];
}

/// Copies the old P-CSCF's session into the new P-CSCF's state. The old
/// copy stays in place. Throws ContextMissing unless the old P-CSCF holds
/// an active session.
NodeState transfer_context(const NodeState& old_pcscf, NodeState new_pcscf);

// ---------------------------------------------------------------------------
// Running a handover
// ---------------------------------------------------------------------------

struct ScenarioOptions {
    /// Session held by the old P-CSCF at the trigger; empty to start without one.
    std::optional<SessionContext> session = reference_session();
    QoSContext qos = reference_qos();
    std::size_t event_cap = sim::kDefaultEventCap;
};

struct HandoverResult {
    SchemeId scheme = SchemeId::Standard;
    Millis disruption_ms = 0;
    std::size_t messages_total = 0;
    std::size_t messages_mn = 0;
    sim::Trace trace;
    bool context_preserved = false;
    /// The new AR holds an approved, reserved QoS context equal to the initial one.
    bool qos_reserved = false;

    Flow flow;
    std::vector<std::size_t> leg_of_seq; ///< flow leg id for each event seq
    sim::Seq trigger_seq = 0;
    sim::Seq final_seq = 0;
    NodeStates final_state{};
};

HandoverResult run_handover(SchemeId scheme, const DelayParams& params,
                            const ScenarioOptions& options = {});

struct MessageCounts {
    std::size_t total = 0;
    std::size_t mn = 0; ///< messages with the MN as source or destination

    friend bool operator==(const MessageCounts&, const MessageCounts&) = default;
};

MessageCounts message_counts(SchemeId scheme, const sim::Trace& trace);

/// Causal chain that ends in the final session re-establishment leg.
std::vector<sim::Event> final_critical_path(const HandoverResult& result);

/// True when the final leg's causal chain stays on the main path, i.e. every
/// concurrent branch finished with slack. Only then does the closed form
/// describe the run exactly.
bool in_slack_regime(const HandoverResult& result);

/// Ladder annotated with send and delivery times from a run.
std::string ladder(const HandoverResult& result);

} // namespace imslab::schemes
