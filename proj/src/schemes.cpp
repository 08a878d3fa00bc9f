#include "imslab/schemes.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <utility>

namespace imslab::schemes {

namespace {

using enum NodeRole;
using enum MessageKind;
using sim::Event;

// The MN's address after it attaches to the new access router.
constexpr std::string_view kNewCareOfAddress = "2001:db8:2::100";

[[noreturn]] void panic(NodeRole role, const Event& ev, std::string_view why) {
    throw sim::HandlerPanic(std::string(to_string(role)) + " cannot handle " +
                            std::string(to_string(ev.kind)) + " from " +
                            std::string(to_string(ev.src)) + ": " + std::string(why));
}

void expect_phase(NodeRole role, const NodeState& st, const Event& ev,
                  std::initializer_list<Phase> allowed) {
    if (std::find(allowed.begin(), allowed.end(), st.phase) == allowed.end()) {
        panic(role, ev, "unexpected in phase " + std::string(to_string(st.phase)));
    }
}

/// Per-role transitions. Every role accepts a fixed set of message kinds;
/// anything else is a flow definition bug.
class Nodes {
public:
    Nodes(SchemeId scheme, const ScenarioOptions& options) : scheme_(scheme) {
        auto& mn = state_of(states_, MN);
        mn.phase = Phase::Serving;
        mn.session = options.session;

        auto& op = state_of(states_, OldPCSCF);
        op.phase = Phase::Serving;
        op.session = options.session;
        op.qos = options.qos;

        auto& oar = state_of(states_, OldAR);
        oar.phase = Phase::Serving;
        oar.qos = options.qos;

        auto& scscf = state_of(states_, SCSCF);
        scscf.route = OldPCSCF;
        scscf.qos = options.qos;
    }

    const NodeStates& states() const { return states_; }

    void handle(const Event& ev) {
        switch (ev.dst) {
        case MN: on_mn(ev); break;
        case OldAR: on_old_ar(ev); break;
        case NewAR: on_new_ar(ev); break;
        case OldPCSCF: on_old_pcscf(ev); break;
        case NewPCSCF: on_new_pcscf(ev); break;
        case SCSCF: on_scscf(ev); break;
        case HA: on_ha(ev); break;
        case CN: on_cn(ev); break;
        }
    }

    /// Content the sender attaches to a leg at send time.
    sim::Payload payload_for(const Leg& leg) const {
        sim::Payload p;
        const auto& src = state_of(states_, leg.src);
        switch (leg.kind) {
        case CtData: {
            // transfer_context() on a scratch receiver enforces the precondition.
            NodeState receiver = transfer_context(src, NodeState{});
            p.session = receiver.session;
            if (carries_qos_context(scheme_)) {
                p.qos = src.qos;
            }
            break;
        }
        case QosCtxData:
        case QosCtxForward:
            if (!src.qos) {
                throw ContextMissing(std::string(to_string(leg.src)) + " holds no QoS context");
            }
            p.qos = src.qos;
            break;
        case SipRegisterOkLeg:
            if (uses_context_transfer(scheme_) && !src.session) {
                throw ContextMissing("new P-CSCF reached re-registration without a session context");
            }
            break;
        case SipRegisterLeg:
        case BU: {
            // The MN's own view: identities plus its new care-of address.
            const auto& mn = state_of(states_, MN);
            if (mn.session) {
                SessionContext view = *mn.session;
                view.ue_address = std::string(kNewCareOfAddress);
                p.session = std::move(view);
            }
            break;
        }
        default: break;
        }
        return p;
    }

private:
    NodeState& st(NodeRole role) { return state_of(states_, role); }

    void on_mn(const Event& ev) {
        auto& s = st(MN);
        switch (ev.kind) {
        case RtAdv:
            expect_phase(MN, s, ev, {Phase::Serving});
            s.phase = Phase::AddressReady;
            break;
        case PrRtAdv:
            expect_phase(MN, s, ev, {Phase::Serving});
            s.phase = Phase::Moving;
            break;
        case FBack:
            expect_phase(MN, s, ev, {Phase::Moving});
            s.phase = Phase::AddressReady;
            break;
        case BAck:
            // FMIPv6 forms the new CoA from PrRtAdv, so Moving already has one.
            expect_phase(MN, s, ev, {Phase::Moving, Phase::AddressReady});
            if (++s.acks == 2) {
                s.phase = Phase::Bound;
            }
            break;
        case SipRegisterOkLeg:
            expect_phase(MN, s, ev, {Phase::Bound});
            if (++s.register_legs == (uses_context_transfer(scheme_) ? 1u : 2u)) {
                s.phase = Phase::Registered;
            }
            break;
        case SipInviteOkLeg:
            expect_phase(MN, s, ev, {Phase::Registered});
            if (++s.invite_answers == (uses_context_transfer(scheme_) ? 1u : 4u)) {
                s.phase = Phase::Restored;
            }
            break;
        default: panic(MN, ev, "no transition");
        }
    }

    void on_old_ar(const Event& ev) {
        auto& s = st(OldAR);
        switch (ev.kind) {
        case RtSolPr: break;
        case FBU: s.tunnel = true; break;
        case HAck: break;
        case QosCtxRequest:
            if (ev.src != OldPCSCF) {
                panic(OldAR, ev, "QoS context requested by a non-P-CSCF");
            }
            break;
        default: panic(OldAR, ev, "no transition");
        }
    }

    void on_new_ar(const Event& ev) {
        auto& s = st(NewAR);
        switch (ev.kind) {
        case RtSol: break;
        case HI: s.tunnel = true; break;
        case FNA: s.phase = Phase::Serving; break;
        case FBack: s.tunnel = true; break;
        case QosCtxForward: {
            if (!ev.payload.qos) {
                panic(NewAR, ev, "QoS forward without a QoS context");
            }
            QoSContext qos = *ev.payload.qos;
            qos.reservation_state =
                qos.approved ? ReservationState::Reserved : ReservationState::Requested;
            s.qos = std::move(qos);
            break;
        }
        default: panic(NewAR, ev, "no transition");
        }
    }

    void on_old_pcscf(const Event& ev) {
        auto& s = st(OldPCSCF);
        switch (ev.kind) {
        case MoveNotify:
        case CtRequest:
            expect_phase(OldPCSCF, s, ev, {Phase::Serving});
            if (!s.session || s.session->session_state != SessionState::Active) {
                throw ContextMissing("old P-CSCF has no active session to transfer");
            }
            s.phase = Phase::Transferring;
            break;
        case QosCtxData:
            expect_phase(OldPCSCF, s, ev, {Phase::Transferring});
            if (!ev.payload.qos) {
                panic(OldPCSCF, ev, "QoS data without a QoS context");
            }
            s.qos = ev.payload.qos;
            break;
        case CtAck:
            expect_phase(OldPCSCF, s, ev, {Phase::Transferring});
            s.phase = Phase::Transferred;
            break;
        case RouteUpdateOk:
            expect_phase(OldPCSCF, s, ev, {Phase::Transferred});
            // The old copy is retained exactly until the S-CSCF confirms the new route.
            s.session.reset();
            s.phase = Phase::Released;
            break;
        default: panic(OldPCSCF, ev, "no transition");
        }
    }

    void on_new_pcscf(const Event& ev) {
        auto& s = st(NewPCSCF);
        switch (ev.kind) {
        case MoveNotify:
            expect_phase(NewPCSCF, s, ev, {Phase::Idle});
            s.phase = Phase::Expecting;
            break;
        case CtData:
            expect_phase(NewPCSCF, s, ev, {Phase::Expecting});
            if (!ev.payload.session) {
                throw ContextMissing("context transfer arrived without a session context");
            }
            s.session = ev.payload.session;
            if (ev.payload.qos) {
                s.qos = ev.payload.qos;
            }
            if (s.register_legs > 0) {
                s.phase = Phase::Registered;
            }
            break;
        case SipRegisterLeg:
            ++s.register_legs;
            if (!uses_context_transfer(scheme_) && s.register_legs == 2) {
                // Full registration rebuilds the state from what the MN presents.
                if (!ev.payload.session) {
                    panic(NewPCSCF, ev, "REGISTER without identities");
                }
                SessionContext fresh = *ev.payload.session;
                fresh.registration_state = RegistrationState::Registered;
                fresh.session_state = SessionState::Active;
                s.session = std::move(fresh);
                s.phase = Phase::Registered;
            } else if (uses_context_transfer(scheme_) && s.session) {
                // When the branch lags, the REGISTER can land before the context.
                s.phase = Phase::Registered;
            }
            break;
        default: panic(NewPCSCF, ev, "no transition");
        }
    }

    void on_scscf(const Event& ev) {
        auto& s = st(SCSCF);
        switch (ev.kind) {
        case RouteUpdate: s.route = NewPCSCF; break;
        case QosCtxForward:
            if (!ev.payload.qos) {
                panic(SCSCF, ev, "QoS forward without a QoS context");
            }
            s.qos = ev.payload.qos;
            break;
        default: panic(SCSCF, ev, "no transition");
        }
    }

    void bind(NodeRole role, const Event& ev) {
        if (!ev.payload.session) {
            panic(role, ev, "binding update without an address");
        }
        st(role).binding = ev.payload.session->ue_address;
    }

    void on_ha(const Event& ev) {
        if (ev.kind != BU) {
            panic(HA, ev, "no transition");
        }
        bind(HA, ev);
    }

    void on_cn(const Event& ev) {
        switch (ev.kind) {
        case BU: bind(CN, ev); break;
        case SipInviteLeg:
        case ReInviteLeg:
            if (!st(CN).binding) {
                panic(CN, ev, "invite before the binding was refreshed");
            }
            break;
        default: panic(CN, ev, "no transition");
        }
    }

    SchemeId scheme_;
    NodeStates states_{};
};

/// Releases legs whose gates are all delivered.
class FlowDriver {
public:
    FlowDriver(const Flow& flow, Nodes& nodes, sim::Engine& engine)
        : flow_(flow), nodes_(nodes), engine_(engine), delivered_(flow.legs.size(), false),
          sent_(flow.legs.size(), false) {
        for (const auto& leg : flow_.legs) {
            for (auto gate : leg.after) {
                dependents_.resize(flow_.legs.size());
                dependents_[gate].push_back(leg.id);
            }
        }
        dependents_.resize(flow_.legs.size());
    }

    void start() { emit(flow_.legs[flow_.trigger_leg]); }

    void on_delivered(const Event& ev) {
        const std::size_t leg_id = leg_of_seq_.at(ev.seq);
        delivered_[leg_id] = true;
        for (auto next : dependents_[leg_id]) {
            const auto& leg = flow_.legs[next];
            const bool ready = std::all_of(leg.after.begin(), leg.after.end(),
                                           [&](std::size_t g) { return delivered_[g]; });
            if (ready && !sent_[next]) {
                emit(leg);
            }
        }
    }

    bool delivered(std::size_t leg) const { return delivered_[leg]; }
    const std::vector<std::size_t>& leg_of_seq() const { return leg_of_seq_; }

private:
    void emit(const Leg& leg) {
        sent_[leg.id] = true;
        const auto ev = engine_.send(leg.src, leg.dst, leg.kind, nodes_.payload_for(leg));
        if (leg_of_seq_.size() <= ev.seq) {
            leg_of_seq_.resize(ev.seq + 1);
        }
        leg_of_seq_[ev.seq] = leg.id;
    }

    const Flow& flow_;
    Nodes& nodes_;
    sim::Engine& engine_;
    std::vector<bool> delivered_;
    std::vector<bool> sent_;
    std::vector<std::vector<std::size_t>> dependents_;
    std::vector<std::size_t> leg_of_seq_;
};

} // namespace

std::string_view to_string(Phase phase) {
    switch (phase) {
    case Phase::Idle: return "Idle";
    case Phase::Serving: return "Serving";
    case Phase::Moving: return "Moving";
    case Phase::AddressReady: return "AddressReady";
    case Phase::Bound: return "Bound";
    case Phase::Registered: return "Registered";
    case Phase::Restored: return "Restored";
    case Phase::Expecting: return "Expecting";
    case Phase::Transferring: return "Transferring";
    case Phase::Transferred: return "Transferred";
    case Phase::Released: return "Released";
    }
    return "?";
}

NodeState transfer_context(const NodeState& old_pcscf, NodeState new_pcscf) {
    if (!old_pcscf.session || old_pcscf.session->session_state != SessionState::Active) {
        throw ContextMissing("old P-CSCF holds no active session context");
    }
    new_pcscf.session = old_pcscf.session;
    return new_pcscf;
}

HandoverResult run_handover(SchemeId scheme, const DelayParams& params,
                            const ScenarioOptions& options) {
    params.validate();

    HandoverResult result;
    result.scheme = scheme;
    result.flow = define_flow(scheme);

    Nodes nodes(scheme, options);
    sim::Engine engine(params, options.event_cap);
    FlowDriver driver(result.flow, nodes, engine);
    for (NodeRole role : all_roles()) {
        engine.on(role, [&](sim::Engine&, const Event& ev) {
            nodes.handle(ev);
            driver.on_delivered(ev);
        });
    }

    driver.start();
    result.trace = engine.run_until_quiescent();

    if (!driver.delivered(result.flow.final_leg)) {
        if (uses_context_transfer(scheme) && !state_of(nodes.states(), NewPCSCF).session) {
            throw ContextMissing("flow stalled with no context at the new P-CSCF");
        }
        throw FlowStalled(std::string(to_string(scheme)) + " flow went quiescent before completion");
    }

    result.leg_of_seq = driver.leg_of_seq();
    result.final_state = nodes.states();
    for (const auto& ev : result.trace.delivered) {
        const auto leg = result.leg_of_seq[ev.seq];
        if (leg == result.flow.trigger_leg) {
            result.trigger_seq = ev.seq;
        }
        if (leg == result.flow.final_leg) {
            result.final_seq = ev.seq;
        }
    }
    const Event* trigger = result.trace.find(result.trigger_seq);
    const Event* final_ev = result.trace.find(result.final_seq);
    result.disruption_ms = final_ev->deliver_at - trigger->sent_at;

    const auto counts = message_counts(scheme, result.trace);
    result.messages_total = counts.total;
    result.messages_mn = counts.mn;

    const auto& np = state_of(result.final_state, NewPCSCF);
    result.context_preserved =
        uses_context_transfer(scheme) && options.session && np.session == options.session;

    const auto& nar = state_of(result.final_state, NewAR);
    result.qos_reserved = nar.qos && nar.qos->approved &&
                          nar.qos->reservation_state == ReservationState::Reserved &&
                          nar.qos->qos_proposal == options.qos.qos_proposal;
    return result;
}

MessageCounts message_counts(SchemeId /*scheme*/, const sim::Trace& trace) {
    MessageCounts counts;
    for (const auto& ev : trace.delivered) {
        ++counts.total;
        if (ev.src == MN || ev.dst == MN) {
            ++counts.mn;
        }
    }
    return counts;
}

std::vector<sim::Event> final_critical_path(const HandoverResult& result) {
    return sim::critical_path(result.trace, result.final_seq);
}

bool in_slack_regime(const HandoverResult& result) {
    for (const auto& ev : final_critical_path(result)) {
        if (result.flow.legs[result.leg_of_seq[ev.seq]].branch != Branch::Main) {
            return false;
        }
    }
    return true;
}

std::string ladder(const HandoverResult& result) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3);
    for (const auto& ev : result.trace.delivered) {
        const auto& leg = result.flow.legs[result.leg_of_seq[ev.seq]];
        out << "t=+" << delay_symbol(ev.src, ev.dst) << ' ' << ladder_label(ev.src) << " -> "
            << ladder_label(ev.dst) << " : " << to_string(ev.kind);
        if (leg.branch == Branch::Concurrent) {
            out << " [concurrent]";
        }
        out << "  @ " << ev.sent_at << " -> " << ev.deliver_at << '\n';
    }
    return out.str();
}

} // namespace imslab::schemes
