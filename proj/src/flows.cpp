#include "imslab/schemes.hpp"

#include <initializer_list>
#include <sstream>

namespace imslab::schemes {

namespace {

using enum NodeRole;
using enum MessageKind;

class FlowBuilder {
public:
    explicit FlowBuilder(SchemeId scheme) { flow_.scheme = scheme; }

    std::size_t leg(NodeRole src, NodeRole dst, MessageKind kind,
                    std::initializer_list<std::size_t> after, std::string_view step,
                    Branch branch = Branch::Main) {
        Leg l;
        l.id = flow_.legs.size();
        l.src = src;
        l.dst = dst;
        l.kind = kind;
        l.after.assign(after);
        l.branch = branch;
        l.step = step;
        flow_.legs.push_back(std::move(l));
        return flow_.legs.back().id;
    }

    void gate(std::size_t leg, std::size_t on) { flow_.legs[leg].after.push_back(on); }

    Flow finish(std::size_t final_leg) {
        flow_.trigger_leg = 0;
        flow_.final_leg = final_leg;
        return std::move(flow_);
    }

private:
    Flow flow_;
};

/// Binding updates to HA then CN, each waiting for the previous ack.
std::size_t add_bindings(FlowBuilder& b, std::size_t after) {
    const auto bu_ha = b.leg(MN, HA, BU, {after}, "binding update to HA");
    const auto back_ha = b.leg(HA, MN, BAck, {bu_ha}, "binding ack from HA");
    const auto bu_cn = b.leg(MN, CN, BU, {back_ha}, "binding update to CN");
    return b.leg(CN, MN, BAck, {bu_cn}, "binding ack from CN");
}

Flow standard_flow() {
    FlowBuilder b(SchemeId::Standard);
    const auto rtsol = b.leg(MN, NewAR, RtSol, {}, "router solicitation");
    const auto rtadv = b.leg(NewAR, MN, RtAdv, {rtsol}, "router advertisement, new CoA");
    auto prev = add_bindings(b, rtadv);

    // Full registration at the new P-CSCF: REGISTER, 401, REGISTER, 200 OK.
    prev = b.leg(MN, NewPCSCF, SipRegisterLeg, {prev}, "REGISTER");
    prev = b.leg(NewPCSCF, MN, SipRegisterOkLeg, {prev}, "401 Unauthorized");
    prev = b.leg(MN, NewPCSCF, SipRegisterLeg, {prev}, "REGISTER with credentials");
    prev = b.leg(NewPCSCF, MN, SipRegisterOkLeg, {prev}, "200 OK (REGISTER)");

    // Full re-invite with resource negotiation: four end-to-end round trips
    // standing in for INVITE/183/PRACK/UPDATE and their answers.
    for (std::size_t i = 0; i < 8; ++i) {
        const bool outbound = i % 2 == 0;
        prev = b.leg(outbound ? MN : CN, outbound ? CN : MN,
                     outbound ? SipInviteLeg : SipInviteOkLeg, {prev},
                     outbound ? "re-INVITE exchange, request" : "re-INVITE exchange, answer");
    }
    return b.finish(prev);
}

Flow predictive_flow(bool with_qos) {
    FlowBuilder b(with_qos ? SchemeId::QosPredictive : SchemeId::Predictive);
    constexpr auto C = Branch::Concurrent;

    const auto rtsolpr = b.leg(MN, OldAR, RtSolPr, {}, "proxy router solicitation");
    const auto prrtadv = b.leg(OldAR, MN, PrRtAdv, {rtsolpr}, "proxy router advertisement");
    const auto notify = b.leg(MN, OldPCSCF, MoveNotify, {prrtadv}, "move-notify with NAR address");
    const auto fbu = b.leg(MN, OldAR, FBU, {notify}, "fast binding update");
    const auto hi = b.leg(OldAR, NewAR, HI, {fbu}, "handover initiate");
    const auto hack = b.leg(NewAR, OldAR, HAck, {hi}, "handover acknowledge");
    const auto fback_mn = b.leg(OldAR, MN, FBack, {hack}, "fast binding ack to MN");
    b.leg(OldAR, NewAR, FBack, {hack}, "fast binding ack to NAR", C);
    const auto fna = b.leg(MN, NewAR, FNA, {fback_mn}, "fast neighbor advertisement");
    const auto bound = add_bindings(b, fna);

    const auto reg = b.leg(MN, NewPCSCF, SipRegisterLeg, {bound}, "short re-REGISTER");
    const auto reg_ok = b.leg(NewPCSCF, MN, SipRegisterOkLeg, {reg}, "200 OK (REGISTER)");
    const auto reinvite = b.leg(MN, CN, ReInviteLeg, {reg_ok}, "re-INVITE");
    const auto invite_ok = b.leg(CN, MN, SipInviteOkLeg, {reinvite}, "200 OK (re-INVITE)");

    // Context transfer runs alongside the MIPv6 handover.
    const auto ct_notify = b.leg(OldPCSCF, NewPCSCF, MoveNotify, {notify}, "move-notify to new P-CSCF", C);
    const auto ct_data = b.leg(OldPCSCF, NewPCSCF, CtData, {ct_notify}, "context transfer", C);
    const auto ct_ack = b.leg(NewPCSCF, OldPCSCF, CtAck, {ct_data}, "context transfer ack", C);
    const auto route = b.leg(OldPCSCF, SCSCF, RouteUpdate, {ct_ack}, "route update", C);
    const auto route_ok = b.leg(SCSCF, OldPCSCF, RouteUpdateOk, {route}, "200 OK (route update)", C);

    // The new P-CSCF answers the re-registration only once it holds the
    // context; the re-invite needs the S-CSCF route moved.
    b.gate(reg_ok, ct_data);
    b.gate(reinvite, route_ok);

    if (with_qos) {
        b.leg(NewPCSCF, NewAR, QosCtxForward, {ct_data}, "QoS context to NAR", C);
        b.leg(OldPCSCF, SCSCF, QosCtxForward, {ct_ack}, "QoS context to S-CSCF", C);
    }
    return b.finish(invite_ok);
}

Flow reactive_flow(bool with_qos) {
    FlowBuilder b(with_qos ? SchemeId::QosReactive : SchemeId::Reactive);
    constexpr auto C = Branch::Concurrent;

    const auto rtsolpr = b.leg(MN, OldAR, RtSolPr, {}, "proxy router solicitation");
    const auto prrtadv = b.leg(OldAR, MN, PrRtAdv, {rtsolpr}, "proxy router advertisement");
    const auto notify = b.leg(MN, NewPCSCF, MoveNotify, {prrtadv}, "move-notify with old P-CSCF address");
    const auto fna = b.leg(MN, NewAR, FNA, {notify}, "FNA carrying FBU");
    const auto fbu = b.leg(NewAR, OldAR, FBU, {fna}, "fast binding update via NAR");
    const auto fback = b.leg(OldAR, NewAR, FBack, {fbu}, "fast binding ack, forwarding starts");

    const auto ct_req = b.leg(NewPCSCF, OldPCSCF, CtRequest, {fback}, "context transfer request");
    std::size_t ct_ready = ct_req;
    if (with_qos) {
        const auto qreq = b.leg(OldPCSCF, OldAR, QosCtxRequest, {ct_req}, "QoS context request");
        ct_ready = b.leg(OldAR, OldPCSCF, QosCtxData, {qreq}, "QoS context from old AR");
    }
    const auto ct_data = b.leg(OldPCSCF, NewPCSCF, CtData, {ct_ready}, "context transfer");
    const auto ct_ack = b.leg(NewPCSCF, OldPCSCF, CtAck, {ct_data}, "context transfer ack");
    const auto route = b.leg(OldPCSCF, SCSCF, RouteUpdate, {ct_ack}, "route update");
    const auto route_ok = b.leg(SCSCF, OldPCSCF, RouteUpdateOk, {route}, "200 OK (route update)");

    const auto bound = add_bindings(b, route_ok);
    const auto reg = b.leg(MN, NewPCSCF, SipRegisterLeg, {bound}, "short re-REGISTER");
    const auto reg_ok = b.leg(NewPCSCF, MN, SipRegisterOkLeg, {reg, ct_data}, "200 OK (REGISTER)");
    const auto reinvite = b.leg(MN, CN, ReInviteLeg, {reg_ok}, "re-INVITE");
    const auto invite_ok = b.leg(CN, MN, SipInviteOkLeg, {reinvite}, "200 OK (re-INVITE)");

    if (with_qos) {
        b.leg(OldPCSCF, SCSCF, QosCtxForward, {ct_ack}, "QoS context to S-CSCF", C);
        b.leg(NewPCSCF, NewAR, QosCtxForward, {ct_data}, "QoS context to NAR", C);
    }
    return b.finish(invite_ok);
}

} // namespace

Flow define_flow(SchemeId scheme) {
    switch (scheme) {
    case SchemeId::Standard: return standard_flow();
    case SchemeId::Predictive: return predictive_flow(false);
    case SchemeId::QosPredictive: return predictive_flow(true);
    case SchemeId::Reactive: return reactive_flow(false);
    case SchemeId::QosReactive: return reactive_flow(true);
    }
    return {};
}

std::string ladder(const Flow& flow) {
    std::ostringstream out;
    for (const auto& leg : flow.legs) {
        out << "t=+" << delay_symbol(leg.src, leg.dst) << ' ' << ladder_label(leg.src) << " -> "
            << ladder_label(leg.dst) << " : " << to_string(leg.kind);
        if (leg.branch == Branch::Concurrent) {
            out << " [concurrent]";
        }
        out << '\n';
    }
    return out.str();
}

} // namespace imslab::schemes
