#include "imslab/domain.hpp"

#include <array>
#include <cmath>
#include <utility>

namespace imslab {

namespace {

constexpr std::array<DelayField, 12> kFields{{
    {"t_mr", &DelayParams::t_mr},
    {"t_oar", &DelayParams::t_oar},
    {"t_nar", &DelayParams::t_nar},
    {"t_onar", &DelayParams::t_onar},
    {"t_op", &DelayParams::t_op},
    {"t_np", &DelayParams::t_np},
    {"t_onp", &DelayParams::t_onp},
    {"t_h", &DelayParams::t_h},
    {"t_ops", &DelayParams::t_ops},
    {"t_mc", &DelayParams::t_mc},
    {"t_hc", &DelayParams::t_hc},
    {"t_par", &DelayParams::t_par},
}};

constexpr std::array<NodeRole, kNodeRoleCount> kRoles{
    NodeRole::MN,       NodeRole::OldAR, NodeRole::NewAR, NodeRole::OldPCSCF,
    NodeRole::NewPCSCF, NodeRole::SCSCF, NodeRole::HA,    NodeRole::CN,
};

constexpr std::array<SchemeId, 5> kSchemes{
    SchemeId::Standard, SchemeId::Predictive, SchemeId::Reactive,
    SchemeId::QosPredictive, SchemeId::QosReactive,
};

struct Link {
    NodeRole a;
    NodeRole b;
    Millis DelayParams::*member;
    std::string_view symbol;
};

// Undirected links of the handover topology. P-CSCF <-> AR links share t_par.
constexpr std::array<Link, 12> kLinks{{
    {NodeRole::MN, NodeRole::OldAR, &DelayParams::t_oar, "T_oar"},
    {NodeRole::MN, NodeRole::NewAR, &DelayParams::t_nar, "T_nar"},
    {NodeRole::OldAR, NodeRole::NewAR, &DelayParams::t_onar, "T_onar"},
    {NodeRole::MN, NodeRole::OldPCSCF, &DelayParams::t_op, "T_op"},
    {NodeRole::MN, NodeRole::NewPCSCF, &DelayParams::t_np, "T_np"},
    {NodeRole::OldPCSCF, NodeRole::NewPCSCF, &DelayParams::t_onp, "T_onp"},
    {NodeRole::MN, NodeRole::HA, &DelayParams::t_h, "T_h"},
    {NodeRole::OldPCSCF, NodeRole::SCSCF, &DelayParams::t_ops, "T_ops"},
    {NodeRole::MN, NodeRole::CN, &DelayParams::t_mc, "T_mc"},
    {NodeRole::HA, NodeRole::CN, &DelayParams::t_hc, "T_hc"},
    {NodeRole::OldPCSCF, NodeRole::OldAR, &DelayParams::t_par, "T_par"},
    {NodeRole::NewPCSCF, NodeRole::NewAR, &DelayParams::t_par, "T_par"},
}};

const Link& find_link(NodeRole a, NodeRole b) {
    for (const auto& link : kLinks) {
        if ((link.a == a && link.b == b) || (link.a == b && link.b == a)) {
            return link;
        }
    }
    throw UnknownPair("no link between " + std::string(to_string(a)) + " and " +
                      std::string(to_string(b)));
}

const DelayField& find_field(std::string_view name) {
    for (const auto& f : kFields) {
        if (f.name == name) {
            return f;
        }
    }
    throw InvalidParamName("unknown delay parameter '" + std::string(name) + "'");
}

} // namespace

DelayParams DelayParams::reference() {
    DelayParams p;
    p.t_mr = 10;
    p.t_oar = 11;
    p.t_nar = 11;
    p.t_onar = 5;
    p.t_op = 15;
    p.t_np = 15;
    p.t_onp = 7;
    p.t_h = 116;
    p.t_ops = 10;
    p.t_mc = 128;
    p.t_hc = 114;
    p.t_par = kDefaultParDelay;
    return p;
}

DelayParams DelayParams::uniform(Millis value) {
    DelayParams p;
    for (const auto& f : kFields) {
        p.*f.member = value;
    }
    return p;
}

void DelayParams::validate() const {
    for (const auto& f : kFields) {
        const Millis v = this->*f.member;
        if (!std::isfinite(v) || v < 0) {
            throw ConfigError("delay parameter " + std::string(f.name) +
                              " must be finite and non-negative");
        }
    }
}

Millis DelayParams::get(std::string_view field) const { return this->*find_field(field).member; }

void DelayParams::set(std::string_view field, Millis value) { this->*find_field(field).member = value; }

DelayParams DelayParams::scaled(double factor) const {
    DelayParams p = *this;
    for (const auto& f : kFields) {
        p.*f.member *= factor;
    }
    return p;
}

std::span<const DelayField> delay_fields() { return kFields; }

bool is_delay_field(std::string_view name) {
    for (const auto& f : kFields) {
        if (f.name == name) {
            return true;
        }
    }
    return false;
}

std::span<const NodeRole> all_roles() { return kRoles; }

std::string_view to_string(NodeRole role) {
    switch (role) {
    case NodeRole::MN: return "MN";
    case NodeRole::OldAR: return "OldAR";
    case NodeRole::NewAR: return "NewAR";
    case NodeRole::OldPCSCF: return "OldPCSCF";
    case NodeRole::NewPCSCF: return "NewPCSCF";
    case NodeRole::SCSCF: return "SCSCF";
    case NodeRole::HA: return "HA";
    case NodeRole::CN: return "CN";
    }
    return "?";
}

std::string_view ladder_label(NodeRole role) {
    switch (role) {
    case NodeRole::MN: return "MN";
    case NodeRole::OldAR: return "oAR";
    case NodeRole::NewAR: return "nAR";
    case NodeRole::OldPCSCF: return "oP-CSCF";
    case NodeRole::NewPCSCF: return "nP-CSCF";
    case NodeRole::SCSCF: return "S-CSCF";
    case NodeRole::HA: return "HA";
    case NodeRole::CN: return "CN";
    }
    return "?";
}

std::string_view to_string(MessageKind kind) {
    switch (kind) {
    case MessageKind::RtSolPr: return "RtSolPr";
    case MessageKind::PrRtAdv: return "PrRtAdv";
    case MessageKind::RtSol: return "RtSol";
    case MessageKind::RtAdv: return "RtAdv";
    case MessageKind::FBU: return "FBU";
    case MessageKind::HI: return "HI";
    case MessageKind::HAck: return "HAck";
    case MessageKind::FBack: return "FBack";
    case MessageKind::FNA: return "FNA";
    case MessageKind::BU: return "BU";
    case MessageKind::BAck: return "BAck";
    case MessageKind::SipRegisterLeg: return "SipRegisterLeg";
    case MessageKind::SipRegisterOkLeg: return "SipRegisterOkLeg";
    case MessageKind::SipInviteLeg: return "SipInviteLeg";
    case MessageKind::SipInviteOkLeg: return "SipInviteOkLeg";
    case MessageKind::MoveNotify: return "MoveNotify";
    case MessageKind::CtRequest: return "CtRequest";
    case MessageKind::CtData: return "CtData";
    case MessageKind::CtAck: return "CtAck";
    case MessageKind::RouteUpdate: return "RouteUpdate";
    case MessageKind::RouteUpdateOk: return "RouteUpdateOk";
    case MessageKind::QosCtxRequest: return "QosCtxRequest";
    case MessageKind::QosCtxData: return "QosCtxData";
    case MessageKind::QosCtxForward: return "QosCtxForward";
    case MessageKind::ReInviteLeg: return "ReInviteLeg";
    }
    return "?";
}

std::span<const SchemeId> all_schemes() { return kSchemes; }

std::string_view to_string(SchemeId scheme) {
    switch (scheme) {
    case SchemeId::Standard: return "standard";
    case SchemeId::Predictive: return "predictive";
    case SchemeId::Reactive: return "reactive";
    case SchemeId::QosPredictive: return "qos-predictive";
    case SchemeId::QosReactive: return "qos-reactive";
    }
    return "?";
}

std::optional<SchemeId> parse_scheme(std::string_view name) {
    for (auto s : kSchemes) {
        if (to_string(s) == name) {
            return s;
        }
    }
    return std::nullopt;
}

bool uses_context_transfer(SchemeId scheme) { return scheme != SchemeId::Standard; }

bool carries_qos_context(SchemeId scheme) {
    return scheme == SchemeId::QosPredictive || scheme == SchemeId::QosReactive;
}

Millis link_delay(const DelayParams& params, NodeRole a, NodeRole b) {
    if (a == b) {
        return 0;
    }
    return params.*find_link(a, b).member;
}

std::string_view delay_symbol(NodeRole a, NodeRole b) {
    if (a == b) {
        return "0";
    }
    return find_link(a, b).symbol;
}

bool SessionContext::well_formed() const {
    if (session_state != SessionState::Active) {
        return true;
    }
    return registration_state == RegistrationState::Registered &&
           !final_network_entry_point.empty() && !ue_address.empty() &&
           !public_user_id.empty() && !private_user_id.empty() && !access_network_type.empty();
}

SessionContext reference_session() {
    SessionContext ctx;
    ctx.registration_state = RegistrationState::Registered;
    ctx.session_state = SessionState::Active;
    ctx.final_network_entry_point = "sip:scscf.home.example.net";
    ctx.ue_address = "2001:db8:1::100";
    ctx.public_user_id = "sip:alice@home.example.net";
    ctx.private_user_id = "alice@home.example.net";
    ctx.access_network_type = "WiFi";
    return ctx;
}

QoSContext reference_qos() {
    QoSContext qos;
    qos.qos_proposal = {{"audio", 64.0}, {"video", 384.0}};
    qos.approved = true;
    qos.reservation_state = ReservationState::Reserved;
    return qos;
}

} // namespace imslab
