#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace imslab {

/// Simulation time and link delays, in milliseconds.
using Millis = double;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A link lookup for two roles that share no modeled link.
class UnknownPair : public Error {
public:
    using Error::Error;
};

/// A parameter file or CLI option that cannot be turned into a valid config.
class ConfigError : public Error {
public:
    using Error::Error;
};

class InvalidParamName : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// ---------------------------------------------------------------------------
// Delay parameters
// ---------------------------------------------------------------------------

/// One-way link delays of the handover model. Every delay serves both
/// directions of its node pair.
///
/// t_mr and t_hc are carried for completeness of the parameter set; no
/// handover flow traverses them.
struct DelayParams {
    Millis t_mr = 0;   ///< MN <-> radio access network
    Millis t_oar = 0;  ///< MN <-> old access router
    Millis t_nar = 0;  ///< MN <-> new access router
    Millis t_onar = 0; ///< old AR <-> new AR
    Millis t_op = 0;   ///< MN <-> old P-CSCF
    Millis t_np = 0;   ///< MN <-> new P-CSCF
    Millis t_onp = 0;  ///< old P-CSCF <-> new P-CSCF
    Millis t_h = 0;    ///< MN <-> HA
    Millis t_ops = 0;  ///< old P-CSCF <-> S-CSCF
    Millis t_mc = 0;   ///< MN <-> CN
    Millis t_hc = 0;   ///< HA <-> CN
    Millis t_par = 0;  ///< P-CSCF <-> its local AR

    /// The reference operating point: t_mr=10, t_oar=11, t_onar=5, t_op=15,
    /// t_onp=7, t_ops=10, t_h=116, t_mc=128, t_hc=114, with the symmetric
    /// completions t_nar=t_oar, t_np=t_op and t_par=5.
    static DelayParams reference();

    /// Every field set to `value`.
    static DelayParams uniform(Millis value);

    /// Throws ConfigError unless every field is finite and non-negative.
    void validate() const;

    Millis get(std::string_view field) const;
    void set(std::string_view field, Millis value);

    DelayParams scaled(double factor) const;

    friend bool operator==(const DelayParams&, const DelayParams&) = default;
};

struct DelayField {
    std::string_view name;
    Millis DelayParams::*member;
};

/// All DelayParams fields in declaration order.
std::span<const DelayField> delay_fields();

bool is_delay_field(std::string_view name);

/// Default value of t_par when a parameter file omits it.
inline constexpr Millis kDefaultParDelay = 5.0;

// ---------------------------------------------------------------------------
// Node roles and messages
// ---------------------------------------------------------------------------

enum class NodeRole : std::uint8_t { MN, OldAR, NewAR, OldPCSCF, NewPCSCF, SCSCF, HA, CN };

inline constexpr std::size_t kNodeRoleCount = 8;

std::span<const NodeRole> all_roles();
std::string_view to_string(NodeRole role);
/// Short label used in ladder diagrams, e.g. "oP-CSCF".
std::string_view ladder_label(NodeRole role);

enum class MessageKind : std::uint8_t {
    RtSolPr,
    PrRtAdv,
    RtSol,
    RtAdv,
    FBU,
    HI,
    HAck,
    FBack,
    FNA,
    BU,
    BAck,
    SipRegisterLeg,
    SipRegisterOkLeg,
    SipInviteLeg,
    SipInviteOkLeg,
    MoveNotify,
    CtRequest,
    CtData,
    CtAck,
    RouteUpdate,
    RouteUpdateOk,
    QosCtxRequest,
    QosCtxData,
    QosCtxForward,
    ReInviteLeg,
};

std::string_view to_string(MessageKind kind);

enum class SchemeId : std::uint8_t { Standard, Predictive, Reactive, QosPredictive, QosReactive };

std::span<const SchemeId> all_schemes();
/// CLI spelling: "standard", "predictive", "reactive", "qos-predictive", "qos-reactive".
std::string_view to_string(SchemeId scheme);
std::optional<SchemeId> parse_scheme(std::string_view name);
/// True for every scheme that relocates session state between P-CSCFs.
bool uses_context_transfer(SchemeId scheme);
bool carries_qos_context(SchemeId scheme);

/// One-way delay of the link between `a` and `b`; 0 when a == b.
/// Throws UnknownPair for roles that share no link.
Millis link_delay(const DelayParams& params, NodeRole a, NodeRole b);

/// The symbol naming the link delay, e.g. "T_op"; "0" for a self-link.
std::string_view delay_symbol(NodeRole a, NodeRole b);

// ---------------------------------------------------------------------------
// Session and QoS contexts
// ---------------------------------------------------------------------------

enum class RegistrationState : std::uint8_t { Registered, Unregistered };
enum class SessionState : std::uint8_t { Active, Terminated };

/// Session state relocated from the old to the new P-CSCF.
struct SessionContext {
    RegistrationState registration_state = RegistrationState::Unregistered;
    SessionState session_state = SessionState::Terminated;
    std::string final_network_entry_point;
    std::string ue_address;
    std::string public_user_id;
    std::string private_user_id;
    std::string access_network_type;

    /// Active sessions must have every field populated.
    bool well_formed() const;

    friend bool operator==(const SessionContext&, const SessionContext&) = default;
};

struct MediaBudget {
    std::string media_class;
    double bandwidth_kbps = 0;

    friend bool operator==(const MediaBudget&, const MediaBudget&) = default;
};

enum class ReservationState : std::uint8_t { None, Requested, Reserved };

struct QoSContext {
    std::vector<MediaBudget> qos_proposal;
    bool approved = false;
    ReservationState reservation_state = ReservationState::None;

    /// Reserved implies approved.
    bool well_formed() const { return reservation_state != ReservationState::Reserved || approved; }

    friend bool operator==(const QoSContext&, const QoSContext&) = default;
};

/// The session the handover scenarios start from: a registered, active
/// voice+video call attached through the old access network.
SessionContext reference_session();
QoSContext reference_qos();

} // namespace imslab
