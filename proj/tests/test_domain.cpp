#include <doctest.h>

#include "imslab/domain.hpp"

#include <functional>
#include <limits>
#include <vector>

using namespace imslab;

TEST_CASE("link_delay at the reference operating point") {
    const auto p = DelayParams::reference();
    CHECK(link_delay(p, NodeRole::MN, NodeRole::HA) == 116.0);
    CHECK(link_delay(p, NodeRole::OldAR, NodeRole::OldAR) == 0.0);
    // t_nar mirrors t_oar when not given explicitly.
    CHECK(link_delay(p, NodeRole::MN, NodeRole::NewAR) == 11.0);
    CHECK(link_delay(p, NodeRole::MN, NodeRole::NewPCSCF) == 15.0);
    CHECK(link_delay(p, NodeRole::OldPCSCF, NodeRole::NewPCSCF) == 7.0);
    CHECK(link_delay(p, NodeRole::OldPCSCF, NodeRole::SCSCF) == 10.0);
    CHECK(link_delay(p, NodeRole::HA, NodeRole::CN) == 114.0);
    CHECK(link_delay(p, NodeRole::OldPCSCF, NodeRole::OldAR) == 5.0);
    CHECK(link_delay(p, NodeRole::NewAR, NodeRole::NewPCSCF) == 5.0);
}

TEST_CASE("link_delay rejects pairs without a link") {
    const auto p = DelayParams::reference();
    CHECK_THROWS_AS(link_delay(p, NodeRole::SCSCF, NodeRole::CN), UnknownPair);
    CHECK_THROWS_AS(link_delay(p, NodeRole::HA, NodeRole::OldAR), UnknownPair);
    CHECK_THROWS_AS(delay_symbol(NodeRole::NewPCSCF, NodeRole::SCSCF), UnknownPair);
}

TEST_CASE("link_delay is symmetric over every defined pair") {
    DelayParams p;
    double v = 1.0;
    for (const auto& f : delay_fields()) {
        p.*f.member = v;
        v *= 2; // distinct value per field
    }
    std::size_t defined = 0;
    for (NodeRole a : all_roles()) {
        for (NodeRole b : all_roles()) {
            bool ab = true;
            double d = 0;
            try {
                d = link_delay(p, a, b);
            } catch (const UnknownPair&) {
                ab = false;
            }
            if (ab) {
                ++defined;
                CHECK(link_delay(p, b, a) == d);
                CHECK(delay_symbol(a, b) == delay_symbol(b, a));
            } else {
                CHECK_THROWS_AS(link_delay(p, b, a), UnknownPair);
            }
        }
    }
    // 8 self-links plus 12 undirected links, each counted twice.
    CHECK(defined == 8 + 2 * 12);
}

TEST_CASE("DelayParams field access and validation") {
    auto p = DelayParams::reference();
    CHECK(p.get("t_mc") == 128.0);
    p.set("t_mc", 50.0);
    CHECK(p.t_mc == 50.0);
    CHECK_THROWS_AS(p.get("t_xyz"), InvalidParamName);
    CHECK_THROWS_AS(p.set("T_mc", 1.0), InvalidParamName);

    CHECK_NOTHROW(p.validate());
    p.t_onp = -1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.t_onp = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(p.validate(), ConfigError);

    CHECK(delay_fields().size() == 12);
    const auto doubled = DelayParams::reference().scaled(2.0);
    CHECK(doubled.t_h == 232.0);
    CHECK(doubled.t_par == 10.0);
}

TEST_CASE("scheme names round-trip") {
    for (SchemeId s : all_schemes()) {
        REQUIRE(parse_scheme(to_string(s)).has_value());
        CHECK(*parse_scheme(to_string(s)) == s);
    }
    CHECK_FALSE(parse_scheme("Standard").has_value());
    CHECK_FALSE(parse_scheme("").has_value());
    CHECK_FALSE(uses_context_transfer(SchemeId::Standard));
    CHECK(uses_context_transfer(SchemeId::QosReactive));
    CHECK(carries_qos_context(SchemeId::QosPredictive));
    CHECK_FALSE(carries_qos_context(SchemeId::Reactive));
}

TEST_CASE("SessionContext equality is sensitive to every field") {
    const SessionContext base = reference_session();
    REQUIRE(base.well_formed());

    const SessionContext copy = base;
    CHECK(copy == base);
    CHECK(base == copy);
    const SessionContext third = copy;
    CHECK(third == base);

    const std::vector<std::function<void(SessionContext&)>> mutations{
        [](SessionContext& c) { c.registration_state = RegistrationState::Unregistered; },
        [](SessionContext& c) { c.session_state = SessionState::Terminated; },
        [](SessionContext& c) { c.final_network_entry_point += "x"; },
        [](SessionContext& c) { c.ue_address = "2001:db8:9::1"; },
        [](SessionContext& c) { c.public_user_id = "sip:bob@home.example.net"; },
        [](SessionContext& c) { c.private_user_id = "bob@home.example.net"; },
        [](SessionContext& c) { c.access_network_type = "UMTS"; },
    };
    for (const auto& mutate : mutations) {
        SessionContext changed = base;
        mutate(changed);
        CHECK_FALSE(changed == base);
        CHECK_FALSE(base == changed);
    }
}

TEST_CASE("SessionContext well-formedness") {
    SessionContext ctx = reference_session();
    ctx.public_user_id.clear();
    CHECK_FALSE(ctx.well_formed());
    ctx.session_state = SessionState::Terminated;
    CHECK(ctx.well_formed());
}

TEST_CASE("QoSContext reserved implies approved") {
    QoSContext q = reference_qos();
    CHECK(q.well_formed());
    q.approved = false;
    CHECK_FALSE(q.well_formed());
    q.reservation_state = ReservationState::Requested;
    CHECK(q.well_formed());
}
