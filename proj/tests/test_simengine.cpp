#include <doctest.h>

#include "imslab/simengine.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace imslab;
using namespace imslab::sim;

namespace {

void ignore(Engine&, const Event&) {}

Engine engine_with_sinks(DelayParams p, std::size_t cap = kDefaultEventCap) {
    Engine e(p, cap);
    for (NodeRole r : all_roles()) {
        e.on(r, ignore);
    }
    return e;
}

} // namespace

TEST_CASE("send schedules delivery after the link delay") {
    auto e = engine_with_sinks(DelayParams::reference());
    const auto bu = e.send(NodeRole::MN, NodeRole::HA, MessageKind::BU);
    CHECK(bu.sent_at == 0.0);
    CHECK(bu.deliver_at == 116.0);
    CHECK_FALSE(bu.parent_seq.has_value());

    const auto self = e.send(NodeRole::MN, NodeRole::MN, MessageKind::RtSol);
    CHECK(self.deliver_at == 0.0);
    CHECK(self.seq == bu.seq + 1);

    CHECK_THROWS_AS(e.send(NodeRole::SCSCF, NodeRole::CN, MessageKind::CtData), UnknownPair);
}

TEST_CASE("send from a handler at t=10 delivers at t=17") {
    auto p = DelayParams::reference();
    p.t_op = 10;
    Engine e(p);
    for (NodeRole r : all_roles()) {
        e.on(r, ignore);
    }
    Event forwarded;
    e.on(NodeRole::OldPCSCF, [&](Engine& eng, const Event& ev) {
        CHECK(eng.now() == 10.0);
        forwarded = eng.send(NodeRole::OldPCSCF, NodeRole::NewPCSCF, MessageKind::CtData);
        CHECK(forwarded.parent_seq == ev.seq);
    });
    e.send(NodeRole::MN, NodeRole::OldPCSCF, MessageKind::MoveNotify);
    const auto trace = e.run_until_quiescent();
    CHECK(forwarded.sent_at == 10.0);
    CHECK(forwarded.deliver_at == 17.0);
    REQUIRE(trace.delivered.size() == 2);
    CHECK(trace.terminal_clock == 17.0);
}

TEST_CASE("empty run") {
    auto e = engine_with_sinks(DelayParams::reference());
    const auto trace = e.run_until_quiescent();
    CHECK(trace.delivered.empty());
    CHECK(trace.scheduled == 0);
    CHECK(trace.terminal_clock == 0.0);
}

TEST_CASE("binding update round trip") {
    auto e = engine_with_sinks(DelayParams::reference());
    e.on(NodeRole::HA, [](Engine& eng, const Event& ev) {
        if (ev.kind == MessageKind::BU) {
            eng.send(NodeRole::HA, NodeRole::MN, MessageKind::BAck);
        }
    });
    e.send(NodeRole::MN, NodeRole::HA, MessageKind::BU);
    const auto trace = e.run_until_quiescent();
    REQUIRE(trace.delivered.size() == 2);
    CHECK(trace.terminal_clock == 232.0);
    CHECK(trace.delivered[1].kind == MessageKind::BAck);
    CHECK(trace.delivered[1].parent_seq == trace.delivered[0].seq);
}

TEST_CASE("equal timestamps dispatch in scheduling order") {
    auto e = engine_with_sinks(DelayParams::uniform(5));
    const auto a = e.send(NodeRole::MN, NodeRole::HA, MessageKind::BU);
    const auto b = e.send(NodeRole::MN, NodeRole::CN, MessageKind::BU);
    const auto c = e.send(NodeRole::MN, NodeRole::OldAR, MessageKind::RtSolPr);
    const auto trace = e.run_until_quiescent();
    REQUIRE(trace.delivered.size() == 3);
    CHECK(trace.delivered[0].seq == a.seq);
    CHECK(trace.delivered[1].seq == b.seq);
    CHECK(trace.delivered[2].seq == c.seq);
}

TEST_CASE("missing handler is a HandlerPanic") {
    Engine e(DelayParams::reference());
    e.send(NodeRole::MN, NodeRole::HA, MessageKind::BU);
    CHECK_THROWS_AS(e.run_until_quiescent(), HandlerPanic);
}

TEST_CASE("event cap stops a runaway ping-pong") {
    auto e = engine_with_sinks(DelayParams::uniform(1), 50);
    e.on(NodeRole::HA, [](Engine& eng, const Event&) { eng.send(NodeRole::HA, NodeRole::MN, MessageKind::BAck); });
    e.on(NodeRole::MN, [](Engine& eng, const Event&) { eng.send(NodeRole::MN, NodeRole::HA, MessageKind::BU); });
    e.send(NodeRole::MN, NodeRole::HA, MessageKind::BU);
    CHECK_THROWS_AS(e.run_until_quiescent(), NonTermination);
}

TEST_CASE("critical path of a simple chain") {
    DelayParams p;
    p.t_oar = 3;  // MN -> OldAR
    p.t_onar = 4; // OldAR -> NewAR
    auto e = engine_with_sinks(p);
    e.on(NodeRole::OldAR, [](Engine& eng, const Event&) {
        eng.send(NodeRole::OldAR, NodeRole::NewAR, MessageKind::HI);
    });
    e.send(NodeRole::MN, NodeRole::OldAR, MessageKind::FBU);
    const auto trace = e.run_until_quiescent();
    const auto last = trace.delivered.back();
    const auto path = critical_path(trace, last.seq);
    REQUIRE(path.size() == 2);
    CHECK(path[0].kind == MessageKind::FBU);
    CHECK(path[1].kind == MessageKind::HI);
    double sum = 0;
    for (const auto& ev : path) {
        sum += link_delay(p, ev.src, ev.dst);
    }
    CHECK(sum == 7.0);
    CHECK(last.deliver_at - path.front().sent_at == 7.0);
}

TEST_CASE("critical path rejects broken chains") {
    Trace t;
    Event orphan;
    orphan.seq = 4;
    orphan.parent_seq = 2;
    t.delivered.push_back(orphan);
    CHECK_THROWS_AS(critical_path(t, 4), OrphanEvent);
    CHECK_THROWS_AS(critical_path(t, 99), OrphanEvent);
}

TEST_CASE("random fan-out obeys engine invariants") {
    // Nodes forward to random neighbours with a hop budget; checks clock
    // monotonicity, causality, conservation, seq uniqueness and determinism.
    const std::vector<std::pair<NodeRole, NodeRole>> links{
        {NodeRole::MN, NodeRole::OldAR},    {NodeRole::MN, NodeRole::NewAR},
        {NodeRole::OldAR, NodeRole::NewAR}, {NodeRole::MN, NodeRole::HA},
        {NodeRole::MN, NodeRole::CN},       {NodeRole::OldPCSCF, NodeRole::NewPCSCF},
        {NodeRole::MN, NodeRole::OldPCSCF}, {NodeRole::OldPCSCF, NodeRole::SCSCF},
    };
    auto run_once = [&](std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(0.0, 50.0);
        DelayParams p;
        for (const auto& f : delay_fields()) {
            p.*f.member = std::floor(dist(rng)); // integer delays force timestamp ties
        }
        Engine e(p);
        std::mt19937_64 fan(seed + 1);
        std::size_t budget = 300;
        auto handler = [&](Engine& eng, const Event& ev) {
            for (int k = 0; k < 2 && budget > 0; ++k) {
                std::vector<NodeRole> peers;
                for (auto [a, b] : links) {
                    if (a == ev.dst) peers.push_back(b);
                    if (b == ev.dst) peers.push_back(a);
                }
                if (peers.empty()) return;
                --budget;
                eng.send(ev.dst, peers[fan() % peers.size()], MessageKind::CtData);
            }
        };
        for (NodeRole r : all_roles()) {
            e.on(r, handler);
        }
        e.send(NodeRole::MN, NodeRole::OldAR, MessageKind::RtSolPr);
        return e.run_until_quiescent();
    };

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto trace = run_once(seed);
        CHECK(trace.scheduled == trace.delivered.size() + trace.dropped.size());
        CHECK(trace.dropped.empty());
        std::set<Seq> seen;
        for (std::size_t i = 0; i < trace.delivered.size(); ++i) {
            const auto& ev = trace.delivered[i];
            CHECK(seen.insert(ev.seq).second);
            CHECK(ev.deliver_at >= ev.sent_at);
            if (i > 0) {
                const auto& prev = trace.delivered[i - 1];
                CHECK((prev.deliver_at < ev.deliver_at ||
                       (prev.deliver_at == ev.deliver_at && prev.seq < ev.seq)));
            }
            if (ev.parent_seq) {
                const Event* parent = trace.find(*ev.parent_seq);
                REQUIRE(parent != nullptr);
                CHECK(parent->deliver_at <= ev.deliver_at);
                CHECK(parent->deliver_at == ev.sent_at);
            }
        }
        CHECK(to_jsonl(trace) == to_jsonl(run_once(seed)));
    }
}

TEST_CASE("JSON Lines export keeps the key order") {
    auto e = engine_with_sinks(DelayParams::reference());
    e.on(NodeRole::HA, [](Engine& eng, const Event&) { eng.send(NodeRole::HA, NodeRole::MN, MessageKind::BAck); });
    e.send(NodeRole::MN, NodeRole::HA, MessageKind::BU);
    const auto jsonl = to_jsonl(e.run_until_quiescent());
    CHECK(jsonl ==
          "{\"sent_at\":0.0,\"deliver_at\":116.0,\"src\":\"MN\",\"dst\":\"HA\",\"kind\":\"BU\","
          "\"parent_seq\":null,\"seq\":0}\n"
          "{\"sent_at\":116.0,\"deliver_at\":232.0,\"src\":\"HA\",\"dst\":\"MN\",\"kind\":\"BAck\","
          "\"parent_seq\":0,\"seq\":1}\n");
}
