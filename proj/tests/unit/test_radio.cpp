#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "radionet/errors.hpp"
#include "radionet/protocols.hpp"
#include "radionet/radio.hpp"
#include "radionet/random.hpp"
#include "radionet/topology.hpp"

using namespace radionet;

namespace {

Packet data(NodeId sender, std::int64_t value) {
  return Packet{sender, PacketKind::data, Message{value, sender}};
}

// v = 0 in the middle of a path a(1) - v(0) - b(2).
Network three_path() { return Network::from_edges(3, {{1, 0}, {0, 2}}); }

}  // namespace

TEST(Collision, TwoNeighborsTransmitGivesSilence) {
  const auto net = three_path();
  Simulator sim(net, Mode::faithful);
  const std::vector<Transmission> sent = {{1, data(1, 5)}, {2, data(2, 6)}};
  EXPECT_TRUE(sim.step(Lane::single, sent).empty());
  EXPECT_EQ(sim.trace().collisions(), 1u);
}

TEST(Collision, SingleTransmitterIsHeard) {
  const auto net = three_path();
  Simulator sim(net, Mode::faithful);
  const std::vector<Transmission> sent = {{1, data(1, 5)}};
  const auto heard = sim.step(Lane::single, sent);
  ASSERT_EQ(heard.size(), 1u);
  EXPECT_EQ(heard[0].node, 0u);
  EXPECT_EQ(heard[0].packet.message.value, 5);
  EXPECT_EQ(heard[0].packet.sender, 1u);
}

TEST(Collision, TransmittersDoNotListen) {
  const auto net = three_path();
  Simulator sim(net, Mode::faithful);
  const std::vector<Transmission> sent = {{0, data(0, 1)}, {1, data(1, 2)}};
  const auto heard = sim.step(Lane::single, sent);
  // Node 2 hears 0; neither transmitter hears anything.
  ASSERT_EQ(heard.size(), 1u);
  EXPECT_EQ(heard[0].node, 2u);
}

TEST(Collision, DuplicateTransmitterRejected) {
  const auto net = three_path();
  Simulator sim(net, Mode::faithful);
  const std::vector<Transmission> sent = {{1, data(1, 5)}, {1, data(1, 6)}};
  EXPECT_THROW(sim.step(Lane::single, sent), ValidationError);
}

TEST(Collision, ExhaustiveSmallGraphsMatchBruteForce) {
  std::size_t rounds = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const auto& edges : oracle::connected_graphs(n)) {
      const auto net = Network::from_edges(n, edges);
      Simulator sim(net, Mode::faithful);
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<Transmission> sent;
        std::vector<bool> tx(n, false);
        for (NodeId v = 0; v < n; ++v) {
          if (mask >> v & 1) {
            tx[v] = true;
            sent.push_back({v, data(v, v)});
          }
        }
        const auto expect = oracle::receptions(n, edges, tx);
        std::map<NodeId, NodeId> got;
        for (const auto& r : sim.step(Lane::single, sent)) got[r.node] = r.packet.sender;
        EXPECT_EQ(got, expect);
        ++rounds;
      }
    }
  }
  EXPECT_GT(rounds, 0u);
}

TEST(Collision, DenseStepAgreesWithSparse) {
  const auto net = build_topology(TopologySpec::grid(3, 3));
  Simulator sparse(net, Mode::faithful);
  Simulator dense(net, Mode::faithful);
  std::vector<std::optional<Packet>> actions(net.size());
  actions[0] = data(0, 1);
  actions[4] = data(4, 2);
  actions[8] = data(8, 3);
  const std::vector<Transmission> sent = {{0, *actions[0]}, {4, *actions[4]}, {8, *actions[8]}};
  const auto heard = dense.step(Lane::single, actions);
  std::vector<std::optional<Packet>> expect(net.size());
  for (const auto& r : sparse.step(Lane::single, sent)) expect[r.node] = r.packet;
  for (NodeId v = 0; v < net.size(); ++v) {
    EXPECT_EQ(heard[v].has_value(), expect[v].has_value()) << v;
    if (heard[v] && expect[v]) { EXPECT_EQ(heard[v]->sender, expect[v]->sender); }
  }
  EXPECT_EQ(dense.trace().digest(), sparse.trace().digest());
}

TEST(CollisionChecker, AgreesWithEngineOnRandomRounds) {
  const auto net = build_topology(TopologySpec::gnp(30, 0.2, 4));
  Simulator sim(net, Mode::faithful);
  CollisionChecker checker(net);
  sim.add_observer(&checker);
  RandomStream rng(1, Purpose::generic);
  for (int r = 0; r < 200; ++r) {
    std::vector<Transmission> sent;
    for (NodeId v = 0; v < net.size(); ++v) {
      if (rng.bernoulli(0.2)) sent.push_back({v, data(v, v)});
    }
    sim.step(Lane::single, sent);
  }
  EXPECT_EQ(checker.rounds_checked(), 200u);
  EXPECT_EQ(checker.mismatches(), 0u);
}

TEST(Charge, ZeroChargeLeavesCountUnchanged) {
  const auto net = three_path();
  Simulator sim(net, Mode::charged);
  sim.charge(0, "noop");
  EXPECT_EQ(sim.trace().charged_rounds(), 0u);
}

TEST(Charge, IcpFormula) {
  const auto net = build_topology(TopologySpec::path(256));
  Simulator sim(net, Mode::charged);
  const int ell = 10;
  sim.charge(static_cast<std::uint64_t>(ell) + ceil_log2(256), "icp-out");
  EXPECT_EQ(sim.trace().charged_rounds(), 18u);
  EXPECT_EQ(sim.trace().tagged("icp-out"), 18u);
}

TEST(Charge, Additive) {
  const auto net = three_path();
  Simulator sim(net, Mode::charged);
  sim.charge(5, "a");
  sim.charge(7, "b");
  EXPECT_EQ(sim.trace().charged_rounds(), 12u);
  EXPECT_EQ(sim.now(), 12u);
}

TEST(Charge, RejectedInFaithfulMode) {
  const auto net = three_path();
  Simulator sim(net, Mode::faithful);
  EXPECT_THROW(sim.charge(1, "x"), ModeError);
}

TEST(Lanes, ParityViolationsCounted) {
  const auto net = three_path();
  Simulator sim(net, Mode::faithful);
  sim.step(Lane::main, std::span<const Transmission>{});        // round 0: even, fine
  sim.step(Lane::main, std::span<const Transmission>{});        // round 1: odd, violation
  sim.step(Lane::background, std::span<const Transmission>{});  // round 2: even, violation
  sim.step(Lane::background, std::span<const Transmission>{});  // round 3: fine
  EXPECT_EQ(sim.trace().lane_violations(), 2u);
}

TEST(Run, SilentProtocolTimesOut) {
  const auto net = three_path();
  SilentProtocol silent;
  const auto r = run(net, silent, 5, 0, TraceOptions{true});
  EXPECT_FALSE(r.success);
  EXPECT_TRUE(r.timed_out);
  EXPECT_EQ(r.trace.rounds(), 5u);
  ASSERT_EQ(r.trace.records().size(), 5u);
  for (const auto& rec : r.trace.records()) EXPECT_TRUE(rec.transmitters.empty());
}

namespace {

class OneRound final : public RoundProtocol {
 public:
  void begin(const Network&, std::uint64_t) override {}
  void actions(std::uint64_t, std::vector<Transmission>&) override {}
  void deliver(std::uint64_t, std::span<const Reception>) override { done_ = true; }
  [[nodiscard]] bool finished() const override { return done_; }

 private:
  bool done_ = false;
};

}  // namespace

TEST(Run, SingleNodeTerminatesAfterOneRound) {
  const auto net = Network::from_edges(1, {});
  OneRound p;
  const auto r = run(net, p, 10, 0);
  EXPECT_TRUE(r.success);
  EXPECT_EQ(r.trace.rounds(), 1u);
}

TEST(Run, RejectsZeroCap) {
  const auto net = three_path();
  SilentProtocol silent;
  EXPECT_THROW(run(net, silent, 0, 0), ValidationError);
}

TEST(Trace, CsvAndSummary) {
  const auto net = three_path();
  Simulator sim(net, Mode::faithful, TraceOptions{true});
  const std::vector<Transmission> sent = {{1, data(1, 5)}};
  sim.step(Lane::single, sent);
  std::ostringstream csv;
  sim.trace().write_csv(csv);
  EXPECT_EQ(csv.str(), "round,lane,transmitters,receptions,collisions\n0,single,1,0:1,0\n");
  sim.trace().success = true;
  EXPECT_EQ(trace_summary_json(sim.trace()), R"({"rounds":1,"charged_rounds":0,"success":true})");
}

TEST(Trace, DigestDependsOnContent) {
  const auto net = three_path();
  Simulator a(net, Mode::faithful);
  Simulator b(net, Mode::faithful);
  const std::vector<Transmission> s1 = {{1, data(1, 5)}};
  const std::vector<Transmission> s2 = {{2, data(2, 5)}};
  a.step(Lane::single, s1);
  b.step(Lane::single, s2);
  EXPECT_NE(a.trace().digest(), b.trace().digest());
}

TEST(Auditor, FlagsLeakedAndDecreasingAdoptions) {
  MessageAuditor audit(3);
  audit.on_adoption({0, Message{}, Message{5, 0}, AdoptionSource::origin, kNoNode});
  EXPECT_EQ(audit.conservation_violations(), 0u);
  // Node 1 claims to have heard 5 without any reception this round.
  audit.on_adoption({1, Message{}, Message{5, 0}, AdoptionSource::reception, kNoNode});
  EXPECT_EQ(audit.conservation_violations(), 1u);
  // Oracle hand-over from a node that holds the message is fine.
  audit.on_adoption({2, Message{}, Message{5, 0}, AdoptionSource::oracle, 0});
  EXPECT_EQ(audit.conservation_violations(), 1u);
  audit.on_adoption({0, Message{5, 0}, Message{3, 0}, AdoptionSource::origin, kNoNode});
  EXPECT_EQ(audit.monotonicity_violations(), 1u);
}
