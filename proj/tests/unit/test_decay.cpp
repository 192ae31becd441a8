#include <gtest/gtest.h>

#include "oracles.hpp"
#include "radionet/errors.hpp"
#include "radionet/harness.hpp"
#include "radionet/primitives.hpp"
#include "radionet/topology.hpp"

using namespace radionet;

TEST(CeilLog2, SmallValues) {
  EXPECT_EQ(ceil_log2(1), 1);
  EXPECT_EQ(ceil_log2(2), 1);
  EXPECT_EQ(ceil_log2(16), 4);
  EXPECT_EQ(ceil_log2(17), 5);
  EXPECT_EQ(ceil_log2(1024), 10);
}

TEST(Decay, NoParticipantsMeansSilence) {
  const auto net = build_topology(TopologySpec::path(16));
  const std::vector<NodeId> listeners = {0, 1, 2, 3};
  EXPECT_TRUE(decay_round(net, {}, listeners, 1).empty());
}

TEST(Decay, EpochLengthIsCeilLog2) {
  const auto net = build_topology(TopologySpec::path(16));
  Simulator sim(net, Mode::faithful);
  const std::vector<DecayParticipant> p = {{0, Message{1, 0}}};
  const std::vector<NodeId> l = {1};
  decay_round(sim, Lane::single, p, l, 3);
  EXPECT_EQ(sim.trace().rounds(), 4u);
}

TEST(Decay, ParticipantCannotListen) {
  const auto net = build_topology(TopologySpec::path(4));
  const std::vector<DecayParticipant> p = {{1, Message{1, 1}}};
  const std::vector<NodeId> l = {1};
  EXPECT_THROW(decay_round(net, p, l, 0), ValidationError);
}

TEST(Decay, SingleParticipantClosedForm) {
  // n = 16 gives 4 steps; exact probability is 709/1024.
  const double exact = oracle::decay_single_hear(4);
  ASSERT_DOUBLE_EQ(exact, 709.0 / 1024.0);
  const auto net = build_topology(TopologySpec::path(16));
  const std::vector<DecayParticipant> p = {{0, Message{7, 0}}};
  const std::vector<NodeId> l = {1};
  const int trials = 100000;
  int heard = 0;
  for (int t = 0; t < trials; ++t) {
    const auto r = decay_round(net, p, l, static_cast<std::uint64_t>(t));
    if (!r.empty()) {
      EXPECT_EQ(r[0].message.value, 7);
      ++heard;
    }
  }
  EXPECT_NEAR(heard / static_cast<double>(trials), exact, 0.01);
}

TEST(Decay, ListenerHearsHighestMessage) {
  // Star hub listens to four leaves over many epochs; it only ever reports a
  // message some leaf actually sent.
  const auto net = build_topology(TopologySpec::star(5));
  const std::vector<DecayParticipant> p = {
      {1, Message{10, 1}}, {2, Message{20, 2}}, {3, Message{30, 3}}, {4, Message{40, 4}}};
  const std::vector<NodeId> l = {0};
  for (std::uint64_t s = 0; s < 200; ++s) {
    for (const auto& r : decay_round(net, p, l, s)) {
      EXPECT_EQ(r.message.value, 10 * static_cast<std::int64_t>(r.message.origin));
    }
  }
}

TEST(Decay, FrozenReceptionFloorOnStar) {
  const auto c = load_constants(std::string(RADIONET_CONFIG_DIR) + "/frozen_constants.json");
  // Hub of a 32-leaf star with 8 active leaves, an instance outside the
  // calibration battery.
  const auto net = build_topology(TopologySpec::star(33));
  std::vector<DecayParticipant> p;
  for (NodeId v = 1; v <= 8; ++v) p.push_back({v, Message{v, v}});
  const std::vector<NodeId> l = {0};
  const int trials = 4000;
  int heard = 0;
  for (int t = 0; t < trials; ++t) heard += decay_round(net, p, l, 1000 + t).empty() ? 0 : 1;
  EXPECT_GE(heard / static_cast<double>(trials), c.p0);
}

TEST(Decay, CoinsAreOrderIndependent) {
  EXPECT_EQ(decay_coin(5, 3, 10, 2), decay_coin(5, 3, 10, 2));
  int differ = 0;
  for (NodeId v = 0; v < 64; ++v) differ += decay_coin(5, v, 10, 1) != decay_coin(6, v, 10, 1);
  EXPECT_GT(differ, 0);
}
