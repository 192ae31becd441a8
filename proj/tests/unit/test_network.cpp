#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

#include "radionet/errors.hpp"
#include "radionet/network.hpp"
#include "radionet/topology.hpp"

using namespace radionet;

namespace {

// Floyd-Warshall over an adjacency matrix built from the raw edge list.
std::vector<std::vector<int>> all_pairs(std::size_t n, const std::vector<Edge>& edges) {
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : edges) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

int oracle_diameter(const Network& net) {
  const auto d = all_pairs(net.size(), net.edges());
  int best = 0;
  for (const auto& row : d) best = std::max(best, *std::max_element(row.begin(), row.end()));
  return best;
}

}  // namespace

TEST(Topology, PathOfFour) {
  const auto net = build_topology(TopologySpec::path(4));
  EXPECT_EQ(net.edge_count(), 3u);
  EXPECT_EQ(net.diameter(), 3);
}

TEST(Topology, StarOfFive) {
  const auto net = build_topology(TopologySpec::star(5));
  EXPECT_EQ(net.edge_count(), 4u);
  EXPECT_EQ(net.diameter(), 2);
}

TEST(Topology, GridThreeByThreeMatchesAllPairsOracle) {
  const auto net = build_topology(TopologySpec::grid(3, 3));
  EXPECT_EQ(net.edge_count(), 12u);
  EXPECT_EQ(net.diameter(), 4);
  EXPECT_EQ(oracle_diameter(net), 4);
}

TEST(Topology, DiameterAgreesWithOracleOnRandomGraphs) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto tree = build_topology(TopologySpec::random_tree(40, seed));
    EXPECT_EQ(tree.edge_count(), 39u);
    EXPECT_EQ(tree.diameter(), oracle_diameter(tree));
    const auto gnp = build_topology(TopologySpec::gnp(40, 0.15, seed));
    EXPECT_EQ(gnp.diameter(), oracle_diameter(gnp));
    EXPECT_EQ(compute_diameter(gnp), gnp.diameter());
  }
}

TEST(Topology, DeterministicInSeed) {
  const auto a = build_topology(TopologySpec::random_tree(100, 3));
  const auto b = build_topology(TopologySpec::random_tree(100, 3));
  const auto c = build_topology(TopologySpec::random_tree(100, 4));
  EXPECT_EQ(a.edges(), b.edges());
  EXPECT_NE(a.edges(), c.edges());
  EXPECT_EQ(network_to_json(build_topology(TopologySpec::gnp(60, 0.1, 9))),
            network_to_json(build_topology(TopologySpec::gnp(60, 0.1, 9))));
}

TEST(Topology, CycleAndLabels) {
  const auto net = build_topology(TopologySpec::cycle(10));
  EXPECT_EQ(net.edge_count(), 10u);
  EXPECT_EQ(net.diameter(), 5);
  EXPECT_EQ(TopologySpec::grid(32, 32).label(), "grid-32x32");
  EXPECT_EQ(TopologySpec::path(1024).label(), "path-1024");
  EXPECT_THROW(build_topology(TopologySpec::cycle(2)), ValidationError);
}

TEST(Topology, DisconnectedGnpGivesUp) {
  EXPECT_THROW(build_topology(TopologySpec::gnp(50, 0.001, 1)), GenerationError);
}

TEST(Network, RejectsInvalidEdgeLists) {
  EXPECT_THROW(Network::from_edges(3, {{0, 1}}), ValidationError);          // disconnected
  EXPECT_THROW(Network::from_edges(2, {{0, 0}, {0, 1}}), ValidationError);  // self-loop
  EXPECT_THROW(Network::from_edges(2, {{0, 1}, {1, 0}}), ValidationError);  // duplicate
  EXPECT_THROW(Network::from_edges(2, {{0, 2}}), ValidationError);          // out of range
  EXPECT_THROW(Network::from_edges(0, {}), ValidationError);
}

TEST(Network, SingleNode) {
  const auto net = Network::from_edges(1, {});
  EXPECT_EQ(net.size(), 1u);
  EXPECT_EQ(net.diameter(), 0);
}

TEST(Network, JsonRoundTrip) {
  const auto net = build_topology(TopologySpec::grid(4, 5));
  const auto text = network_to_json(net);
  const auto back = network_from_json(text);
  EXPECT_EQ(back.edges(), net.edges());
  EXPECT_EQ(back.diameter(), net.diameter());
  EXPECT_EQ(back.fingerprint(), net.fingerprint());
  EXPECT_EQ(network_to_json(back), text);
}

TEST(Network, JsonRejectsWrongDiameter) {
  EXPECT_THROW(network_from_json(R"({"n":3,"diameter":1,"edges":[[0,1],[1,2]]})"), ValidationError);
  EXPECT_THROW(network_from_json("not json"), ValidationError);
}

TEST(Layers, PathEndpoint) {
  const auto l = bfs_layers(build_topology(TopologySpec::path(4)), 0);
  EXPECT_EQ(l.counts, (std::vector<std::uint64_t>{1, 1, 1, 1}));
}

TEST(Layers, StarCenter) {
  const auto l = bfs_layers(build_topology(TopologySpec::star(5)), 0);
  EXPECT_EQ(l.counts, (std::vector<std::uint64_t>{1, 4, 0}));  // padded to D = 2
}

TEST(Layers, GridCornerMatchesOracle) {
  const auto net = build_topology(TopologySpec::grid(3, 3));
  const auto l = bfs_layers(net, 0);
  EXPECT_EQ(l.counts, (std::vector<std::uint64_t>{1, 2, 3, 2, 1}));
  const auto d = all_pairs(net.size(), net.edges());
  std::vector<std::uint64_t> counts(5, 0);
  for (std::size_t v = 0; v < net.size(); ++v) ++counts[static_cast<std::size_t>(d[0][v])];
  EXPECT_EQ(l.counts, counts);
}

TEST(ShortestPath, EndpointsOfPathAndGrid) {
  const auto path = build_topology(TopologySpec::path(6));
  EXPECT_EQ(shortest_path(path, 0, 5), (std::vector<NodeId>{0, 1, 2, 3, 4, 5}));
  const auto grid = build_topology(TopologySpec::grid(4, 4));
  const auto p = shortest_path(grid, 0, 15);
  ASSERT_EQ(p.size(), 7u);
  const auto dist = bfs_distances(grid, 0);
  for (std::size_t k = 0; k < p.size(); ++k) EXPECT_EQ(dist[p[k]], static_cast<int>(k));
}
