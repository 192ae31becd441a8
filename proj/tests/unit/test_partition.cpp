#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "radionet/analysis.hpp"
#include "radionet/errors.hpp"
#include "radionet/primitives.hpp"
#include "radionet/topology.hpp"

using namespace radionet;

namespace {

std::vector<std::vector<int>> bfs_all(const Network& net) {
  std::vector<std::vector<int>> d;
  for (NodeId v = 0; v < net.size(); ++v) d.push_back(bfs_distances(net, v));
  return d;
}

// center(v) by direct argmax over all nodes, smaller id on ties.
std::vector<NodeId> argmax_centers(const Network& net, const std::vector<double>& delta) {
  const auto d = bfs_all(net);
  std::vector<NodeId> out(net.size());
  for (NodeId v = 0; v < net.size(); ++v) {
    NodeId best = 0;
    double score = delta[0] - d[0][v];
    for (NodeId u = 1; u < net.size(); ++u) {
      const double s = delta[u] - d[u][v];
      if (s > score) {
        score = s;
        best = u;
      }
    }
    out[v] = best;
  }
  return out;
}

// Connectivity of each cluster in the induced subgraph, checked by BFS.
bool clusters_connected(const Network& net, const std::vector<NodeId>& center) {
  std::set<NodeId> centers(center.begin(), center.end());
  for (const NodeId c : centers) {
    std::vector<char> seen(net.size(), 0);
    std::queue<NodeId> q;
    q.push(c);
    seen[c] = 1;
    while (!q.empty()) {
      const NodeId v = q.front();
      q.pop();
      for (const NodeId w : net.neighbors(v)) {
        if (!seen[w] && center[w] == c) {
          seen[w] = 1;
          q.push(w);
        }
      }
    }
    for (NodeId v = 0; v < net.size(); ++v) {
      if (center[v] == c && !seen[v]) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Partition, SingleNodeIsItsOwnCenter) {
  const auto net = Network::from_edges(1, {});
  for (double beta : {0.01, 0.5, 1.0}) {
    const auto c = partition(net, beta, 3);
    EXPECT_EQ(c.center[0], 0u);
    EXPECT_EQ(c.size(), 1u);
    EXPECT_EQ(c.max_strong_diameter(), 0);
  }
}

TEST(Partition, RejectsBetaOutOfRange) {
  const auto net = build_topology(TopologySpec::path(4));
  EXPECT_THROW(partition(net, 0.0, 1), ValidationError);
  EXPECT_THROW(partition(net, 1.5, 1), ValidationError);
  EXPECT_THROW(edge_cut_rate(net, 0.1, 0, 1), ValidationError);
}

TEST(Partition, MatchesArgmaxOracle) {
  std::vector<Network> nets;
  nets.push_back(build_topology(TopologySpec::grid(6, 7)));
  nets.push_back(build_topology(TopologySpec::random_tree(60, 2)));
  nets.push_back(build_topology(TopologySpec::gnp(50, 0.08, 5)));
  for (const auto& net : nets) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const double beta = seed % 2 ? 0.3 : 0.05;
      const auto shifts = draw_shifts(net.size(), beta, seed);
      const auto c = partition(net, beta, seed);
      EXPECT_EQ(c.center, argmax_centers(net, shifts));
      EXPECT_TRUE(clusters_connected(net, c.center));
      for (NodeId v = 0; v < net.size(); ++v) EXPECT_EQ(c.center[c.center[v]], c.center[v]);
    }
  }
}

TEST(Partition, TiesGoToSmallerId) {
  // Node 1 scores 0 for itself and for both neighbors; node 0 wins.
  const auto net = build_topology(TopologySpec::path(3));
  const auto c = partition_with_shifts(net, 1.0, {1.0, 0.0, 1.0});
  EXPECT_EQ(c.center, (std::vector<NodeId>{0, 0, 2}));
  EXPECT_EQ(argmax_centers(net, {1.0, 0.0, 1.0}), c.center);
}

TEST(Partition, IsExactPartition) {
  const auto net = build_topology(TopologySpec::grid(10, 10));
  const auto c = partition(net, 0.2, 11);
  std::vector<int> hits(net.size(), 0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    for (const NodeId v : c.members[k]) {
      ++hits[v];
      EXPECT_EQ(c.center[v], c.centers[k]);
      EXPECT_EQ(c.cluster_of[v], k);
    }
  }
  for (const int h : hits) EXPECT_EQ(h, 1);
  EXPECT_TRUE(std::is_sorted(c.centers.begin(), c.centers.end()));
}

TEST(Partition, StrongDiameterMatchesInducedBfs) {
  const auto net = build_topology(TopologySpec::random_tree(200, 8));
  const auto c = partition(net, 0.1, 4);
  for (std::size_t k = 0; k < c.size(); ++k) {
    const auto& m = c.members[k];
    const std::set<NodeId> in(m.begin(), m.end());
    int diam = 0;
    for (const NodeId s : m) {
      std::map<NodeId, int> d{{s, 0}};
      std::queue<NodeId> q;
      q.push(s);
      while (!q.empty()) {
        const NodeId v = q.front();
        q.pop();
        for (const NodeId w : net.neighbors(v)) {
          if (in.count(w) && !d.count(w)) {
            d[w] = d[v] + 1;
            diam = std::max(diam, d[w]);
            q.push(w);
          }
        }
      }
    }
    EXPECT_EQ(c.strong_diameter[k], diam);
  }
}

TEST(Partition, RegionsConfineClusters) {
  const auto net = build_topology(TopologySpec::path(40));
  std::vector<std::uint32_t> region(40);
  for (NodeId v = 0; v < 40; ++v) region[v] = v < 20 ? 0 : 1;
  PartitionOptions opt;
  opt.region = region;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto c = partition(net, 0.02, seed, opt);
    for (NodeId v = 0; v < 40; ++v) EXPECT_EQ(region[c.center[v]], region[v]);
  }
}

TEST(Partition, FromCentersValidates) {
  const auto net = build_topology(TopologySpec::path(4));
  EXPECT_NO_THROW(Clustering::from_centers(net, {0, 0, 3, 3}));
  EXPECT_THROW(Clustering::from_centers(net, {1, 0, 3, 3}), ValidationError);  // 1 not self-centered
  EXPECT_THROW(Clustering::from_centers(net, {0, 3, 0, 3}), ValidationError);  // disconnected
}

TEST(Partition, ClusteringCsv) {
  const auto net = build_topology(TopologySpec::path(2));
  const auto c = partition_with_shifts(net, 1.0, {2.5, 0.0});
  std::ostringstream out;
  write_clustering_csv(out, c);
  EXPECT_EQ(out.str(), "node_id,center_id,delta,depth\n0,0,2.5,0\n1,0,0,1\n");
}

TEST(EdgeCut, TwoPathClosedForm) {
  const auto net = build_topology(TopologySpec::path(2));
  for (double beta : {0.1, 0.5, 1.0}) {
    const auto r = edge_cut_rate(net, beta, 100000, 17);
    EXPECT_NEAR(r.mean, oracle::two_path_cut(beta), 0.01) << beta;
    EXPECT_LE(oracle::two_path_cut(beta), beta);
  }
}

TEST(EdgeCut, StarOfFiveMatchesNumericIntegral) {
  const auto net = build_topology(TopologySpec::star(5));
  const double expect = oracle::star_edge_cut(4, 0.1);
  const auto r = edge_cut_rate(net, 0.1, 100000, 23);
  EXPECT_NEAR(r.mean, expect, 0.01);
}

TEST(EdgeCut, StarOracleAgreesWithTwoPath) {
  // One leaf: the star is the 2-path.
  EXPECT_NEAR(oracle::star_edge_cut(1, 0.3), oracle::two_path_cut(0.3), 1e-6);
}

TEST(CenterDistance, TwoPathClosedForm) {
  const auto net = build_topology(TopologySpec::path(2));
  for (double beta : {0.1, 0.5, 1.0}) {
    const auto m = mc_center_distance(net, 0, beta, 100000, 29);
    EXPECT_LE(std::abs(m.mean - oracle::two_path_center_distance(beta)), 3.0 * m.stderr_) << beta;
  }
}

TEST(CenterDistance, SingleNodeIsZero) {
  const auto net = Network::from_edges(1, {});
  const auto m = mc_center_distance(net, 0, 0.5, 100, 1);
  EXPECT_EQ(m.mean, 0.0);
  EXPECT_THROW(mc_center_distance(net, 0, 0.5, 99, 1), ValidationError);
}

TEST(CenterDistance, AgreesWithPartitionPerTrial) {
  const auto net = build_topology(TopologySpec::grid(8, 8));
  const NodeId v = 27;
  const std::size_t trials = 150;
  const auto m = mc_center_distance(net, v, 0.2, trials, 5);
  const auto dist = bfs_distances(net, v);
  double sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto c = partition(net, 0.2, mc_trial_seed(5, t));
    sum += dist[c.center[v]];
  }
  EXPECT_NEAR(m.mean, sum / trials, 1e-12);
}
