#include <algorithm>
#include <ostream>
#include <queue>

#include "radionet/errors.hpp"
#include "radionet/primitives.hpp"
#include "radionet/random.hpp"

namespace radionet {
namespace {

// Fills centers/cluster_of/members/strong_diameter from center and depth.
void index_clusters(const Network& net, Clustering& c, bool strong_diameters) {
  const std::size_t n = net.size();
  c.centers.clear();
  for (NodeId v = 0; v < n; ++v) {
    if (c.center[v] == v) c.centers.push_back(v);
  }
  std::vector<std::uint32_t> index_of(n, UINT32_MAX);
  for (std::uint32_t i = 0; i < c.centers.size(); ++i) index_of[c.centers[i]] = i;
  c.cluster_of.assign(n, 0);
  c.members.assign(c.centers.size(), {});
  for (NodeId v = 0; v < n; ++v) {
    const std::uint32_t idx = index_of[c.center[v]];
    if (idx == UINT32_MAX) throw InternalError("cluster center is not self-centered");
    c.cluster_of[v] = idx;
    c.members[idx].push_back(v);
  }
  for (auto& m : c.members) {
    std::stable_sort(m.begin(), m.end(),
                     [&](NodeId a, NodeId b) { return c.depth[a] < c.depth[b]; });
  }

  c.strong_diameter.assign(c.centers.size(), -1);
  if (!strong_diameters) return;
  std::vector<int> dist(n, -1);
  std::vector<NodeId> queue;
  for (std::size_t k = 0; k < c.members.size(); ++k) {
    const auto& m = c.members[k];
    int diam = 0;
    for (const NodeId s : m) {
      for (const NodeId v : m) dist[v] = -1;
      queue.clear();
      queue.push_back(s);
      dist[s] = 0;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId u = queue[head];
        diam = std::max(diam, dist[u]);
        for (const NodeId w : net.neighbors(u)) {
          if (c.cluster_of[w] == k && dist[w] < 0) {
            dist[w] = dist[u] + 1;
            queue.push_back(w);
          }
        }
      }
      if (queue.size() != m.size()) throw InternalError("cluster is not connected");
    }
    c.strong_diameter[k] = diam;
  }
}

void check_beta(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw ValidationError("beta must lie in (0, 1]");
}

}  // namespace

int Clustering::max_strong_diameter() const noexcept {
  return strong_diameter.empty() ? 0 : *std::max_element(strong_diameter.begin(), strong_diameter.end());
}

int Clustering::max_depth() const noexcept {
  return depth.empty() ? 0 : *std::max_element(depth.begin(), depth.end());
}

Clustering Clustering::from_centers(const Network& net, std::vector<NodeId> center, double beta,
                                    bool strong_diameters) {
  const std::size_t n = net.size();
  if (center.size() != n) throw ValidationError("one center per node required");
  for (NodeId v = 0; v < n; ++v) {
    if (center[v] >= n) throw ValidationError("center id out of range");
    if (center[center[v]] != center[v]) throw ValidationError("center is not its own center");
  }
  Clustering c;
  c.beta = beta;
  c.center = std::move(center);
  c.delta.assign(n, 0.0);
  c.depth.assign(n, -1);
  std::vector<NodeId> queue;
  for (NodeId s = 0; s < n; ++s) {
    if (c.center[s] != s) continue;
    queue.assign(1, s);
    c.depth[s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId u = queue[head];
      for (const NodeId w : net.neighbors(u)) {
        if (c.center[w] == s && c.depth[w] < 0) {
          c.depth[w] = c.depth[u] + 1;
          queue.push_back(w);
        }
      }
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    if (c.depth[v] < 0) throw ValidationError("cluster does not induce a connected subgraph");
  }
  index_clusters(net, c, strong_diameters);
  return c;
}

std::vector<double> draw_shifts(std::size_t n, double beta, std::uint64_t seed) {
  check_beta(beta);
  std::vector<double> delta(n);
  for (NodeId v = 0; v < n; ++v) {
    RandomStream stream(seed, Purpose::shift, v);
    delta[v] = sample_exponential(stream, beta);
  }
  return delta;
}

Clustering partition(const Network& net, double beta, std::uint64_t seed,
                     const PartitionOptions& options) {
  check_beta(beta);
  return partition_with_shifts(net, beta, draw_shifts(net.size(), beta, seed), options);
}

Clustering partition_with_shifts(const Network& net, double beta, std::vector<double> delta,
                                 const PartitionOptions& options) {
  check_beta(beta);
  const std::size_t n = net.size();
  if (delta.size() != n) throw ValidationError("one shift per node required");
  if (!options.region.empty() && options.region.size() != n) {
    throw ValidationError("region labels must cover every node");
  }
  const auto same_region = [&](NodeId a, NodeId b) {
    return options.region.empty() || options.region[a] == options.region[b];
  };

  // Multi-source Dijkstra on key dist - delta_center; equal keys go to the
  // smaller center id, which realises the argmax tie-break.
  struct Entry {
    int dist;
    NodeId center;
    NodeId node;
  };
  const auto later = [&](const Entry& a, const Entry& b) {
    const double ka = static_cast<double>(a.dist) - delta[a.center];
    const double kb = static_cast<double>(b.dist) - delta[b.center];
    if (ka != kb) return ka > kb;
    if (a.center != b.center) return a.center > b.center;
    return a.node > b.node;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(later)> heap(later);
  for (NodeId v = 0; v < n; ++v) heap.push({0, v, v});

  Clustering c;
  c.beta = beta;
  c.center.assign(n, kNoNode);
  c.depth.assign(n, -1);
  while (!heap.empty()) {
    const Entry e = heap.top();
    heap.pop();
    if (c.center[e.node] != kNoNode) continue;
    c.center[e.node] = e.center;
    c.depth[e.node] = e.dist;
    for (const NodeId w : net.neighbors(e.node)) {
      if (c.center[w] == kNoNode && same_region(e.node, w)) heap.push({e.dist + 1, e.center, w});
    }
  }
  c.delta = std::move(delta);
  index_clusters(net, c, options.strong_diameters);
  return c;
}

EdgeCutRate edge_cut_rate(const Network& net, double beta, std::size_t trials,
                          std::uint64_t seed) {
  check_beta(beta);
  if (trials < 1) throw ValidationError("trials must be at least 1");
  EdgeCutRate out;
  out.trials = trials;
  const auto& edges = net.edges();
  std::vector<std::uint64_t> cuts(edges.size(), 0);
  PartitionOptions options;
  options.strong_diameters = false;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto trial_seed =
        derive_seed(seed, StreamLabel{make_tag(Purpose::shift, 1), 0, static_cast<std::uint32_t>(t)});
    const auto c = partition(net, beta, trial_seed, options);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (c.center[edges[i].u] != c.center[edges[i].v]) ++cuts[i];
    }
  }
  out.per_edge.resize(edges.size());
  double total = 0.0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out.per_edge[i] = static_cast<double>(cuts[i]) / static_cast<double>(trials);
    total += out.per_edge[i];
  }
  out.mean = edges.empty() ? 0.0 : total / static_cast<double>(edges.size());
  return out;
}

void write_clustering_csv(std::ostream& out, const Clustering& c) {
  out << "node_id,center_id,delta,depth\n";
  const auto precision = out.precision(17);
  for (NodeId v = 0; v < c.center.size(); ++v) {
    out << v << ',' << c.center[v] << ',' << c.delta[v] << ',' << c.depth[v] << '\n';
  }
  out.precision(precision);
}

}  // namespace radionet
