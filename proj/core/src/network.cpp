#include "radionet/network.hpp"

#include <algorithm>
#include <limits>

#include "json.hpp"
#include "radionet/errors.hpp"

namespace radionet {
namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv_mix(std::uint64_t& h, std::uint64_t word) {
  for (int i = 0; i < 8; ++i) {
    h ^= (word >> (8 * i)) & 0xFFu;
    h *= kFnvPrime;
  }
}

// BFS into a caller-owned buffer; returns the eccentricity of `source`
// restricted to reached nodes and the number of nodes reached.
std::pair<int, std::size_t> bfs_into(const Network& net, NodeId source, std::vector<int>& dist,
                                     std::vector<NodeId>& queue) {
  std::fill(dist.begin(), dist.end(), -1);
  queue.clear();
  dist[source] = 0;
  queue.push_back(source);
  int ecc = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    ecc = dist[u];
    for (const NodeId w : net.neighbors(u)) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return {ecc, queue.size()};
}

}  // namespace

Network Network::from_edges(std::size_t n, std::vector<Edge> edges) {
  if (n == 0) throw ValidationError("network must have at least one node");
  if (n > std::numeric_limits<NodeId>::max()) throw ValidationError("network too large");
  for (auto& e : edges) {
    if (e.u >= n || e.v >= n) throw ValidationError("edge endpoint out of range");
    if (e.u == e.v) throw ValidationError("self-loops are not allowed");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw ValidationError("duplicate edge");
  }

  Network net;
  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : edges) {
    ++degree[e.u];
    ++degree[e.v];
  }
  net.offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) net.offsets_[v + 1] = net.offsets_[v] + degree[v];
  net.adjacency_.resize(net.offsets_[n]);
  std::vector<std::size_t> fill(net.offsets_.begin(), net.offsets_.end() - 1);
  for (const auto& e : edges) {
    net.adjacency_[fill[e.u]++] = e.v;
    net.adjacency_[fill[e.v]++] = e.u;
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(net.adjacency_.begin() + static_cast<std::ptrdiff_t>(net.offsets_[v]),
              net.adjacency_.begin() + static_cast<std::ptrdiff_t>(net.offsets_[v + 1]));
  }
  net.edges_ = std::move(edges);

  std::vector<int> dist(n);
  std::vector<NodeId> queue;
  queue.reserve(n);
  if (bfs_into(net, 0, dist, queue).second != n) {
    throw ValidationError("network is not connected");
  }
  net.diameter_ = compute_diameter(net);

  std::uint64_t h = kFnvOffset;
  fnv_mix(h, n);
  for (const auto& e : net.edges_) fnv_mix(h, (static_cast<std::uint64_t>(e.u) << 32) | e.v);
  net.fingerprint_ = h;
  return net;
}

std::vector<int> bfs_distances(const Network& net, NodeId source) {
  if (!net.contains(source)) throw ValidationError("node id out of range");
  std::vector<int> dist(net.size());
  std::vector<NodeId> queue;
  queue.reserve(net.size());
  bfs_into(net, source, dist, queue);
  return dist;
}

std::vector<int> multi_source_distances(const Network& net, std::span<const NodeId> sources) {
  std::vector<int> dist(net.size(), -1);
  std::vector<NodeId> queue;
  queue.reserve(net.size());
  for (const NodeId s : sources) {
    if (!net.contains(s)) throw ValidationError("node id out of range");
    if (dist[s] < 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    for (const NodeId w : net.neighbors(u)) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

int eccentricity(const Network& net, NodeId v) {
  if (!net.contains(v)) throw ValidationError("node id out of range");
  std::vector<int> dist(net.size());
  std::vector<NodeId> queue;
  return bfs_into(net, v, dist, queue).first;
}

std::vector<NodeId> shortest_path(const Network& net, NodeId from, NodeId to) {
  if (!net.contains(to)) throw ValidationError("node id out of range");
  const auto dist = bfs_distances(net, from);
  std::vector<NodeId> path{to};
  while (path.back() != from) {
    const NodeId v = path.back();
    for (const NodeId w : net.neighbors(v)) {
      if (dist[w] == dist[v] - 1) {
        path.push_back(w);
        break;
      }
    }
  }
  std::reverse(path.begin(), path.end());
  return path;
}

int compute_diameter(const Network& net) {
  const std::size_t n = net.size();
  std::vector<int> dist(n);
  std::vector<NodeId> queue;
  queue.reserve(n);

  // Double sweep: the farthest node from an arbitrary start is a good
  // first candidate for a peripheral node.
  bfs_into(net, 0, dist, queue);
  const NodeId far = queue.back();
  int lower = bfs_into(net, far, dist, queue).first;
  int upper = std::numeric_limits<int>::max();

  for (NodeId v = 0; v < n && lower < upper; ++v) {
    const int ecc = bfs_into(net, v, dist, queue).first;
    lower = std::max(lower, ecc);
    upper = std::min(upper, 2 * ecc);
  }
  return lower;
}

std::vector<double> LayerVector::as_reals() const {
  return {counts.begin(), counts.end()};
}

LayerVector bfs_layers(const Network& net, NodeId origin) {
  const auto dist = bfs_distances(net, origin);
  LayerVector layers;
  layers.origin = origin;
  layers.network = net.fingerprint();
  layers.counts.assign(static_cast<std::size_t>(net.diameter()) + 1, 0);
  for (const int d : dist) ++layers.counts[static_cast<std::size_t>(d)];
  return layers;
}

std::string network_to_json(const Network& net) {
  nlohmann::ordered_json doc;
  doc["n"] = net.size();
  doc["diameter"] = net.diameter();
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : net.edges()) edges.push_back({e.u, e.v});
  doc["edges"] = std::move(edges);
  return doc.dump();
}

Network network_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("network JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges")) {
    throw ValidationError("network JSON must contain \"n\" and \"edges\"");
  }
  std::vector<Edge> edges;
  try {
    for (const auto& pair : doc.at("edges")) {
      if (!pair.is_array() || pair.size() != 2) throw ValidationError("edge must be [u, v]");
      edges.push_back({pair[0].get<NodeId>(), pair[1].get<NodeId>()});
    }
    auto net = Network::from_edges(doc.at("n").get<std::size_t>(), std::move(edges));
    if (doc.contains("diameter") && doc.at("diameter").get<int>() != net.diameter()) {
      throw ValidationError("stored diameter does not match the graph");
    }
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("network JSON: ") + e.what());
  }
}

}  // namespace radionet
