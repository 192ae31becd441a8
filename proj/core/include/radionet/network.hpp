#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace radionet {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected, connected, simple graph on nodes 0..n-1 with its hop diameter.
/// Immutable once built; copies are cheap to share read-only across threads.
class Network {
 public:
  /// Validates (ids in range, no self-loops, no duplicates, connected) and
  /// computes the exact diameter. Edge orientation and order are irrelevant.
  static Network from_edges(std::size_t n, std::vector<Edge> edges);

  [[nodiscard]] std::size_t size() const noexcept { return offsets_.size() - 1; }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
  [[nodiscard]] int diameter() const noexcept { return diameter_; }

  /// Canonical edge list: u < v, sorted lexicographically.
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }

  [[nodiscard]] std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  [[nodiscard]] std::size_t degree(NodeId v) const noexcept {
    return offsets_[v + 1] - offsets_[v];
  }
  [[nodiscard]] bool contains(NodeId v) const noexcept { return v < size(); }

  /// FNV-1a digest of the canonical form; identifies the network in LayerVectors.
  [[nodiscard]] std::uint64_t fingerprint() const noexcept { return fingerprint_; }

 private:
  Network() = default;

  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  std::vector<Edge> edges_;
  int diameter_ = 0;
  std::uint64_t fingerprint_ = 0;
};

/// Hop distances from `source`; -1 marks unreachable nodes.
std::vector<int> bfs_distances(const Network& net, NodeId source);

/// Hop distances from a set of sources (distance to the nearest one).
std::vector<int> multi_source_distances(const Network& net, std::span<const NodeId> sources);

int eccentricity(const Network& net, NodeId v);

/// One shortest path from `from` to `to`, both endpoints included.
std::vector<NodeId> shortest_path(const Network& net, NodeId from, NodeId to);

/// Exact hop diameter: a double-sweep lower bound seeds an all-pairs sweep that
/// stops early once the bound is certified.
int compute_diameter(const Network& net);

/// x_i = number of nodes at hop distance exactly i from the origin, i = 0..D.
struct LayerVector {
  NodeId origin = 0;
  std::uint64_t network = 0;
  std::vector<std::uint64_t> counts;

  [[nodiscard]] std::vector<double> as_reals() const;
};

LayerVector bfs_layers(const Network& net, NodeId origin);

/// {"n": int, "diameter": int, "edges": [[u, v], ...]} in canonical order.
std::string network_to_json(const Network& net);
/// Parses and fully validates; the stored diameter must match the graph.
Network network_from_json(std::string_view text);

}  // namespace radionet
