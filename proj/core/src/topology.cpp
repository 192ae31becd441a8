#include "radionet/topology.hpp"

#include <array>
#include <functional>
#include <queue>
#include <vector>

#include "radionet/errors.hpp"
#include "radionet/random.hpp"

namespace radionet {
namespace {

constexpr std::array<std::pair<TopologyKind, std::string_view>, 6> kNames{{
    {TopologyKind::path, "path"},
    {TopologyKind::cycle, "cycle"},
    {TopologyKind::grid, "grid"},
    {TopologyKind::random_tree, "random_tree"},
    {TopologyKind::star, "star"},
    {TopologyKind::gnp_connected, "gnp_connected"},
}};

bool connected(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (const auto& e : edges) {
    const auto a = find(e.u);
    const auto b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

// Uniform labelled tree via a random Pruefer sequence.
std::vector<Edge> pruefer_tree(std::size_t n, std::uint64_t seed) {
  std::vector<Edge> edges;
  if (n == 1) return edges;
  if (n == 2) return {{0, 1}};
  RandomStream rng(seed, Purpose::topology, 0, 0, 1);
  std::vector<NodeId> code(n - 2);
  for (auto& c : code) c = static_cast<NodeId>(rng.uniform_below(n));
  std::vector<std::size_t> degree(n, 1);
  for (const NodeId c : code) ++degree[c];
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> leaves;
  for (NodeId v = 0; v < n; ++v) {
    if (degree[v] == 1) leaves.push(v);
  }
  for (const NodeId c : code) {
    const NodeId leaf = leaves.top();
    leaves.pop();
    edges.push_back({leaf, c});
    if (--degree[c] == 1) leaves.push(c);
  }
  const NodeId a = leaves.top();
  leaves.pop();
  edges.push_back({a, leaves.top()});
  return edges;
}

}  // namespace

std::string_view to_string(TopologyKind kind) noexcept {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<TopologyKind> parse_topology_kind(std::string_view name) noexcept {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  if (name == "gnp") return TopologyKind::gnp_connected;
  if (name == "tree") return TopologyKind::random_tree;
  return std::nullopt;
}

std::string TopologySpec::label() const {
  if (kind == TopologyKind::grid) {
    return "grid-" + std::to_string(rows) + "x" + std::to_string(cols);
  }
  return std::string(to_string(kind)) + "-" + std::to_string(n);
}

Network build_topology(const TopologySpec& spec) {
  std::vector<Edge> edges;
  std::size_t n = spec.n;
  switch (spec.kind) {
    case TopologyKind::path:
      if (n < 1) throw ValidationError("path needs n >= 1");
      for (NodeId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
      break;
    case TopologyKind::cycle:
      if (n < 3) throw ValidationError("cycle needs n >= 3");
      for (NodeId v = 0; v < n; ++v) edges.push_back({v, static_cast<NodeId>((v + 1) % n)});
      break;
    case TopologyKind::star:
      if (n < 1) throw ValidationError("star needs n >= 1");
      for (NodeId v = 1; v < n; ++v) edges.push_back({0, v});
      break;
    case TopologyKind::grid: {
      if (spec.rows < 1 || spec.cols < 1) throw ValidationError("grid needs rows, cols >= 1");
      n = spec.rows * spec.cols;
      for (std::size_t r = 0; r < spec.rows; ++r) {
        for (std::size_t c = 0; c < spec.cols; ++c) {
          const auto v = static_cast<NodeId>(r * spec.cols + c);
          if (c + 1 < spec.cols) edges.push_back({v, v + 1});
          if (r + 1 < spec.rows) edges.push_back({v, static_cast<NodeId>(v + spec.cols)});
        }
      }
      break;
    }
    case TopologyKind::random_tree:
      if (n < 1) throw ValidationError("random_tree needs n >= 1");
      edges = pruefer_tree(n, spec.seed);
      break;
    case TopologyKind::gnp_connected: {
      if (n < 1) throw ValidationError("gnp_connected needs n >= 1");
      if (!(spec.p > 0.0 && spec.p <= 1.0)) throw ValidationError("gnp probability must be in (0, 1]");
      for (int attempt = 0; attempt < kGnpMaxAttempts; ++attempt) {
        edges.clear();
        RandomStream rng(spec.seed, Purpose::topology, 0, static_cast<std::uint32_t>(attempt), 2);
        for (NodeId u = 0; u < n; ++u) {
          for (NodeId v = u + 1; v < n; ++v) {
            if (rng.bernoulli(spec.p)) edges.push_back({u, v});
          }
        }
        if (connected(n, edges)) return Network::from_edges(n, std::move(edges));
      }
      throw GenerationError("G(n, p) sample stayed disconnected after retry budget");
    }
  }
  return Network::from_edges(n, std::move(edges));
}

}  // namespace radionet
