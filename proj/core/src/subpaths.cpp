#include <algorithm>
#include <cmath>

#include "radionet/errors.hpp"
#include "radionet/protocols.hpp"

namespace radionet {

SubpathReport classify_subpaths(const Network& net, const Clustering& coarse,
                                std::span<const NodeId> path, const SubpathParams& params) {
  if (path.empty()) throw ValidationError("path must not be empty");
  if (coarse.center.size() != net.size()) throw ValidationError("clustering does not match the network");
  const auto dist = bfs_distances(net, path[0]);
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (!net.contains(path[k]) || dist[path[k]] != static_cast<int>(k)) {
      throw ValidationError("path is not a shortest path");
    }
  }

  const double d = std::max(1, net.diameter());
  SubpathReport report;
  report.length = std::max(1, static_cast<int>(std::ceil(std::pow(d, params.length_exp))));
  report.radius = static_cast<int>(std::ceil(std::pow(d, params.radius_exp)));

  std::vector<int> seen(net.size(), -1);
  std::vector<NodeId> queue;
  const auto len = static_cast<std::size_t>(report.length);
  for (std::size_t first = 0; first < path.size(); first += len) {
    SubpathLabel label;
    label.first = first;
    label.last = std::min(path.size(), first + len) - 1;
    queue.clear();
    for (std::size_t k = label.first; k <= label.last; ++k) {
      if (seen[path[k]] < 0) {
        seen[path[k]] = 0;
        queue.push_back(path[k]);
      }
    }
    const NodeId cluster = coarse.center[path[first]];
    label.good = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId u = queue[head];
      if (coarse.center[u] != cluster) label.good = false;
      if (seen[u] == report.radius) continue;
      for (const NodeId w : net.neighbors(u)) {
        if (seen[w] < 0) {
          seen[w] = seen[u] + 1;
          queue.push_back(w);
        }
      }
    }
    for (const NodeId u : queue) seen[u] = -1;
    if (!label.good) ++report.bad;
    report.labels.push_back(label);
  }
  return report;
}

}  // namespace radionet
