#include <algorithm>
#include <cmath>

#include "radionet/errors.hpp"
#include "radionet/primitives.hpp"

namespace radionet {
namespace {

std::uint64_t ceil_u64(double x) { return static_cast<std::uint64_t>(std::ceil(x)); }

void fill_layers(Schedules& s, const Clustering& c) {
  s.trees.assign(c.size(), {});
  for (std::size_t k = 0; k < c.size(); ++k) {
    auto& tree = s.trees[k];
    tree.center = c.centers[k];
    for (const NodeId v : c.members[k]) {
      const auto d = static_cast<std::size_t>(s.depth[v]);
      if (tree.layers.size() <= d) tree.layers.resize(d + 1);
      tree.layers[d].push_back(v);
    }
  }
}

// One Decay epoch for `senders`, each sending its own packet. Calls
// on_heard(listener, packet) for every reception.
template <typename OnHeard>
void decay_epoch(Simulator& sim, Lane lane, const std::vector<Transmission>& senders,
                 std::uint64_t seed, OnHeard&& on_heard) {
  const int steps = ceil_log2(sim.network().size());
  std::vector<Transmission> sent;
  for (int i = 1; i <= steps; ++i) {
    sent.clear();
    const std::uint64_t round = sim.now();
    for (const auto& t : senders) {
      if (decay_coin(seed, t.node, round, i)) sent.push_back(t);
    }
    for (const auto& r : sim.step(lane, sent)) on_heard(r.node, r.packet);
  }
}

}  // namespace

int Schedules::max_depth() const noexcept {
  return depth.empty() ? 0 : *std::max_element(depth.begin(), depth.end());
}

int schedule_period(std::size_t n, double c_sched) noexcept {
  return std::max(1, static_cast<int>(std::ceil(c_sched * ceil_log2(n))));
}

Schedules build_schedule(Simulator& sim, const Clustering& c, const ScheduleParams& params,
                         std::uint64_t seed) {
  const Network& net = sim.network();
  const std::size_t n = net.size();
  if (c.center.size() != n) throw ValidationError("clustering does not match the network");
  const int log_n = ceil_log2(n);
  const std::uint64_t start = sim.now();

  Schedules s;
  s.period = schedule_period(n, params.c_sched);
  s.parent.assign(n, kNoNode);
  s.depth.assign(n, -1);

  if (sim.mode() == Mode::charged) {
    for (NodeId v = 0; v < n; ++v) {
      s.depth[v] = c.depth[v];
      if (c.depth[v] == 0) continue;
      for (const NodeId w : net.neighbors(v)) {
        if (c.center[w] == c.center[v] && c.depth[w] == c.depth[v] - 1) {
          s.parent[v] = w;
          break;
        }
      }
      if (s.parent[v] == kNoNode) throw InternalError("cluster member without a closer neighbor");
    }
    int diameter = c.max_strong_diameter();
    if (diameter < 0) diameter = 2 * c.max_depth();
    sim.charge(ceil_u64(params.c_pre * (diameter + std::pow(log_n, 3))), "schedule");
  } else {
    const int epochs = params.decays_per_layer > 0 ? params.decays_per_layer : log_n;
    std::vector<std::vector<NodeId>> by_depth(static_cast<std::size_t>(c.max_depth()) + 1);
    for (NodeId v = 0; v < n; ++v) by_depth[static_cast<std::size_t>(c.depth[v])].push_back(v);

    std::vector<NodeId> frontier;
    for (const NodeId r : c.centers) {
      s.depth[r] = 0;
      frontier.push_back(r);
    }
    std::vector<Transmission> senders;
    for (std::size_t d = 0; d + 1 < by_depth.size(); ++d) {
      senders.clear();
      for (const NodeId v : frontier) {
        senders.push_back({v, Packet{v, PacketKind::control,
                                     Message{static_cast<std::int64_t>(d), c.center[v]}}});
      }
      std::vector<NodeId> next;
      const auto on_heard = [&](NodeId v, const Packet& p) {
        if (s.depth[v] < 0 && p.kind == PacketKind::control && p.message.origin == c.center[v] &&
            p.message.value == static_cast<std::int64_t>(d)) {
          s.parent[v] = p.sender;
          s.depth[v] = static_cast<int>(d) + 1;
          next.push_back(v);
        }
      };
      const auto layer_done = [&] {
        return std::all_of(by_depth[d + 1].begin(), by_depth[d + 1].end(),
                           [&](NodeId v) { return s.depth[v] >= 0; });
      };
      for (int e = 0; e < epochs; ++e) decay_epoch(sim, Lane::pre, senders, seed, on_heard);
      while (!layer_done()) {
        decay_epoch(sim, Lane::pre, senders, seed, on_heard);
        ++s.repeated_epochs;
      }
      std::sort(next.begin(), next.end());
      frontier = std::move(next);
    }
  }
  fill_layers(s, c);
  s.build_rounds = sim.now() - start;
  return s;
}

Schedules build_schedule(const Network& net, const Clustering& clustering, Mode mode,
                         const ScheduleParams& params, std::uint64_t seed) {
  Simulator sim(net, mode);
  return build_schedule(sim, clustering, params, seed);
}

BroadcastOutcome schedule_broadcast(Simulator& sim, const Schedules& s, Direction direction,
                                    std::span<const Message> payload,
                                    const BroadcastParams& params, std::uint64_t seed) {
  const std::size_t n = sim.network().size();
  if (direction != Direction::outward && direction != Direction::inward) {
    throw ValidationError("unknown broadcast direction");
  }
  if (params.radius < 0) throw ValidationError("radius must be non-negative");
  if (payload.size() != n || s.depth.size() != n) {
    throw ValidationError("payload and schedule must cover every node");
  }
  const auto radius = static_cast<std::size_t>(params.radius);
  const std::uint64_t start = sim.now();
  BroadcastOutcome out;
  out.learned.assign(n, Message{});

  if (sim.mode() == Mode::charged) {
    for (const auto& tree : s.trees) {
      const std::size_t reach = std::min(radius + 1, tree.layers.size());
      if (direction == Direction::outward) {
        const Message m = payload[tree.center];
        if (m.empty()) continue;
        for (std::size_t d = 0; d < reach; ++d) {
          for (const NodeId v : tree.layers[d]) out.learned[v] = m;
        }
      } else {
        Message best;
        for (std::size_t d = 0; d < reach; ++d) {
          for (const NodeId v : tree.layers[d]) best = std::max(best, payload[v]);
        }
        out.learned[tree.center] = best;
      }
    }
    const int log_n = ceil_log2(n);
    sim.charge(radius + static_cast<std::uint64_t>(std::ceil(params.c_sched * log_n)),
               direction == Direction::outward ? "broadcast-out" : "broadcast-in");
    out.rounds = sim.now() - start;
    return out;
  }

  // Faithful: one layer at a time, each layer wrapped in Decay epochs.
  std::vector<std::vector<NodeId>> by_depth;
  for (const auto& tree : s.trees) {
    for (std::size_t d = 0; d < tree.layers.size() && d <= radius; ++d) {
      if (by_depth.size() <= d) by_depth.resize(d + 1);
      by_depth[d].insert(by_depth[d].end(), tree.layers[d].begin(), tree.layers[d].end());
    }
  }
  auto& know = out.learned;
  if (direction == Direction::outward) {
    for (const auto& tree : s.trees) know[tree.center] = payload[tree.center];
  } else {
    for (std::size_t d = 0; d < by_depth.size(); ++d) {
      for (const NodeId v : by_depth[d]) know[v] = payload[v];
    }
  }
  std::vector<Transmission> senders;
  const auto on_heard = [&](NodeId v, const Packet& p) {
    know[v] = std::max(know[v], p.message);
  };
  for (std::size_t k = 0; k < radius; ++k) {
    const std::size_t d = direction == Direction::outward ? k : radius - k;
    senders.clear();
    if (d < by_depth.size()) {
      for (const NodeId v : by_depth[d]) {
        if (!know[v].empty()) senders.push_back({v, Packet{v, PacketKind::data, know[v]}});
      }
    }
    for (int e = 0; e < params.decays_per_layer; ++e) {
      decay_epoch(sim, params.lane, senders, seed, on_heard);
    }
  }
  out.rounds = sim.now() - start;
  return out;
}

}  // namespace radionet
