#include <algorithm>
#include <cmath>

#include "icp_engine.hpp"
#include "radionet/errors.hpp"
#include "radionet/protocols.hpp"
#include "radionet/random.hpp"

namespace radionet {
namespace detail {

LayerIndex make_layer_index(const Clustering& c, const Schedules& s,
                            std::span<const std::uint32_t> region_of_node, std::size_t regions) {
  LayerIndex index;
  if (region_of_node.empty()) regions = 1;
  index.by_depth.assign(regions, {});
  index.clusters.assign(regions, {});
  for (std::uint32_t k = 0; k < s.trees.size(); ++k) {
    const auto& tree = s.trees[k];
    const std::uint32_t r = region_of_node.empty() ? 0 : region_of_node[tree.center];
    index.clusters[r].push_back(k);
    auto& layers = index.by_depth[r];
    if (layers.size() < tree.layers.size()) layers.resize(tree.layers.size());
    for (std::size_t d = 0; d < tree.layers.size(); ++d) {
      layers[d].insert(layers[d].end(), tree.layers[d].begin(), tree.layers[d].end());
    }
  }
  (void)c;
  return index;
}

void apply_phase(Board& board, const Clustering& c, std::span<const std::uint32_t> clusters,
                 int radius, int phase) {
  for (const std::uint32_t k : clusters) {
    const NodeId center = c.centers[k];
    const auto& members = c.members[k];
    if (phase == 1) {
      Message best;
      NodeId holder = kNoNode;
      for (const NodeId v : members) {
        if (c.depth[v] > radius) break;
        if (board.best[v] > best) {
          best = board.best[v];
          holder = v;
        }
      }
      if (holder != kNoNode) board.adopt(center, best, AdoptionSource::oracle, holder);
    } else {
      const Message m = board.best[center];
      if (m.empty()) continue;
      for (const NodeId v : members) {
        if (c.depth[v] > radius) break;
        board.adopt(v, m, AdoptionSource::oracle, center);
      }
    }
  }
}

IcpRun::IcpRun(const IcpSetup& setup) : setup_(setup) {
  if (setup_.radius <= 0 || setup_.decays_per_layer <= 0) phase_ = 3;
}

void IcpRun::icp_transmit(const Board& board, std::uint64_t round,
                          std::vector<Transmission>& out) const {
  if (done()) return;
  const int d = phase_ == 1 ? setup_.radius - layer_ : layer_;
  const auto& layers = setup_.index->by_depth[setup_.region];
  if (static_cast<std::size_t>(d) >= layers.size()) return;
  for (const NodeId v : layers[static_cast<std::size_t>(d)]) {
    const Message& m = board.best[v];
    if (m.empty() || !may_send(v)) continue;
    if (phase_ == 1 && !(m > (*setup_.snapshot)[v])) continue;
    if (decay_coin(setup_.seed, v, round, step_)) {
      out.push_back({v, Packet{v, PacketKind::data, m}});
    }
  }
}

void IcpRun::icp_advance(const Board& board) {
  if (done()) return;
  if (++step_ <= setup_.epoch_length) return;
  step_ = 1;
  if (++epoch_ < setup_.decays_per_layer) return;
  epoch_ = 0;
  if (++layer_ < setup_.radius) return;
  layer_ = 0;
  if (phase_ == 0) {
    const auto& layers = setup_.index->by_depth[setup_.region];
    const std::size_t reach = std::min(layers.size(), static_cast<std::size_t>(setup_.radius) + 1);
    for (std::size_t d = 0; d < reach; ++d) {
      for (const NodeId v : layers[d]) (*setup_.snapshot)[v] = board.best[v];
    }
  }
  ++phase_;
}

void IcpRun::background_transmit(const Board& board, std::uint64_t round,
                                 std::vector<Transmission>& out) {
  if (done()) return;
  const auto& c = *setup_.clustering;
  if (!coins_ready_) {
    heads_.clear();
    const auto exponent = static_cast<unsigned>(iteration_ % setup_.epoch_length) + 1;
    for (const std::uint32_t k : setup_.index->clusters[setup_.region]) {
      RandomStream coin(setup_.seed, Purpose::cluster_coin, c.centers[k], iteration_,
                        setup_.coin_instance);
      if (coin.coin_pow2(exponent)) heads_.push_back(k);
    }
    coins_ready_ = true;
  }
  for (const std::uint32_t k : heads_) {
    for (const NodeId v : c.members[k]) {
      const Message& m = board.best[v];
      if (m.empty() || !may_send(v)) continue;
      if (decay_coin(setup_.seed, v, round, bg_step_ + 1)) {
        out.push_back({v, Packet{v, PacketKind::data, m}});
      }
    }
  }
}

void IcpRun::background_advance() {
  if (++bg_step_ < setup_.epoch_length) return;
  bg_step_ = 0;
  ++iteration_;
  coins_ready_ = false;
}

}  // namespace detail

IcpOutcome intra_cluster_propagation(Simulator& sim, const Clustering& clustering,
                                     const Schedules& schedules, int radius,
                                     std::vector<NodeState>& states, const IcpParams& params,
                                     std::uint64_t seed) {
  const std::size_t n = sim.network().size();
  if (schedules.depth.size() != n || schedules.trees.size() != clustering.size()) {
    throw ValidationError("schedules are missing for this clustering");
  }
  if (states.size() != n) throw ValidationError("one state per node required");
  if (radius < 0) throw ValidationError("radius must be non-negative");

  detail::Board board;
  board.sim = &sim;
  board.best.resize(n);
  for (NodeId v = 0; v < n; ++v) board.best[v] = states[v].best;
  const auto index = detail::make_layer_index(clustering, schedules, {}, 1);
  const std::uint64_t start = sim.now();

  if (sim.mode() == Mode::charged) {
    const auto overhead =
        static_cast<std::uint64_t>(std::ceil(params.c_sched * ceil_log2(n)));
    static constexpr const char* kTags[] = {"icp-out", "icp-in", "icp-out"};
    for (int phase = 0; phase < 3; ++phase) {
      detail::apply_phase(board, clustering, index.clusters[0], radius, phase);
      sim.charge(static_cast<std::uint64_t>(radius) + overhead, kTags[phase]);
    }
  } else {
    std::vector<Message> snapshot(n);
    detail::IcpSetup setup;
    setup.clustering = &clustering;
    setup.index = &index;
    setup.radius = radius;
    setup.decays_per_layer = params.decays_per_layer;
    setup.epoch_length = ceil_log2(n);
    setup.coin_instance = params.instance;
    setup.seed = seed;
    setup.snapshot = &snapshot;
    detail::IcpRun icp(setup);
    std::vector<Transmission> sent;
    for (std::uint64_t local = 0; !icp.done(); ++local) {
      sent.clear();
      const bool icp_turn = local % 2 == 0;
      if (icp_turn) {
        icp.icp_transmit(board, sim.now(), sent);
      } else {
        icp.background_transmit(board, sim.now(), sent);
      }
      for (const auto& r : sim.step(params.lane, sent)) {
        board.adopt(r.node, r.packet.message, AdoptionSource::reception);
      }
      if (icp_turn) {
        icp.icp_advance(board);
      } else {
        icp.background_advance();
      }
    }
  }

  for (NodeId v = 0; v < n; ++v) {
    states[v].best = board.best[v];
    states[v].cluster_center = clustering.center[v];
    states[v].depth = clustering.depth[v];
    states[v].center = clustering.center[v] == v;
  }
  return {sim.now() - start, board.changed};
}

}  // namespace radionet
