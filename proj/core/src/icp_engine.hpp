#pragma once

// Internal machinery shared by the standalone intra-cluster propagation and
// Compete: per-node boards, layer indexes and a steppable ICP instance.

#include <cstdint>
#include <span>
#include <vector>

#include "radionet/primitives.hpp"
#include "radionet/radio.hpp"

namespace radionet::detail {

/// Nodes of one clustering grouped by region and depth.
struct LayerIndex {
  std::vector<std::vector<std::vector<NodeId>>> by_depth;  // [region][depth]
  std::vector<std::vector<std::uint32_t>> clusters;         // [region] -> cluster indices
};

/// `region_of_node` empty means a single region holding every cluster.
LayerIndex make_layer_index(const Clustering& clustering, const Schedules& schedules,
                            std::span<const std::uint32_t> region_of_node, std::size_t regions);

/// Per-run best messages with adoption bookkeeping.
struct Board {
  Simulator* sim = nullptr;
  std::vector<Message> best;
  Message target;  // counted in `informed` when adopted
  std::size_t informed = 0;
  std::size_t changed = 0;

  bool adopt(NodeId v, const Message& m, AdoptionSource source, NodeId provider = kNoNode) {
    if (!(m > best[v])) return false;
    const Adoption event{v, best[v], m, source, provider};
    best[v] = m;
    ++changed;
    if (!target.empty() && m == target) ++informed;
    sim->notify(event);
    return true;
  }
};

/// Atomic charged-mode phase: 0 and 2 push each center's best to members
/// within `radius`, 1 hands each center the best held within `radius`.
void apply_phase(Board& board, const Clustering& clustering, std::span<const std::uint32_t> clusters,
                 int radius, int phase);

struct IcpSetup {
  const Clustering* clustering = nullptr;
  const LayerIndex* index = nullptr;
  std::uint32_t region = 0;
  int radius = 1;
  int decays_per_layer = 3;
  int epoch_length = 1;
  std::uint32_t coin_instance = 0;
  std::uint64_t seed = 0;
  std::vector<Message>* snapshot = nullptr;  // best after phase 1, per node
  const std::vector<char>* allowed = nullptr;  // nodes that may transmit
};

/// One faithful ICP instance in one region, advanced one round at a time.
/// ICP rounds and background (cluster-coin Decay) rounds are stepped
/// separately; the caller alternates them.
class IcpRun {
 public:
  explicit IcpRun(const IcpSetup& setup);

  [[nodiscard]] bool done() const noexcept { return phase_ >= 3; }

  void icp_transmit(const Board& board, std::uint64_t round, std::vector<Transmission>& out) const;
  void icp_advance(const Board& board);

  void background_transmit(const Board& board, std::uint64_t round,
                           std::vector<Transmission>& out);
  void background_advance();

 private:
  [[nodiscard]] bool may_send(NodeId v) const {
    return setup_.allowed == nullptr || (*setup_.allowed)[v] != 0;
  }

  IcpSetup setup_;
  int phase_ = 0;
  int layer_ = 0;
  int epoch_ = 0;
  int step_ = 1;

  std::uint32_t iteration_ = 0;
  int bg_step_ = 0;
  bool coins_ready_ = false;
  std::vector<std::uint32_t> heads_;
};

}  // namespace radionet::detail
