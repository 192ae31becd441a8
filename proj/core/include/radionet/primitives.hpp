#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "radionet/network.hpp"
#include "radionet/radio.hpp"

namespace radionet {

/// ceil(log2 n), at least 1. The length of one Decay epoch.
int ceil_log2(std::size_t n) noexcept;

/// log2(x) clamped below at 1; used wherever log D or log n is a divisor.
double log2_floor1(double x) noexcept;

// ---------------------------------------------------------------------------
// Decay

struct DecayParticipant {
  NodeId node = 0;
  Message message;
};

/// Coin of `node` in Decay step `step` (1-based): heads with probability
/// 2^-step. Keyed by (seed, node, round, instance) so draws never depend on
/// evaluation order.
bool decay_coin(std::uint64_t seed, NodeId node, std::uint64_t round, int step,
                std::uint32_t instance = 0) noexcept;

/// Listener -> highest message heard during the epoch.
struct DecayReception {
  NodeId node = 0;
  Message message;
};

/// One Decay epoch of ceil_log2(n) rounds on `sim`. Returns, for each listener
/// that heard anything, the highest message heard; sorted by node id.
/// Throws ValidationError when a node is both participant and listener.
std::vector<DecayReception> decay_round(Simulator& sim, Lane lane,
                                        std::span<const DecayParticipant> participants,
                                        std::span<const NodeId> listeners, std::uint64_t seed);

/// Same, on a fresh faithful simulator.
std::vector<DecayReception> decay_round(const Network& net,
                                        std::span<const DecayParticipant> participants,
                                        std::span<const NodeId> listeners, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Partition(beta)

struct Clustering {
  double beta = 1.0;
  std::vector<NodeId> center;              // per node
  std::vector<double> delta;               // per node shift
  std::vector<int> depth;                  // per node: distance to center inside the cluster
  std::vector<NodeId> centers;             // ascending
  std::vector<std::uint32_t> cluster_of;   // node -> index into centers
  std::vector<std::vector<NodeId>> members;  // per cluster, ordered by (depth, id)
  std::vector<int> strong_diameter;        // per cluster, -1 when not computed

  [[nodiscard]] std::size_t size() const noexcept { return centers.size(); }
  [[nodiscard]] int max_strong_diameter() const noexcept;
  [[nodiscard]] int max_depth() const noexcept;

  /// Builds a clustering from an explicit center assignment. Validates that
  /// centers are self-centered and clusters connected (ValidationError).
  static Clustering from_centers(const Network& net, std::vector<NodeId> center,
                                 double beta = 1.0, bool strong_diameters = true);
};

struct PartitionOptions {
  /// Optional per-node region label. Only edges inside a region are used, so
  /// every cluster lies inside one region.
  std::span<const std::uint32_t> region{};
  bool strong_diameters = true;
};

/// Per-node Exp(beta) shifts as used by partition(net, beta, seed).
std::vector<double> draw_shifts(std::size_t n, double beta, std::uint64_t seed);

/// Exponential-shift clustering: center(v) = argmax_u (delta_u - dist(u, v)),
/// ties to the smaller id. Requires 0 < beta <= 1.
Clustering partition(const Network& net, double beta, std::uint64_t seed,
                     const PartitionOptions& options = {});

/// Same rule for given shifts.
Clustering partition_with_shifts(const Network& net, double beta, std::vector<double> delta,
                                 const PartitionOptions& options = {});

struct EdgeCutRate {
  std::vector<double> per_edge;  // aligned with net.edges()
  double mean = 0.0;             // a uniformly random edge
  std::size_t trials = 0;
};

EdgeCutRate edge_cut_rate(const Network& net, double beta, std::size_t trials,
                          std::uint64_t seed);

/// CSV node_id,center_id,delta,depth.
void write_clustering_csv(std::ostream& out, const Clustering& clustering);

// ---------------------------------------------------------------------------
// Schedules

struct ScheduleParams {
  double c_sched = 1.0;  // period = c_sched * ceil(log n)
  double c_pre = 1.0;    // charged construction cost factor
  /// Decay epochs per layer during faithful construction; 0 means ceil(log n).
  int decays_per_layer = 0;
};

struct ClusterTree {
  NodeId center = 0;
  std::vector<std::vector<NodeId>> layers;  // layers[d]: members at depth d
};

/// BFS trees for every cluster of one clustering.
struct Schedules {
  std::vector<NodeId> parent;  // kNoNode at centers
  std::vector<int> depth;
  std::vector<ClusterTree> trees;  // aligned with Clustering::centers
  int period = 1;
  std::uint64_t build_rounds = 0;
  std::uint64_t repeated_epochs = 0;  // faithful: extra epochs to finish a layer

  [[nodiscard]] int slot(NodeId v) const noexcept { return depth[v] % period; }
  [[nodiscard]] int max_depth() const noexcept;
};

int schedule_period(std::size_t n, double c_sched) noexcept;

/// Charged: trees computed directly, c_pre * (max strong diameter + log^3 n)
/// charged. Faithful: trees grown layer by layer with control packets wrapped
/// in Decay; a layer repeats until every member one hop further has a parent.
Schedules build_schedule(Simulator& sim, const Clustering& clustering,
                         const ScheduleParams& params, std::uint64_t seed);

Schedules build_schedule(const Network& net, const Clustering& clustering, Mode mode,
                         const ScheduleParams& params, std::uint64_t seed);

enum class Direction : std::uint8_t { outward, inward };

struct BroadcastParams {
  int radius = 0;
  double c_sched = 1.0;
  /// Decay epochs per layer in faithful mode.
  int decays_per_layer = 3;
  Lane lane = Lane::single;
};

struct BroadcastOutcome {
  /// Per node: the highest payload it learned during the operation.
  std::vector<Message> learned;
  std::uint64_t rounds = 0;
};

/// Runs one schedule operation in every cluster at once. Outward: members
/// within `radius` of their center learn the center's payload. Inward: each
/// center learns the highest payload held by a member within `radius`.
/// `payload[v]` empty means v has nothing to send.
BroadcastOutcome schedule_broadcast(Simulator& sim, const Schedules& schedules,
                                    Direction direction, std::span<const Message> payload,
                                    const BroadcastParams& params, std::uint64_t seed);

}  // namespace radionet
