#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radionet/network.hpp"
#include "radionet/primitives.hpp"
#include "radionet/radio.hpp"

namespace radionet {

struct JRange {
  int lo = 1;
  int hi = 0;
  [[nodiscard]] bool empty() const noexcept { return hi < lo; }
  [[nodiscard]] int count() const noexcept { return empty() ? 0 : hi - lo + 1; }
};

enum class JRangeRule : std::uint8_t {
  desk,       // [1, max(2, ceil(0.5 log D))]
  fractions,  // integers in [j_min_frac log D, j_max_frac log D]
  fixed,      // [j_min, j_max] as given
};

struct CompeteConfig {
  Mode mode = Mode::charged;

  double coarse_beta_exp = 0.5;      // coarse beta = D^-exp
  double fine_count_exp = 0.2;       // ceil(D^exp) fine clusterings per j
  int fine_count_min = 1;
  JRangeRule j_rule = JRangeRule::desk;
  double j_min_frac = 0.01;
  double j_max_frac = 0.1;
  int j_min = 1;
  int j_max = 2;
  double seq_len_exp = 0.99;         // ceil(D^exp) sequence entries
  double background_beta_exp = 0.1;  // background beta = D^-exp
  double background_count_exp = 0.2;
  int background_count_min = 16;

  double c1 = 2.0;     // main radius c1 log n / (beta log D)
  double c_bg = 1.0;   // background radius c_bg log n / beta
  double c_sched = 1.0;
  double c_pre = 1.0;
  double c_part = 1.0;
  /// Decay epochs per schedule layer in faithful propagation.
  int faithful_layer_decays = 3;

  double timeout_factor = 64.0;
  /// Propagation round cap; 0 selects the default formula.
  std::uint64_t round_cap = 0;

  /// Throws ValidationError on out-of-range values.
  void validate() const;
  [[nodiscard]] JRange j_range(int diameter) const;
  /// timeout_factor * (D log n / log D + log^4 n), times ceil(log n) in
  /// faithful mode.
  [[nodiscard]] std::uint64_t default_cap(std::size_t n, int diameter) const;
};

/// What a node knows and does during a Compete run.
struct NodeState {
  NodeId id = 0;
  Message best;
  bool source = false;
  bool candidate = false;
  bool center = false;
  std::uint32_t clustering = 0;
  NodeId cluster_center = kNoNode;
  int depth = -1;
};

struct IcpParams {
  double c_sched = 1.0;
  int decays_per_layer = 3;
  Lane lane = Lane::single;
  std::uint32_t instance = 0;  // keys the coordinated cluster coins
};

struct IcpOutcome {
  std::uint64_t rounds = 0;
  std::size_t changed = 0;  // nodes whose best improved
};

/// Three schedule phases (out, in, out) in every cluster, radius `radius`.
/// Faithful mode interleaves the cluster-coordinated background Decay
/// process round by round until the three phases finish.
IcpOutcome intra_cluster_propagation(Simulator& sim, const Clustering& clustering,
                                     const Schedules& schedules, int radius,
                                     std::vector<NodeState>& states, const IcpParams& params,
                                     std::uint64_t seed);

struct SourceMessage {
  NodeId node = 0;
  std::int64_t value = 0;
};

struct RunOptions {
  TraceOptions trace{};
  std::vector<RoundObserver*> observers{};
  /// Audit adoptions (monotonicity, no leakage) during the run.
  bool audit = true;
};

struct CompeteResult {
  std::vector<Message> output;  // per node
  Message target;               // max over sources
  Trace trace;
  bool success = false;
  bool timed_out = false;
  std::size_t informed = 0;
  std::uint64_t precompute_rounds = 0;    // elapsed time before propagation
  std::uint64_t propagation_rounds = 0;   // elapsed time spent propagating
  std::uint64_t cap = 0;
  std::uint64_t monotonicity_violations = 0;
  std::uint64_t conservation_violations = 0;
  /// Every output is empty or some source's message.
  bool safe = true;
  std::vector<std::string> warnings;

  [[nodiscard]] std::uint64_t total_rounds() const noexcept { return trace.total_rounds(); }
};

/// Propagates the highest source message to every node. Runs stop when every
/// node holds it (test oracle) or when the propagation cap is reached.
CompeteResult compete(const Network& net, std::span<const SourceMessage> sources,
                      const CompeteConfig& config, std::uint64_t seed,
                      const RunOptions& options = {});

CompeteResult broadcast(const Network& net, NodeId source, std::int64_t value,
                        const CompeteConfig& config, std::uint64_t seed,
                        const RunOptions& options = {});

struct ElectionResult {
  std::vector<std::int64_t> leader_id;  // per node; -1 when nothing was learned
  std::vector<char> self_identified;    // per node
  std::vector<NodeId> candidates;
  std::uint64_t retries = 0;
  bool agreement = false;         // all outputs equal and non-empty
  bool unique_self = false;       // exactly one node self-identifies
  NodeId leader = kNoNode;        // the self-identified node
  CompeteResult run;

  [[nodiscard]] bool success() const noexcept { return run.success && agreement && unique_self; }
};

/// Nodes become candidates with probability min(1, c_cand log n / n), draw
/// uniform id_bits-bit IDs, and compete with their IDs. A round with no
/// candidate is redrawn and counted in `retries`.
ElectionResult leader_election(const Network& net, const CompeteConfig& config, double c_cand,
                               int id_bits, std::uint64_t seed, const RunOptions& options = {});

/// Election among fixed candidates with fixed IDs.
ElectionResult elect_among(const Network& net, std::span<const SourceMessage> candidates,
                           const CompeteConfig& config, std::uint64_t seed,
                           const RunOptions& options = {});

/// Classic Decay broadcast: nodes informed before an epoch run one Decay
/// epoch with the source message, repeated until everyone is informed.
class DecayBroadcast final : public RoundProtocol {
 public:
  DecayBroadcast(NodeId source, std::int64_t value) : source_(source), value_(value) {}
  void begin(const Network& net, std::uint64_t seed) override;
  void actions(std::uint64_t round, std::vector<Transmission>& out) override;
  void deliver(std::uint64_t round, std::span<const Reception> heard) override;
  [[nodiscard]] bool finished() const override { return informed_count_ == informed_.size(); }

  [[nodiscard]] const std::vector<char>& informed() const noexcept { return informed_; }
  [[nodiscard]] std::size_t informed_count() const noexcept { return informed_count_; }

 private:
  NodeId source_;
  std::int64_t value_;
  std::uint64_t seed_ = 0;
  int epoch_length_ = 1;
  std::vector<char> informed_;
  std::vector<NodeId> participants_;
  std::size_t informed_count_ = 0;
};

struct BaselineResult {
  std::vector<char> informed;
  std::size_t informed_count = 0;
  Trace trace;
  bool success = false;
  bool timed_out = false;
  std::uint64_t rounds = 0;
};

/// Default cap: timeout_factor * (D + log n) * log n rounds.
BaselineResult decay_broadcast_baseline(const Network& net, NodeId source, std::uint64_t seed,
                                        std::uint64_t max_rounds = 0,
                                        const TraceOptions& trace = {},
                                        double timeout_factor = 64.0);

struct SubpathParams {
  double length_exp = 0.12;  // subpaths of ceil(D^exp) nodes
  double radius_exp = 0.11;  // neighborhood radius ceil(D^exp)
};

struct SubpathLabel {
  std::size_t first = 0;  // index into the path
  std::size_t last = 0;   // inclusive
  bool good = false;
};

struct SubpathReport {
  std::vector<SubpathLabel> labels;
  std::size_t bad = 0;
  int length = 1;
  int radius = 0;
};

/// Splits a shortest path into consecutive subpaths and labels a subpath good
/// iff all nodes within `radius` hops of it share one coarse cluster.
/// Throws ValidationError when `path` is not a shortest path.
SubpathReport classify_subpaths(const Network& net, const Clustering& coarse,
                                std::span<const NodeId> path, const SubpathParams& params = {});

}  // namespace radionet
