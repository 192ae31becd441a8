#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radionet/network.hpp"

namespace radionet {

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// A protocol payload. Values are paired with their originator so that
/// messages are totally ordered and pairwise distinct.
struct Message {
  std::int64_t value = std::numeric_limits<std::int64_t>::min();
  NodeId origin = kNoNode;

  [[nodiscard]] bool empty() const noexcept { return origin == kNoNode; }
  friend constexpr auto operator<=>(const Message&, const Message&) = default;
};

enum class PacketKind : std::uint8_t { data, control };

struct Packet {
  NodeId sender = kNoNode;
  PacketKind kind = PacketKind::data;
  Message message;
};

/// Which process a round belongs to. Main runs on even rounds, background
/// on odd rounds; pre and single are unconstrained.
enum class Lane : std::uint8_t { pre, main, background, single };

std::string_view to_string(Lane lane) noexcept;

enum class Mode : std::uint8_t { faithful, charged };

std::string_view to_string(Mode mode) noexcept;
std::optional<Mode> parse_mode(std::string_view name) noexcept;

struct Transmission {
  NodeId node = 0;
  Packet packet;
};

struct Reception {
  NodeId node = 0;  // listener
  Packet packet;    // packet.sender is the unique transmitting neighbor
};

/// One simulated round, kept only when recording is enabled.
struct RoundRecord {
  std::uint64_t round = 0;
  Lane lane = Lane::single;
  std::vector<NodeId> transmitters;
  std::vector<std::pair<NodeId, NodeId>> receptions;  // (listener, sender)
  std::uint32_t collisions = 0;
};

struct TraceOptions {
  bool record_rounds = false;
  /// Recording stops (and `truncated` is set) past this many records.
  std::size_t max_records = 1'000'000;
};

/// Run statistics plus a running digest over every round. Per-round records
/// are optional; the digest alone is enough for determinism checks.
class Trace {
 public:
  /// Engine rounds executed, including idle spans.
  [[nodiscard]] std::uint64_t rounds() const noexcept { return rounds_; }
  /// Rounds accounted analytically via charge().
  [[nodiscard]] std::uint64_t charged_rounds() const noexcept { return charged_; }
  [[nodiscard]] std::uint64_t total_rounds() const noexcept { return rounds_ + charged_; }
  [[nodiscard]] std::uint64_t transmissions() const noexcept { return transmissions_; }
  [[nodiscard]] std::uint64_t receptions() const noexcept { return receptions_; }
  [[nodiscard]] std::uint64_t collisions() const noexcept { return collisions_; }
  [[nodiscard]] std::uint64_t lane_violations() const noexcept { return lane_violations_; }
  [[nodiscard]] std::uint64_t digest() const noexcept { return digest_; }
  [[nodiscard]] const std::vector<RoundRecord>& records() const noexcept { return records_; }
  [[nodiscard]] bool truncated() const noexcept { return truncated_; }

  /// Total rounds per tag (charged and idle spans).
  [[nodiscard]] const std::map<std::string, std::uint64_t, std::less<>>& tagged() const noexcept {
    return tagged_;
  }
  [[nodiscard]] std::uint64_t tagged(std::string_view tag) const;

  /// Round-by-round CSV: round,lane,transmitters,receptions,collisions.
  void write_csv(std::ostream& out) const;

  bool success = false;
  /// Free-form counters filled in by protocols (retries, repeats, ...).
  std::map<std::string, std::uint64_t, std::less<>> counters;

 private:
  friend class Simulator;

  std::uint64_t rounds_ = 0;
  std::uint64_t charged_ = 0;
  std::uint64_t transmissions_ = 0;
  std::uint64_t receptions_ = 0;
  std::uint64_t collisions_ = 0;
  std::uint64_t lane_violations_ = 0;
  std::uint64_t digest_ = 1469598103934665603ull;
  std::vector<RoundRecord> records_;
  bool truncated_ = false;
  std::map<std::string, std::uint64_t, std::less<>> tagged_;
};

/// {"rounds": int, "charged_rounds": int, "success": bool}
std::string trace_summary_json(const Trace& trace);

/// How a node came to hold a new best message.
enum class AdoptionSource : std::uint8_t { origin, reception, oracle };

struct Adoption {
  NodeId node = 0;
  Message before;
  Message after;
  AdoptionSource source = AdoptionSource::origin;
  NodeId provider = kNoNode;  // holder the message came from (oracle only)
};

class RoundObserver {
 public:
  virtual ~RoundObserver() = default;
  virtual void on_round(std::uint64_t round, Lane lane, std::span<const Transmission> sent,
                        std::span<const Reception> heard) = 0;
  virtual void on_adoption(const Adoption&) {}
};

/// Synchronous round engine. A listener receives iff exactly one neighbor
/// transmits; transmitters receive nothing; there is no collision detection.
class Simulator {
 public:
  Simulator(const Network& net, Mode mode, TraceOptions options = {});

  [[nodiscard]] const Network& network() const noexcept { return *net_; }
  [[nodiscard]] Mode mode() const noexcept { return mode_; }
  /// Elapsed time: engine rounds plus charged rounds.
  [[nodiscard]] std::uint64_t now() const noexcept { return trace_.total_rounds(); }

  /// Executes one round. Returns receptions sorted by listener id; the span
  /// stays valid until the next call. Throws ValidationError when a node
  /// transmits twice.
  std::span<const Reception> step(Lane lane, std::span<const Transmission> sent);

  /// Dense form: actions[v] is the packet v transmits, or nullopt to listen.
  std::vector<std::optional<Packet>> step(Lane lane,
                                          const std::vector<std::optional<Packet>>& actions);

  /// A span of all-silent rounds that is not stepped individually.
  void idle(std::uint64_t rounds, std::string_view tag);

  /// Charged-cost accounting. Throws ModeError in faithful mode.
  void charge(std::uint64_t rounds, std::string_view tag);

  void add_observer(RoundObserver* observer);
  void notify(const Adoption& adoption);

  [[nodiscard]] const Trace& trace() const noexcept { return trace_; }
  Trace& trace() noexcept { return trace_; }
  Trace take_trace() { return std::move(trace_); }

 private:
  const Network* net_;
  Mode mode_;
  TraceOptions options_;
  Trace trace_;
  std::vector<RoundObserver*> observers_;

  std::vector<std::uint32_t> hits_;
  std::vector<std::uint32_t> last_sender_;
  std::vector<char> transmitting_;
  std::vector<NodeId> touched_;
  std::vector<Reception> heard_;
};

/// Per-round protocol driven by run().
class RoundProtocol {
 public:
  virtual ~RoundProtocol() = default;
  virtual void begin(const Network& net, std::uint64_t seed) = 0;
  virtual void actions(std::uint64_t round, std::vector<Transmission>& out) = 0;
  virtual void deliver(std::uint64_t round, std::span<const Reception> heard) = 0;
  [[nodiscard]] virtual bool finished() const = 0;
  [[nodiscard]] virtual Lane lane(std::uint64_t /*round*/) const { return Lane::single; }
};

struct RunResult {
  Trace trace;
  bool success = false;
  bool timed_out = false;
};

/// Steps `protocol` until it finishes or `max_rounds` elapse.
RunResult run(const Network& net, RoundProtocol& protocol, std::uint64_t max_rounds,
              std::uint64_t seed, TraceOptions options = {},
              std::span<RoundObserver* const> observers = {});

/// Everyone listens, forever.
class SilentProtocol final : public RoundProtocol {
 public:
  void begin(const Network&, std::uint64_t) override {}
  void actions(std::uint64_t, std::vector<Transmission>&) override {}
  void deliver(std::uint64_t, std::span<const Reception>) override {}
  [[nodiscard]] bool finished() const override { return false; }
};

/// Recomputes every round's receptions from the transmitting set by brute
/// force and counts disagreements with the engine.
class CollisionChecker final : public RoundObserver {
 public:
  explicit CollisionChecker(const Network& net) : net_(&net) {}
  void on_round(std::uint64_t round, Lane lane, std::span<const Transmission> sent,
                std::span<const Reception> heard) override;
  [[nodiscard]] std::uint64_t rounds_checked() const noexcept { return rounds_; }
  [[nodiscard]] std::uint64_t mismatches() const noexcept { return mismatches_; }

 private:
  const Network* net_;
  std::uint64_t rounds_ = 0;
  std::uint64_t mismatches_ = 0;
};

/// Audits adoption events: bests never decrease, and every new best was
/// either originated by the node, heard this round, or handed over by a
/// node that held it.
class MessageAuditor final : public RoundObserver {
 public:
  explicit MessageAuditor(std::size_t n) : best_(n), heard_(n) {}
  void on_round(std::uint64_t round, Lane lane, std::span<const Transmission> sent,
                std::span<const Reception> heard) override;
  void on_adoption(const Adoption& adoption) override;

  [[nodiscard]] std::uint64_t adoptions() const noexcept { return adoptions_; }
  [[nodiscard]] std::uint64_t monotonicity_violations() const noexcept { return non_monotone_; }
  [[nodiscard]] std::uint64_t conservation_violations() const noexcept { return leaked_; }
  [[nodiscard]] const std::vector<Message>& bests() const noexcept { return best_; }

 private:
  std::vector<Message> best_;
  std::vector<Message> heard_;
  std::vector<NodeId> heard_nodes_;
  std::uint64_t adoptions_ = 0;
  std::uint64_t non_monotone_ = 0;
  std::uint64_t leaked_ = 0;
};

}  // namespace radionet
