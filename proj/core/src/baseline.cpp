#include <cmath>

#include "radionet/errors.hpp"
#include "radionet/protocols.hpp"

namespace radionet {

void DecayBroadcast::begin(const Network& net, std::uint64_t seed) {
  if (!net.contains(source_)) throw ValidationError("source id out of range");
  seed_ = seed;
  epoch_length_ = ceil_log2(net.size());
  informed_.assign(net.size(), 0);
  informed_[source_] = 1;
  informed_count_ = 1;
  participants_.clear();
}

void DecayBroadcast::actions(std::uint64_t round, std::vector<Transmission>& out) {
  const int step = static_cast<int>(round % static_cast<std::uint64_t>(epoch_length_)) + 1;
  if (step == 1) {
    participants_.clear();
    for (NodeId v = 0; v < informed_.size(); ++v) {
      if (informed_[v]) participants_.push_back(v);
    }
  }
  const Message m{value_, source_};
  for (const NodeId v : participants_) {
    if (decay_coin(seed_, v, round, step)) out.push_back({v, Packet{v, PacketKind::data, m}});
  }
}

void DecayBroadcast::deliver(std::uint64_t, std::span<const Reception> heard) {
  for (const auto& r : heard) {
    if (!informed_[r.node]) {
      informed_[r.node] = 1;
      ++informed_count_;
    }
  }
}

BaselineResult decay_broadcast_baseline(const Network& net, NodeId source, std::uint64_t seed,
                                        std::uint64_t max_rounds, const TraceOptions& trace,
                                        double timeout_factor) {
  const int log_n = ceil_log2(net.size());
  if (max_rounds == 0) {
    max_rounds = static_cast<std::uint64_t>(
        std::ceil(timeout_factor * (net.diameter() + log_n) * log_n));
  }
  DecayBroadcast protocol(source, 0);
  BaselineResult out;
  if (net.size() == 1) {
    protocol.begin(net, seed);
    out.informed = protocol.informed();
    out.informed_count = 1;
    out.success = true;
    out.trace.success = true;
    return out;
  }
  auto result = run(net, protocol, max_rounds, seed, trace);
  out.informed = protocol.informed();
  out.informed_count = protocol.informed_count();
  out.success = result.success;
  out.timed_out = result.timed_out;
  out.rounds = result.trace.rounds();
  out.trace = std::move(result.trace);
  return out;
}

}  // namespace radionet
