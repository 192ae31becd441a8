#include "radionet/radio.hpp"

#include <algorithm>

#include "radionet/errors.hpp"

namespace radionet {
namespace {

constexpr std::uint64_t kFnvPrime = 1099511628211ull;

inline void mix(std::uint64_t& h, std::uint64_t word) noexcept {
  for (int i = 0; i < 8; ++i) {
    h ^= (word >> (8 * i)) & 0xFFu;
    h *= kFnvPrime;
  }
}

}  // namespace

std::string_view to_string(Lane lane) noexcept {
  switch (lane) {
    case Lane::pre: return "pre";
    case Lane::main: return "main";
    case Lane::background: return "background";
    case Lane::single: return "single";
  }
  return "unknown";
}

std::string_view to_string(Mode mode) noexcept {
  return mode == Mode::faithful ? "faithful" : "charged";
}

std::optional<Mode> parse_mode(std::string_view name) noexcept {
  if (name == "faithful") return Mode::faithful;
  if (name == "charged") return Mode::charged;
  return std::nullopt;
}

std::uint64_t Trace::tagged(std::string_view tag) const {
  const auto it = tagged_.find(tag);
  return it == tagged_.end() ? 0 : it->second;
}

Simulator::Simulator(const Network& net, Mode mode, TraceOptions options)
    : net_(&net),
      mode_(mode),
      options_(options),
      hits_(net.size(), 0),
      last_sender_(net.size(), 0),
      transmitting_(net.size(), 0) {}

std::span<const Reception> Simulator::step(Lane lane, std::span<const Transmission> sent) {
  const std::uint64_t round = now();
  if ((lane == Lane::main && round % 2 != 0) || (lane == Lane::background && round % 2 == 0)) {
    ++trace_.lane_violations_;
  }

  touched_.clear();
  heard_.clear();
  for (std::uint32_t i = 0; i < sent.size(); ++i) {
    const NodeId v = sent[i].node;
    if (!net_->contains(v)) throw ValidationError("transmitter id out of range");
    if (transmitting_[v]) {
      for (std::uint32_t k = 0; k < i; ++k) transmitting_[sent[k].node] = 0;
      for (const NodeId w : touched_) hits_[w] = 0;
      throw ValidationError("node transmits twice in one round");
    }
    transmitting_[v] = 1;
    for (const NodeId w : net_->neighbors(v)) {
      if (hits_[w]++ == 0) touched_.push_back(w);
      last_sender_[w] = i;
    }
  }

  std::uint32_t collisions = 0;
  for (const NodeId w : touched_) {
    if (!transmitting_[w]) {
      if (hits_[w] == 1) {
        Packet packet = sent[last_sender_[w]].packet;
        packet.sender = sent[last_sender_[w]].node;
        heard_.push_back({w, packet});
      } else {
        ++collisions;
      }
    }
    hits_[w] = 0;
  }
  for (const auto& t : sent) transmitting_[t.node] = 0;
  std::sort(heard_.begin(), heard_.end(),
            [](const Reception& a, const Reception& b) { return a.node < b.node; });

  auto& h = trace_.digest_;
  mix(h, round);
  mix(h, static_cast<std::uint64_t>(lane));
  mix(h, sent.size());
  for (const auto& t : sent) mix(h, t.node);
  for (const auto& r : heard_) {
    mix(h, (static_cast<std::uint64_t>(r.node) << 32) | r.packet.sender);
    mix(h, static_cast<std::uint64_t>(r.packet.message.value));
  }
  ++trace_.rounds_;
  trace_.transmissions_ += sent.size();
  trace_.receptions_ += heard_.size();
  trace_.collisions_ += collisions;

  if (options_.record_rounds) {
    if (trace_.records_.size() < options_.max_records) {
      RoundRecord rec;
      rec.round = round;
      rec.lane = lane;
      rec.collisions = collisions;
      rec.transmitters.reserve(sent.size());
      for (const auto& t : sent) rec.transmitters.push_back(t.node);
      rec.receptions.reserve(heard_.size());
      for (const auto& r : heard_) rec.receptions.emplace_back(r.node, r.packet.sender);
      trace_.records_.push_back(std::move(rec));
    } else {
      trace_.truncated_ = true;
    }
  }

  for (auto* obs : observers_) obs->on_round(round, lane, sent, heard_);
  return heard_;
}

std::vector<std::optional<Packet>> Simulator::step(
    Lane lane, const std::vector<std::optional<Packet>>& actions) {
  if (actions.size() != net_->size()) throw ValidationError("one action per node required");
  std::vector<Transmission> sent;
  for (NodeId v = 0; v < actions.size(); ++v) {
    if (actions[v]) sent.push_back({v, *actions[v]});
  }
  std::vector<std::optional<Packet>> out(net_->size());
  for (const auto& r : step(lane, sent)) out[r.node] = r.packet;
  return out;
}

void Simulator::idle(std::uint64_t rounds, std::string_view tag) {
  if (rounds == 0) return;
  mix(trace_.digest_, 0x1D1Eull);
  mix(trace_.digest_, rounds);
  trace_.rounds_ += rounds;
  trace_.tagged_[std::string(tag)] += rounds;
}

void Simulator::charge(std::uint64_t rounds, std::string_view tag) {
  if (mode_ != Mode::charged) throw ModeError("charge() requires charged-cost mode");
  if (rounds == 0) return;
  mix(trace_.digest_, 0xC4A7ull);
  mix(trace_.digest_, rounds);
  trace_.charged_ += rounds;
  trace_.tagged_[std::string(tag)] += rounds;
}

void Simulator::add_observer(RoundObserver* observer) {
  if (observer != nullptr) observers_.push_back(observer);
}

void Simulator::notify(const Adoption& adoption) {
  for (auto* obs : observers_) obs->on_adoption(adoption);
}

RunResult run(const Network& net, RoundProtocol& protocol, std::uint64_t max_rounds,
              std::uint64_t seed, TraceOptions options,
              std::span<RoundObserver* const> observers) {
  if (max_rounds < 1) throw ValidationError("max_rounds must be at least 1");
  Simulator sim(net, Mode::faithful, options);
  for (auto* obs : observers) sim.add_observer(obs);
  protocol.begin(net, seed);
  std::vector<Transmission> sent;
  RunResult result;
  for (std::uint64_t r = 0; r < max_rounds; ++r) {
    sent.clear();
    protocol.actions(r, sent);
    const auto heard = sim.step(protocol.lane(r), sent);
    protocol.deliver(r, heard);
    if (protocol.finished()) {
      result.success = true;
      break;
    }
  }
  result.timed_out = !result.success;
  sim.trace().success = result.success;
  result.trace = sim.take_trace();
  return result;
}

void CollisionChecker::on_round(std::uint64_t, Lane, std::span<const Transmission> sent,
                                std::span<const Reception> heard) {
  ++rounds_;
  // Sort-and-group over (listener, sender) incidences; shares no state or
  // data layout with the engine's counting arrays.
  std::vector<std::pair<NodeId, std::size_t>> senders;
  std::vector<std::pair<NodeId, NodeId>> incidences;
  for (std::size_t i = 0; i < sent.size(); ++i) {
    const auto& t = sent[i];
    senders.emplace_back(t.node, i);
    for (const NodeId w : net_->neighbors(t.node)) incidences.emplace_back(w, t.node);
  }
  std::sort(senders.begin(), senders.end());
  std::sort(incidences.begin(), incidences.end());
  std::vector<std::pair<NodeId, NodeId>> expected;
  for (std::size_t i = 0; i < incidences.size();) {
    std::size_t j = i;
    while (j < incidences.size() && incidences[j].first == incidences[i].first) ++j;
    const NodeId listener = incidences[i].first;
    const auto tx = std::lower_bound(senders.begin(), senders.end(), std::make_pair(listener, std::size_t{0}));
    const bool transmitting = tx != senders.end() && tx->first == listener;
    if (j - i == 1 && !transmitting) {
      expected.push_back(incidences[i]);
    }
    i = j;
  }
  if (expected.size() != heard.size()) {
    mismatches_ += expected.size() > heard.size() ? expected.size() - heard.size()
                                                  : heard.size() - expected.size();
  }
  const std::size_t common = std::min(expected.size(), heard.size());
  for (std::size_t i = 0; i < common; ++i) {
    const auto& r = heard[i];
    if (expected[i] != std::make_pair(r.node, r.packet.sender)) {
      ++mismatches_;
      continue;
    }
    const auto tx = std::lower_bound(senders.begin(), senders.end(),
                                     std::make_pair(r.packet.sender, std::size_t{0}));
    if (sent[tx->second].packet.message != r.packet.message) ++mismatches_;
  }
}

void MessageAuditor::on_round(std::uint64_t, Lane, std::span<const Transmission>,
                              std::span<const Reception> heard) {
  for (const NodeId v : heard_nodes_) heard_[v] = Message{};
  heard_nodes_.clear();
  for (const auto& r : heard) {
    heard_[r.node] = r.packet.message;
    heard_nodes_.push_back(r.node);
  }
}

void MessageAuditor::on_adoption(const Adoption& a) {
  ++adoptions_;
  if (a.node >= best_.size()) {
    ++leaked_;
    return;
  }
  if (!(a.after > best_[a.node])) ++non_monotone_;
  bool justified = false;
  switch (a.source) {
    case AdoptionSource::origin:
      justified = a.after.origin == a.node;
      break;
    case AdoptionSource::reception:
      justified = !heard_[a.node].empty() && heard_[a.node] == a.after;
      break;
    case AdoptionSource::oracle:
      justified = a.provider < best_.size() && best_[a.provider] == a.after;
      break;
  }
  if (!justified) ++leaked_;
  if (a.after > best_[a.node]) best_[a.node] = a.after;
}

}  // namespace radionet
