#include <algorithm>
#include <cmath>

#include "radionet/errors.hpp"
#include "radionet/primitives.hpp"
#include "radionet/random.hpp"

namespace radionet {

int ceil_log2(std::size_t n) noexcept {
  int bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return std::max(bits, 1);
}

double log2_floor1(double x) noexcept { return std::max(1.0, std::log2(x)); }

bool decay_coin(std::uint64_t seed, NodeId node, std::uint64_t round, int step,
                std::uint32_t instance) noexcept {
  RandomStream coin(seed, Purpose::decay, node, static_cast<std::uint32_t>(round), instance);
  return coin.coin_pow2(static_cast<unsigned>(step));
}

std::vector<DecayReception> decay_round(Simulator& sim, Lane lane,
                                        std::span<const DecayParticipant> participants,
                                        std::span<const NodeId> listeners, std::uint64_t seed) {
  const std::size_t n = sim.network().size();
  std::vector<char> role(n, 0);
  for (const auto& p : participants) {
    if (p.node >= n) throw ValidationError("participant id out of range");
    role[p.node] = 1;
  }
  for (const NodeId v : listeners) {
    if (v >= n) throw ValidationError("listener id out of range");
    if (role[v] == 1) throw ValidationError("a node cannot both participate and listen");
    role[v] = 2;
  }

  std::vector<Message> best(n);
  std::vector<Transmission> sent;
  const int steps = ceil_log2(n);
  for (int i = 1; i <= steps; ++i) {
    sent.clear();
    const std::uint64_t round = sim.now();
    for (const auto& p : participants) {
      if (decay_coin(seed, p.node, round, i)) {
        sent.push_back({p.node, Packet{p.node, PacketKind::data, p.message}});
      }
    }
    for (const auto& r : sim.step(lane, sent)) {
      if (role[r.node] == 2) best[r.node] = std::max(best[r.node], r.packet.message);
    }
  }

  std::vector<DecayReception> out;
  for (NodeId v = 0; v < n; ++v) {
    if (role[v] == 2 && !best[v].empty()) out.push_back({v, best[v]});
  }
  return out;
}

std::vector<DecayReception> decay_round(const Network& net,
                                        std::span<const DecayParticipant> participants,
                                        std::span<const NodeId> listeners, std::uint64_t seed) {
  Simulator sim(net, Mode::faithful);
  return decay_round(sim, Lane::single, participants, listeners, seed);
}

}  // namespace radionet
