#include <algorithm>
#include <cmath>

#include "radionet/errors.hpp"
#include "radionet/protocols.hpp"
#include "radionet/random.hpp"

namespace radionet {
namespace {

constexpr std::uint64_t kMaxCandidateRounds = 10'000;

void judge(ElectionResult& out, std::size_t n) {
  const auto& output = out.run.output;
  out.leader_id.assign(n, -1);
  out.self_identified.assign(n, 0);
  std::size_t selves = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (output[v].empty()) continue;
    out.leader_id[v] = output[v].value;
    if (output[v].origin == v) {
      out.self_identified[v] = 1;
      out.leader = v;
      ++selves;
    }
  }
  out.agreement = !output[0].empty() &&
                  std::all_of(output.begin(), output.end(), [&](const Message& m) { return m == output[0]; });
  out.unique_self = selves == 1;
  if (!out.unique_self) out.leader = kNoNode;
  out.run.trace.success = out.success();
}

}  // namespace

ElectionResult elect_among(const Network& net, std::span<const SourceMessage> candidates,
                           const CompeteConfig& config, std::uint64_t seed,
                           const RunOptions& options) {
  ElectionResult out;
  for (const auto& c : candidates) out.candidates.push_back(c.node);
  out.run = compete(net, candidates, config, seed, options);
  judge(out, net.size());
  return out;
}

ElectionResult leader_election(const Network& net, const CompeteConfig& config, double c_cand,
                               int id_bits, std::uint64_t seed, const RunOptions& options) {
  if (!(c_cand > 0.0)) throw ValidationError("candidate constant must be positive");
  if (id_bits < 1 || id_bits > 62) throw ValidationError("id_bits must lie in [1, 62]");
  const std::size_t n = net.size();
  const double lg_n = std::log2(static_cast<double>(n));
  const double p = n == 1 ? 1.0 : std::min(1.0, c_cand * lg_n / static_cast<double>(n));

  std::vector<SourceMessage> chosen;
  std::uint64_t retries = 0;
  for (std::uint32_t attempt = 0;; ++attempt) {
    if (attempt >= kMaxCandidateRounds) throw InternalError("no candidate after retry budget");
    chosen.clear();
    for (NodeId v = 0; v < n; ++v) {
      RandomStream coin(seed, Purpose::candidate, v, attempt);
      if (!coin.bernoulli(p)) continue;
      RandomStream id(seed, Purpose::candidate_id, v, attempt);
      chosen.push_back({v, static_cast<std::int64_t>(id.uniform_below(std::uint64_t{1} << id_bits))});
    }
    if (!chosen.empty()) break;
    ++retries;
  }
  ElectionResult out = elect_among(net, chosen, config, derive_seed(seed, StreamLabel{make_tag(Purpose::generic, 1), 0, 0}), options);
  out.retries = retries;
  out.run.trace.counters["election_retries"] = retries;
  return out;
}

}  // namespace radionet
