#include <benchmark/benchmark.h>

#include "radionet/harness.hpp"
#include "radionet/protocols.hpp"
#include "radionet/topology.hpp"

using namespace radionet;

static void BM_BroadcastCharged(benchmark::State& state) {
  const auto net = build_topology(TopologySpec::path(static_cast<std::size_t>(state.range(0))));
  auto cfg = desk_profile().compete;
  cfg.mode = Mode::charged;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(broadcast(net, 0, 1, cfg, seed++).success);
}
BENCHMARK(BM_BroadcastCharged)->Arg(512)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_BroadcastFaithful(benchmark::State& state) {
  const auto net = build_topology(TopologySpec::grid(32, 32));
  auto cfg = desk_profile().compete;
  cfg.mode = Mode::faithful;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(broadcast(net, 0, 1, cfg, seed++).success);
}
BENCHMARK(BM_BroadcastFaithful)->Unit(benchmark::kMillisecond);

static void BM_DecayBaseline(benchmark::State& state) {
  const auto net = build_topology(TopologySpec::path(static_cast<std::size_t>(state.range(0))));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(decay_broadcast_baseline(net, 0, seed++).rounds);
}
BENCHMARK(BM_DecayBaseline)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_Election(benchmark::State& state) {
  const auto net = build_topology(TopologySpec::random_tree(1024, 5));
  const auto profile = desk_profile();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(leader_election(net, profile.compete, profile.election.c_cand,
                                             profile.election.id_bits, seed++)
                                 .success());
  }
}
BENCHMARK(BM_Election)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
