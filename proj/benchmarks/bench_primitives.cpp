#include <benchmark/benchmark.h>

#include "radionet/analysis.hpp"
#include "radionet/primitives.hpp"
#include "radionet/random.hpp"
#include "radionet/topology.hpp"

using namespace radionet;

static void BM_SimulatorStep(benchmark::State& state) {
  const auto net = build_topology(TopologySpec::grid(64, 64));
  Simulator sim(net, Mode::faithful);
  std::vector<Transmission> sent;
  RandomStream r(1, Purpose::generic);
  for (NodeId v = 0; v < net.size(); ++v) {
    if (r.coin_pow2(3)) sent.push_back({v, Packet{v, PacketKind::data, Message{v, v}}});
  }
  for (auto _ : state) benchmark::DoNotOptimize(sim.step(Lane::single, sent).size());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SimulatorStep);

static void BM_DecayRound(benchmark::State& state) {
  const auto net = build_topology(TopologySpec::star(static_cast<std::size_t>(state.range(0))));
  std::vector<DecayParticipant> p;
  for (NodeId v = 1; v < net.size(); ++v) p.push_back({v, Message{v, v}});
  const std::vector<NodeId> l = {0};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(decay_round(net, p, l, seed++));
}
BENCHMARK(BM_DecayRound)->Arg(64)->Arg(1024);

static void BM_Partition(benchmark::State& state) {
  const auto net = build_topology(TopologySpec::grid(64, 64));
  const double beta = 1.0 / static_cast<double>(state.range(0));
  PartitionOptions opt;
  opt.strong_diameters = false;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(partition(net, beta, seed++, opt).size());
}
BENCHMARK(BM_Partition)->Arg(2)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_CenterDistance(benchmark::State& state) {
  const auto net = build_topology(TopologySpec::path(4096));
  for (auto _ : state) benchmark::DoNotOptimize(mc_center_distance(net, 2048, 0.05, 100, 3).mean);
}
BENCHMARK(BM_CenterDistance)->Unit(benchmark::kMillisecond);

static void BM_SQuantities(benchmark::State& state) {
  std::vector<double> x(static_cast<std::size_t>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(s_quantities(x, 0.01).S);
}
BENCHMARK(BM_SQuantities)->Arg(1024)->Arg(1 << 20);
