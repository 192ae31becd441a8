#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>

#include "icp_engine.hpp"
#include "radionet/errors.hpp"
#include "radionet/protocols.hpp"
#include "radionet/random.hpp"

namespace radionet {
namespace {

using detail::Board;
using detail::IcpRun;
using detail::IcpSetup;
using detail::LayerIndex;

// Seed families for the clusterings built during precomputation.
enum Family : std::uint32_t { kCoarse = 1, kFine = 2, kBackground = 3 };

std::uint64_t family_seed(std::uint64_t seed, Purpose purpose, Family family, std::uint32_t a,
                          std::uint32_t b) {
  return derive_seed(seed, StreamLabel{make_tag(purpose, family), a, b});
}

std::uint64_t ceil_u(double x) { return static_cast<std::uint64_t>(std::ceil(x)); }

struct Layered {
  Clustering clustering;
  Schedules schedules;
  LayerIndex index;
};

struct Plan {
  std::size_t n = 1;
  int diameter = 0;
  int log_n = 1;          // ceil(log2 n): Decay epoch length
  double lg_n = 1.0;      // log2 n
  double lg_d = 1.0;      // log2 D, at least 1
  double beta_coarse = 1.0;
  JRange j;
  int copies = 1;
  std::size_t seq_len = 1;
  double beta_bg = 1.0;
  int bg_count = 1;
  std::vector<int> radius_j;  // indexed by j - j.lo
  int radius_bg = 1;
  std::uint64_t overhead = 1;  // ceil(c_sched log n)
};

Plan make_plan(const Network& net, const CompeteConfig& cfg) {
  Plan p;
  p.n = net.size();
  p.diameter = net.diameter();
  p.log_n = ceil_log2(p.n);
  p.lg_n = std::max(1.0, std::log2(static_cast<double>(p.n)));
  p.lg_d = log2_floor1(p.diameter);
  const double d = std::max(1, p.diameter);
  p.beta_coarse = std::min(1.0, std::pow(d, -cfg.coarse_beta_exp));
  p.j = cfg.j_range(p.diameter);
  if (p.j.empty()) throw ValidationError("fine-clustering j-range is empty for this diameter");
  p.copies = std::max(cfg.fine_count_min, static_cast<int>(std::ceil(std::pow(d, cfg.fine_count_exp))));
  p.seq_len = std::max<std::size_t>(1, ceil_u(std::pow(d, cfg.seq_len_exp)));
  p.beta_bg = std::min(1.0, std::pow(d, -cfg.background_beta_exp));
  p.bg_count = std::max(cfg.background_count_min,
                        static_cast<int>(std::ceil(std::pow(d, cfg.background_count_exp))));
  for (int j = p.j.lo; j <= p.j.hi; ++j) {
    const double beta = std::ldexp(1.0, -j);
    p.radius_j.push_back(std::max(1, static_cast<int>(std::ceil(cfg.c1 * p.lg_n / (beta * p.lg_d)))));
  }
  p.radius_bg = std::max(1, static_cast<int>(std::ceil(cfg.c_bg * p.lg_n / p.beta_bg)));
  p.overhead = std::max<std::uint64_t>(1, ceil_u(cfg.c_sched * p.log_n));
  return p;
}

struct Precomputed {
  Layered coarse;
  std::vector<std::vector<Layered>> fine;  // [j - lo][copy]
  std::vector<Layered> background;
  std::vector<std::uint64_t> sequence_seed;  // per coarse cluster
  std::vector<char> knows_sequence;          // per node
};

void pay_partition(Simulator& sim, const CompeteConfig& cfg, const Plan& p, double beta) {
  const std::uint64_t cost = ceil_u(cfg.c_part * std::pow(p.log_n, 3) / beta);
  if (sim.mode() == Mode::charged) {
    sim.charge(cost, "partition");
  } else {
    sim.idle(cost, "partition");
  }
}

Layered make_layered(Simulator& sim, const CompeteConfig& cfg, const Plan& p, double beta,
                     std::uint64_t partition_seed, std::uint64_t schedule_seed,
                     const Clustering* regions) {
  Layered out;
  PartitionOptions options;
  if (regions != nullptr) options.region = regions->cluster_of;
  out.clustering = partition(sim.network(), beta, partition_seed, options);
  pay_partition(sim, cfg, p, beta);
  ScheduleParams sp;
  sp.c_sched = cfg.c_sched;
  sp.c_pre = cfg.c_pre;
  out.schedules = build_schedule(sim, out.clustering, sp, schedule_seed);
  if (regions != nullptr) {
    out.index = detail::make_layer_index(out.clustering, out.schedules, regions->cluster_of,
                                         regions->size());
  } else {
    out.index = detail::make_layer_index(out.clustering, out.schedules, {}, 1);
  }
  return out;
}

// Each coarse center sends its sequence seed down the coarse tree; members
// regenerate the sequence from (center, seed).
void disseminate_sequences(Simulator& sim, const Plan& p, Precomputed& pre, std::uint64_t seed) {
  const auto& coarse = pre.coarse.clustering;
  const std::size_t n = p.n;
  pre.knows_sequence.assign(n, 0);
  if (sim.mode() == Mode::charged) {
    int diameter = coarse.max_strong_diameter();
    if (diameter < 0) diameter = 2 * coarse.max_depth();
    sim.charge(static_cast<std::uint64_t>(diameter) + p.overhead, "sequence");
    std::fill(pre.knows_sequence.begin(), pre.knows_sequence.end(), 1);
    return;
  }
  for (const NodeId c : coarse.centers) pre.knows_sequence[c] = 1;
  const auto& layers = pre.coarse.index.by_depth[0];
  std::vector<Transmission> senders;
  std::vector<Transmission> sent;
  for (std::size_t d = 0; d + 1 < layers.size(); ++d) {
    senders.clear();
    for (const NodeId v : layers[d]) {
      if (!pre.knows_sequence[v]) continue;
      const NodeId center = coarse.center[v];
      const auto value = static_cast<std::int64_t>(pre.sequence_seed[coarse.cluster_of[v]] >> 1);
      senders.push_back({v, Packet{v, PacketKind::control, Message{value, center}}});
    }
    for (int epoch = 0; epoch < p.log_n; ++epoch) {
      for (int i = 1; i <= p.log_n; ++i) {
        sent.clear();
        const std::uint64_t round = sim.now();
        for (const auto& t : senders) {
          if (decay_coin(seed, t.node, round, i)) sent.push_back(t);
        }
        for (const auto& r : sim.step(Lane::pre, sent)) {
          const NodeId v = r.node;
          if (r.packet.kind == PacketKind::control && r.packet.message.origin == coarse.center[v] &&
              coarse.depth[v] == static_cast<int>(d) + 1) {
            pre.knows_sequence[v] = 1;
          }
        }
      }
    }
  }
}

Precomputed precompute(Simulator& sim, const CompeteConfig& cfg, const Plan& p,
                       std::uint64_t seed) {
  Precomputed pre;
  pre.coarse = make_layered(sim, cfg, p, p.beta_coarse,
                            family_seed(seed, Purpose::shift, kCoarse, 0, 0),
                            family_seed(seed, Purpose::control, kCoarse, 0, 0), nullptr);
  // The coarse layer index needs a single region for dissemination.
  pre.fine.resize(static_cast<std::size_t>(p.j.count()));
  for (int j = p.j.lo; j <= p.j.hi; ++j) {
    auto& copies = pre.fine[static_cast<std::size_t>(j - p.j.lo)];
    for (int copy = 0; copy < p.copies; ++copy) {
      const auto a = static_cast<std::uint32_t>(j);
      const auto b = static_cast<std::uint32_t>(copy);
      copies.push_back(make_layered(sim, cfg, p, std::ldexp(1.0, -j),
                                    family_seed(seed, Purpose::shift, kFine, a, b),
                                    family_seed(seed, Purpose::control, kFine, a, b),
                                    &pre.coarse.clustering));
    }
  }
  const auto& coarse = pre.coarse.clustering;
  pre.sequence_seed.resize(coarse.size());
  for (std::size_t r = 0; r < coarse.size(); ++r) {
    pre.sequence_seed[r] = derive_seed(seed, StreamLabel{make_tag(Purpose::sequence), coarse.centers[r], 0});
  }
  disseminate_sequences(sim, p, pre, family_seed(seed, Purpose::control, kCoarse, 1, 0));
  for (int b = 0; b < p.bg_count; ++b) {
    const auto a = static_cast<std::uint32_t>(b);
    pre.background.push_back(make_layered(sim, cfg, p, p.beta_bg,
                                          family_seed(seed, Purpose::shift, kBackground, a, 0),
                                          family_seed(seed, Purpose::control, kBackground, a, 0),
                                          nullptr));
  }
  return pre;
}

struct Entry {
  int j_index = 0;
  int copy = 0;
};

Entry sequence_entry(const Plan& p, std::uint64_t sequence_seed, std::size_t e) {
  RandomStream stream(sequence_seed, Purpose::sequence, 0, static_cast<std::uint32_t>(e));
  Entry out;
  out.j_index = static_cast<int>(stream.uniform_below(static_cast<std::uint64_t>(p.j.count())));
  out.copy = static_cast<int>(stream.uniform_below(static_cast<std::uint64_t>(p.copies)));
  return out;
}

constexpr std::uint32_t kBackgroundCoins = 0x800000u;

// Event-driven propagation: schedule operations complete atomically at the
// global time their lane reaches them.
void propagate_charged(Simulator& sim, Board& board, const Plan& p, const Precomputed& pre,
                       std::uint64_t start, std::uint64_t cap) {
  struct Actor {
    std::size_t entry = 0;
    int phase = 0;
    Entry current;
    std::uint64_t lane_end = 0;
    std::size_t background = 0;
  };
  const std::size_t regions = pre.coarse.clustering.size();
  std::vector<Actor> actors(regions + 1);
  using Event = std::pair<std::uint64_t, std::size_t>;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;

  const auto main_cost = [&](const Actor& a) {
    return static_cast<std::uint64_t>(p.radius_j[static_cast<std::size_t>(a.current.j_index)]) + p.overhead;
  };
  const std::uint64_t bg_cost = static_cast<std::uint64_t>(p.radius_bg) + p.overhead;
  for (std::size_t r = 0; r < regions; ++r) {
    auto& a = actors[r];
    a.current = sequence_entry(p, pre.sequence_seed[r], 0);
    a.lane_end = main_cost(a);
    events.push({2 * a.lane_end - 1, r});
  }
  actors[regions].lane_end = bg_cost;
  events.push({2 * bg_cost, regions});

  while (!events.empty()) {
    const auto [at, id] = events.top();
    events.pop();
    if (at > cap) break;
    sim.charge(start + at - sim.now(), "propagation");
    auto& a = actors[id];
    if (id < regions) {
      const auto& layered = pre.fine[static_cast<std::size_t>(a.current.j_index)]
                                    [static_cast<std::size_t>(a.current.copy)];
      detail::apply_phase(board, layered.clustering, layered.index.clusters[id],
                          p.radius_j[static_cast<std::size_t>(a.current.j_index)], a.phase);
    } else {
      const auto& layered = pre.background[a.background];
      detail::apply_phase(board, layered.clustering, layered.index.clusters[0], p.radius_bg, a.phase);
    }
    if (board.informed == p.n) return;

    if (++a.phase == 3) {
      a.phase = 0;
      if (id < regions) {
        if (++a.entry == p.seq_len) continue;
        a.current = sequence_entry(p, pre.sequence_seed[id], a.entry);
      } else {
        a.background = (a.background + 1) % pre.background.size();
      }
    }
    if (id < regions) {
      a.lane_end += main_cost(a);
      events.push({2 * a.lane_end - 1, id});
    } else {
      a.lane_end += bg_cost;
      events.push({2 * a.lane_end, id});
    }
  }
  if (start + cap > sim.now()) sim.charge(start + cap - sim.now(), "propagation");
}

// Round-by-round propagation. Even rounds run the main lane, odd rounds the
// background lane; inside each lane, ICP rounds alternate with rounds of the
// cluster-coin Decay process.
void propagate_faithful(Simulator& sim, Board& board, const Plan& p, Precomputed& pre,
                        const CompeteConfig& cfg, std::uint64_t seed, std::uint64_t start,
                        std::uint64_t cap) {
  const std::size_t regions = pre.coarse.clustering.size();
  std::vector<Message> main_snapshot(p.n);
  std::vector<Message> bg_snapshot(p.n);
  const std::uint64_t coin_seed = derive_seed(seed, StreamLabel{make_tag(Purpose::cluster_coin), 0, 0});
  const std::uint64_t decay_seed = derive_seed(seed, StreamLabel{make_tag(Purpose::decay), 0, 0});

  struct MainActor {
    std::size_t entry = 0;
    std::unique_ptr<IcpRun> run;
  };
  std::vector<MainActor> actors(regions);

  const auto start_entry = [&](std::size_t r) {
    auto& a = actors[r];
    if (a.entry >= p.seq_len) {
      a.run.reset();
      return;
    }
    const Entry e = sequence_entry(p, pre.sequence_seed[r], a.entry);
    const auto& layered = pre.fine[static_cast<std::size_t>(e.j_index)][static_cast<std::size_t>(e.copy)];
    IcpSetup setup;
    setup.clustering = &layered.clustering;
    setup.index = &layered.index;
    setup.region = static_cast<std::uint32_t>(r);
    setup.radius = p.radius_j[static_cast<std::size_t>(e.j_index)];
    setup.decays_per_layer = cfg.faithful_layer_decays;
    setup.epoch_length = p.log_n;
    setup.coin_instance = static_cast<std::uint32_t>(a.entry) & 0x7FFFFFu;
    setup.seed = decay_seed ^ coin_seed;
    setup.snapshot = &main_snapshot;
    setup.allowed = &pre.knows_sequence;
    a.run = std::make_unique<IcpRun>(setup);
  };
  std::size_t bg_instance = 0;
  std::unique_ptr<IcpRun> bg_run;
  const auto start_background = [&] {
    const auto& layered = pre.background[bg_instance % pre.background.size()];
    IcpSetup setup;
    setup.clustering = &layered.clustering;
    setup.index = &layered.index;
    setup.radius = p.radius_bg;
    setup.decays_per_layer = cfg.faithful_layer_decays;
    setup.epoch_length = p.log_n;
    setup.coin_instance = kBackgroundCoins | (static_cast<std::uint32_t>(bg_instance) & 0x7FFFFFu);
    setup.seed = decay_seed ^ coin_seed;
    setup.snapshot = &bg_snapshot;
    bg_run = std::make_unique<IcpRun>(setup);
  };
  for (std::size_t r = 0; r < regions; ++r) start_entry(r);
  start_background();

  std::uint64_t main_steps = 0;
  std::uint64_t bg_steps = 0;
  std::vector<Transmission> sent;
  while (sim.now() - start < cap) {
    const std::uint64_t round = sim.now();
    const bool main_lane = (round - start) % 2 == 0;
    const bool icp_turn = (main_lane ? main_steps : bg_steps) % 2 == 0;
    sent.clear();
    if (main_lane) {
      for (auto& a : actors) {
        if (!a.run) continue;
        if (icp_turn) {
          a.run->icp_transmit(board, round, sent);
        } else {
          a.run->background_transmit(board, round, sent);
        }
      }
    } else if (icp_turn) {
      bg_run->icp_transmit(board, round, sent);
    } else {
      bg_run->background_transmit(board, round, sent);
    }

    for (const auto& r : sim.step(main_lane ? Lane::main : Lane::background, sent)) {
      board.adopt(r.node, r.packet.message, AdoptionSource::reception);
    }

    if (main_lane) {
      ++main_steps;
      for (std::size_t r = 0; r < regions; ++r) {
        auto& a = actors[r];
        if (!a.run) continue;
        if (icp_turn) {
          a.run->icp_advance(board);
        } else {
          a.run->background_advance();
        }
        if (a.run->done()) {
          ++a.entry;
          start_entry(r);
        }
      }
    } else {
      ++bg_steps;
      if (icp_turn) {
        bg_run->icp_advance(board);
      } else {
        bg_run->background_advance();
      }
      if (bg_run->done()) {
        ++bg_instance;
        start_background();
      }
    }
    if (board.informed == p.n) return;
  }
}

}  // namespace

void CompeteConfig::validate() const {
  const auto unit = [](double x, const char* what) {
    if (!(x > 0.0 && x < 1.0)) throw ValidationError(std::string(what) + " must lie in (0, 1)");
  };
  unit(coarse_beta_exp, "coarse_beta_exp");
  unit(fine_count_exp, "fine_count_exp");
  unit(seq_len_exp, "seq_len_exp");
  unit(background_beta_exp, "background_beta_exp");
  unit(background_count_exp, "background_count_exp");
  if (!(j_min_frac >= 0.0 && j_min_frac < j_max_frac)) {
    throw ValidationError("j_min_frac must be below j_max_frac");
  }
  if (j_rule == JRangeRule::fixed && (j_min < 0 || j_max < j_min || j_max > 60)) {
    throw ValidationError("fixed j-range must satisfy 0 <= j_min <= j_max <= 60");
  }
  if (fine_count_min < 1 || background_count_min < 1) {
    throw ValidationError("clustering counts must be at least 1");
  }
  for (const double c : {c1, c_bg, c_sched, c_pre, c_part, timeout_factor}) {
    if (!(c > 0.0)) throw ValidationError("constants must be positive");
  }
  if (faithful_layer_decays < 1) throw ValidationError("faithful_layer_decays must be >= 1");
}

JRange CompeteConfig::j_range(int diameter) const {
  const double lg_d = std::log2(std::max(2, diameter));
  switch (j_rule) {
    case JRangeRule::desk:
      return {1, std::max(2, static_cast<int>(std::ceil(0.5 * lg_d)))};
    case JRangeRule::fractions:
      return {static_cast<int>(std::ceil(j_min_frac * lg_d)),
              static_cast<int>(std::floor(j_max_frac * lg_d))};
    case JRangeRule::fixed:
      return {j_min, j_max};
  }
  return {};
}

std::uint64_t CompeteConfig::default_cap(std::size_t n, int diameter) const {
  const double lg_n = std::max(1.0, std::log2(static_cast<double>(n)));
  const double lg_d = log2_floor1(diameter);
  double cap = timeout_factor * (diameter * lg_n / lg_d + std::pow(lg_n, 4));
  if (mode == Mode::faithful) cap *= ceil_log2(n);
  return std::max<std::uint64_t>(1, ceil_u(cap));
}

CompeteResult compete(const Network& net, std::span<const SourceMessage> sources,
                      const CompeteConfig& config, std::uint64_t seed,
                      const RunOptions& options) {
  config.validate();
  if (sources.empty()) throw ValidationError("source set must not be empty");
  const std::size_t n = net.size();
  for (const auto& s : sources) {
    if (!net.contains(s.node)) throw ValidationError("source id out of range");
  }

  Simulator sim(net, config.mode, options.trace);
  std::unique_ptr<MessageAuditor> auditor;
  if (options.audit) {
    auditor = std::make_unique<MessageAuditor>(n);
    sim.add_observer(auditor.get());
  }
  for (auto* obs : options.observers) sim.add_observer(obs);

  CompeteResult result;
  const double d = std::max(1, net.diameter());
  if (static_cast<double>(sources.size()) > std::pow(d, 0.875)) {
    result.warnings.push_back("source set larger than D^0.875");
  }

  Board board;
  board.sim = &sim;
  board.best.assign(n, Message{});
  std::vector<Message> originated;
  for (const auto& s : sources) {
    const Message m{s.value, s.node};
    originated.push_back(m);
    board.target = std::max(board.target, m);
  }
  for (const auto& m : originated) board.adopt(m.origin, m, AdoptionSource::origin);
  result.target = board.target;

  const Plan plan = make_plan(net, config);
  result.cap = config.round_cap > 0 ? config.round_cap : config.default_cap(n, net.diameter());

  if (board.informed < n) {
    Precomputed pre = precompute(sim, config, plan, seed);
    if (sim.now() % 2 != 0) {
      if (sim.mode() == Mode::charged) {
        sim.charge(1, "align");
      } else {
        sim.idle(1, "align");
      }
    }
    result.precompute_rounds = sim.now();
    if (config.mode == Mode::charged) {
      propagate_charged(sim, board, plan, pre, result.precompute_rounds, result.cap);
    } else {
      propagate_faithful(sim, board, plan, pre, config, seed, result.precompute_rounds, result.cap);
    }
  }
  result.propagation_rounds = sim.now() - result.precompute_rounds;

  result.output = board.best;
  result.informed = board.informed;
  result.success = board.informed == n;
  result.timed_out = !result.success;
  std::sort(originated.begin(), originated.end());
  for (const auto& m : result.output) {
    if (!m.empty() && !std::binary_search(originated.begin(), originated.end(), m)) result.safe = false;
  }
  if (auditor) {
    result.monotonicity_violations = auditor->monotonicity_violations();
    result.conservation_violations = auditor->conservation_violations();
  }
  sim.trace().success = result.success;
  result.trace = sim.take_trace();
  return result;
}

CompeteResult broadcast(const Network& net, NodeId source, std::int64_t value,
                        const CompeteConfig& config, std::uint64_t seed,
                        const RunOptions& options) {
  const SourceMessage s{source, value};
  return compete(net, std::span<const SourceMessage>(&s, 1), config, seed, options);
}

}  // namespace radionet
