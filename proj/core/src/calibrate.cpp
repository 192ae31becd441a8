#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "radionet/analysis.hpp"
#include "radionet/errors.hpp"
#include "radionet/harness.hpp"
#include "radionet/primitives.hpp"
#include "radionet/random.hpp"

namespace radionet {
namespace {

std::size_t scaled(double base, double effort) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(base * effort)));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct Seeds {
  std::uint64_t base;
  std::uint64_t operator()(std::uint32_t family, std::uint32_t k) const {
    return derive_seed(base, StreamLabel{make_tag(Purpose::generic, 0xCA), family, k});
  }
};

void note(std::ostream* log, const std::string& line) {
  if (log != nullptr) *log << line << '\n' << std::flush;
}

}  // namespace

FrozenConstants calibrate(const CalibrationOptions& o, std::ostream* log) {
  if (!(o.margin >= 1.0)) throw ValidationError("margin must be at least 1");
  if (!(o.effort > 0.0)) throw ValidationError("effort must be positive");
  const Seeds seeds{o.seed};
  FrozenConstants c;
  c.margin = o.margin;
  c.seed = o.seed;

  // Sizes differ from the acceptance instances on purpose.
  const std::vector<TopologySpec> battery = {
      TopologySpec::path(512), TopologySpec::grid(24, 24),
      TopologySpec::random_tree(512, seeds(0, 1)),
      TopologySpec::gnp(512, 2.0 * std::log(512.0) / 512.0, seeds(0, 2))};
  std::vector<Network> nets;
  for (const auto& t : battery) nets.push_back(build_topology(t));
  const double betas[] = {0.02, 0.05, 0.1};

  {  // strong diameter
    double worst = 0.0;
    const std::size_t reps = scaled(20, o.effort);
    for (std::size_t t = 0; t < nets.size(); ++t) {
      const double lg = log2_floor1(static_cast<double>(nets[t].size()));
      for (const double beta : betas) {
        for (std::size_t r = 0; r < reps; ++r) {
          const auto cl = partition(nets[t], beta, seeds(1, static_cast<std::uint32_t>(t * 10000 + r)));
          worst = std::max(worst, cl.max_strong_diameter() * beta / lg);
        }
      }
    }
    c.c_diam = worst * o.margin;
    note(log, "c_diam: max diam*beta/log n = " + std::to_string(worst));
  }

  {  // edge cut rate
    double worst = 0.0;
    const std::size_t trials = scaled(200, o.effort);
    for (std::size_t t = 0; t < nets.size(); ++t) {
      for (const double beta : betas) {
        const auto rate = edge_cut_rate(nets[t], beta, trials, seeds(2, static_cast<std::uint32_t>(t)));
        worst = std::max(worst, rate.mean / beta);
      }
    }
    c.c_cut = worst * o.margin;
    note(log, "c_cut: max mean cut rate/beta = " + std::to_string(worst));
  }

  {  // Decay reception: listener at the hub of a star, k leaves participate
    double lowest = 1.0;
    const std::size_t trials = scaled(2000, o.effort);
    for (const std::size_t n : {100u, 700u}) {
      const Network star = build_topology(TopologySpec::star(n));
      const NodeId hub = 0;
      for (std::size_t k = 1; k < n; k = k < 4 ? k + 1 : k * 2) {
        std::vector<DecayParticipant> parts;
        for (NodeId v = 1; v <= k; ++v) parts.push_back({v, Message{1, v}});
        std::size_t heard = 0;
        for (std::size_t t = 0; t < trials; ++t) {
          const auto got = decay_round(star, parts, std::span<const NodeId>(&hub, 1),
                                       seeds(3, static_cast<std::uint32_t>(n * 100000 + t)));
          heard += got.empty() ? 0 : 1;
        }
        lowest = std::min(lowest, static_cast<double>(heard) / static_cast<double>(trials));
      }
    }
    c.p0 = lowest / o.margin;
    note(log, "p0: min reception frequency = " + std::to_string(lowest));
  }

  {  // center distance per 2^j log n / log D, median over the desk j-range
    double worst = 0.0;
    const std::size_t trials = scaled(300, o.effort);
    const std::vector<std::pair<TopologySpec, bool>> shapes = {{TopologySpec::path(2048), true},
                                                               {TopologySpec::grid(48, 48), false}};
    for (std::size_t s = 0; s < shapes.size(); ++s) {
      const Network net = build_topology(shapes[s].first);
      const NodeId v = static_cast<NodeId>(net.size() / 2 + (shapes[s].second ? 0 : 24));
      const JRange range = desk_profile().compete.j_range(net.diameter());
      const auto report = cprop_experiment(net, v, range.lo, range.hi, trials,
                                           seeds(4, static_cast<std::uint32_t>(s)), 1.0);
      std::vector<double> ratios;
      for (const auto& row : report.rows) ratios.push_back(row.mean_dist / row.bound);
      worst = std::max(worst, median(ratios));
    }
    c.c_cp = worst * o.margin;
    note(log, "c_cp: max median mean/(2^j log n/log D) = " + std::to_string(worst));
  }

  {  // bad subpaths under the coarse clustering
    const Network net = build_topology(TopologySpec::path(2048));
    const double d = net.diameter();
    const double beta = std::pow(d, -0.5);
    const auto path = shortest_path(net, 0, static_cast<NodeId>(net.size() - 1));
    const std::size_t reps = scaled(40, o.effort);
    double total = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto coarse = partition(net, beta, seeds(5, static_cast<std::uint32_t>(r)),
                                    PartitionOptions{{}, false});
      total += static_cast<double>(classify_subpaths(net, coarse, path).bad);
    }
    const double mean = total / static_cast<double>(reps);
    c.c_bad = std::max(mean, 1.0) / std::pow(d, 0.63) * o.margin;
    note(log, "c_bad: mean bad subpaths/D^0.63 = " + std::to_string(mean / std::pow(d, 0.63)));
  }

  {  // baseline rounds per (D + log n) log n; a central value, not an upper bound
    std::vector<double> medians;
    const std::size_t reps = scaled(40, o.effort);
    for (const std::size_t n : {128u, 512u}) {
      const Network net = build_topology(TopologySpec::path(n));
      const double scale = (net.diameter() + ceil_log2(n)) * static_cast<double>(ceil_log2(n));
      std::vector<double> ratios;
      for (std::size_t r = 0; r < reps; ++r) {
        const auto b = decay_broadcast_baseline(net, 0, seeds(6, static_cast<std::uint32_t>(n * 1000 + r)));
        ratios.push_back(static_cast<double>(b.rounds) / scale);
      }
      medians.push_back(median(ratios));
    }
    c.c_base = std::sqrt(medians[0] * medians[1]);
    note(log, "c_base: geometric mean of median ratios = " + std::to_string(c.c_base));
  }

  std::ostringstream battery_text;
  battery_text << "path-512, grid-24x24, random_tree-512, gnp-512 x beta {0.02,0.05,0.1}; "
               << "stars 100/700; cprop path-2048 + grid-48x48; subpaths path-2048; "
               << "baseline path-128/512; effort " << o.effort;
  c.battery = battery_text.str();
  return c;
}

}  // namespace radionet
