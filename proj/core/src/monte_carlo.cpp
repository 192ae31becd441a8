#include <cmath>
#include <ostream>

#include "radionet/analysis.hpp"
#include "radionet/errors.hpp"
#include "radionet/primitives.hpp"
#include "radionet/random.hpp"

namespace radionet {

std::uint64_t mc_trial_seed(std::uint64_t seed, std::size_t trial) noexcept {
  return derive_seed(seed, StreamLabel{make_tag(Purpose::monte_carlo, 1),
                                       static_cast<std::uint32_t>(trial >> 32),
                                       static_cast<std::uint32_t>(trial)});
}

MeanEstimate mc_center_distance(const Network& net, NodeId v, double beta, std::size_t trials,
                                std::uint64_t seed) {
  if (trials < 100) throw ValidationError("at least 100 trials required");
  if (v >= net.size()) throw ValidationError("node out of range");
  if (!(beta > 0.0) || beta > 1.0) throw ValidationError("beta must lie in (0, 1]");
  const auto dist = bfs_distances(net, v);
  const std::size_t n = net.size();

  // Welford accumulation in trial order.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto delta = draw_shifts(n, beta, mc_trial_seed(seed, t));
    NodeId best = 0;
    double best_key = delta[0] - dist[0];
    for (NodeId u = 1; u < n; ++u) {
      const double key = delta[u] - dist[u];
      if (key > best_key) {
        best_key = key;
        best = u;
      }
    }
    const double x = dist[best];
    const double d = x - mean;
    mean += d / static_cast<double>(t + 1);
    m2 += d * (x - mean);
  }
  MeanEstimate e;
  e.trials = trials;
  e.mean = mean;
  const double var = trials > 1 ? m2 / static_cast<double>(trials - 1) : 0.0;
  e.stderr_ = std::sqrt(var / static_cast<double>(trials));
  return e;
}

CpropReport cprop_experiment(const Network& net, NodeId v, int j_lo, int j_hi,
                             std::size_t trials_per_j, std::uint64_t seed, double c_cp) {
  if (j_hi < j_lo) throw ValidationError("empty j range");
  if (j_lo < 0) throw ValidationError("j must be non-negative");
  const double ratio = log2_floor1(static_cast<double>(net.size())) /
                       log2_floor1(static_cast<double>(net.diameter()));
  CpropReport report;
  std::size_t met = 0;
  for (int j = j_lo; j <= j_hi; ++j) {
    CpropRow row;
    row.j = j;
    row.beta = std::ldexp(1.0, -j);
    const auto e = mc_center_distance(
        net, v, row.beta, trials_per_j,
        derive_seed(seed, StreamLabel{make_tag(Purpose::monte_carlo, 2), 0,
                                      static_cast<std::uint32_t>(j)}));
    row.mean_dist = e.mean;
    row.stderr_ = e.stderr_;
    row.bound = c_cp * std::ldexp(ratio, j);
    row.met = row.mean_dist <= row.bound;
    met += row.met ? 1 : 0;
    report.rows.push_back(row);
  }
  report.fraction_met = static_cast<double>(met) / static_cast<double>(report.rows.size());
  return report;
}

void write_cprop_csv(std::ostream& out, const CpropReport& report) {
  out << "j,beta,mean_dist,stderr,bound,met\n";
  const auto old = out.precision(10);
  for (const auto& r : report.rows) {
    out << r.j << ',' << r.beta << ',' << r.mean_dist << ',' << r.stderr_ << ',' << r.bound
        << ',' << (r.met ? 1 : 0) << '\n';
  }
  out.precision(old);
}

}  // namespace radionet
