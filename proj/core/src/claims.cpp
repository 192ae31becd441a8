#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "radionet/analysis.hpp"
#include "radionet/errors.hpp"
#include "radionet/primitives.hpp"
#include "radionet/random.hpp"

namespace radionet {
namespace {

// Random dense vector in one of several shapes, never all zero.
std::vector<double> random_vector(RandomStream& rng, std::size_t length, std::uint64_t max_entry) {
  std::vector<double> x(length, 0.0);
  const auto entry = [&] { return static_cast<double>(rng.uniform_below(max_entry + 1)); };
  switch (rng.uniform_below(4)) {
    case 0:  // dense uniform
      for (auto& v : x) v = entry();
      break;
    case 1: {  // a few spikes
      const auto spikes = 1 + rng.uniform_below(4);
      for (std::uint64_t s = 0; s < spikes; ++s) x[rng.uniform_below(length)] = entry();
      break;
    }
    case 2: {  // layer-like: polynomial growth then a cliff
      const double a = 2.0 * rng.uniform();
      const auto end = 1 + rng.uniform_below(length);
      x[0] = 1.0;
      for (std::size_t i = 1; i < end; ++i) {
        x[i] = std::min(static_cast<double>(max_entry), std::round(std::pow(static_cast<double>(i), a)));
      }
      break;
    }
    default:  // sparse uniform
      for (auto& v : x) v = rng.bernoulli(0.1) ? entry() : 0.0;
      break;
  }
  if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) {
    x[rng.uniform_below(length)] = 1.0;
  }
  return x;
}

// beta log-uniform in [D^-0.1, D^-0.01].
double random_beta(RandomStream& rng, double diameter) {
  const double ln_d = std::log(std::max(diameter, 2.0));
  return std::exp(-ln_d * (0.01 + 0.09 * rng.uniform()));
}

// g(f(x)) of a random vector with n = ||x||_1, or nothing when f(x)_1 = 0.
struct Transformed {
  PowerProfile xp;
  double n = 0.0;
  double diameter = 0.0;
};

bool random_transformed(RandomStream& rng, const FuzzOptions& o, Transformed& out) {
  const std::size_t length = 4 + rng.uniform_below(std::max<std::size_t>(o.max_length, 5) - 3);
  auto x = random_vector(rng, length, std::max<std::uint64_t>(o.max_entry, 1));
  // Layer vectors of connected graphs have x_0 = 1 and positive x_1..x_D.
  x[0] = 1.0;
  for (std::size_t i = 1; i < length; ++i) x[i] = std::max(x[i], 1.0);
  double n = 0.0;
  for (const double v : x) n += v;
  out.xp = power_profile(transform_g(transform_f(x)));
  out.n = n;
  out.diameter = static_cast<double>(length - 1);
  return out.xp.values.size() > 1 && out.xp.values[0] > 0.0;
}

// x'_1 >= 2, ratios >= 1/2 and ||x'||_1 <= 2n with D far beyond dense sizes.
Transformed random_profile(RandomStream& rng, const FuzzOptions& o) {
  Transformed t;
  const double u = 4.0 + (std::max(o.max_log_diameter, 5) - 4) * rng.uniform();
  t.diameter = std::exp2(u);
  const auto m = static_cast<std::size_t>(std::floor(u));
  t.xp.values.resize(m + 1);
  t.xp.values[0] = 2.0 + 8.0 * rng.uniform();
  double sum = t.xp.values[0];
  for (std::size_t i = 1; i <= m; ++i) {
    double k = -1.0 + 4.0 * rng.uniform();
    if (rng.bernoulli(0.05)) k += 40.0 * rng.uniform();
    k = std::min(k, 900.0 - std::log2(t.xp.values[i - 1]));  // stay finite
    t.xp.values[i] = t.xp.values[i - 1] * std::exp2(k);
    sum += t.xp.values[i];
  }
  t.n = std::max(t.diameter + 1.0, sum / 2.0) * std::exp2(8.0 * rng.uniform());
  return t;
}

void record(ClaimReport& r, bool vacuous, bool violated, double margin) {
  ++r.samples;
  if (vacuous) {
    ++r.vacuous;
    return;
  }
  if (violated) ++r.violations;
  r.worst_margin = std::min(r.worst_margin, margin);
}

}  // namespace

std::string to_string(Claim claim) {
  switch (claim) {
    case Claim::trans1: return "trans1";
    case Claim::trans2: return "trans2";
    case Claim::goodj: return "goodj";
    case Claim::goodjcond: return "goodjcond";
  }
  return "unknown";
}

Claim parse_claim(std::string_view name) {
  if (name == "trans1") return Claim::trans1;
  if (name == "trans2") return Claim::trans2;
  if (name == "goodj") return Claim::goodj;
  if (name == "goodjcond") return Claim::goodjcond;
  throw ValidationError("unknown claim '" + std::string(name) + "'");
}

ClaimReport fuzz_claim(Claim claim, const FuzzOptions& o, std::uint64_t seed) {
  if (o.max_length < 4) throw ValidationError("max_length must be at least 4");
  ClaimReport report;
  report.claim = claim;
  const auto aux = static_cast<std::uint32_t>(claim);
  for (std::size_t s = 0; s < o.samples; ++s) {
    RandomStream rng(seed, Purpose::fuzz, static_cast<std::uint32_t>(s),
                     static_cast<std::uint32_t>(s >> 32), aux);
    switch (claim) {
      case Claim::trans1: {
        const std::size_t length = 2 + rng.uniform_below(o.max_length - 1);
        const auto x = random_vector(rng, length, o.max_entry);
        const auto c = check_trans1(x, random_beta(rng, static_cast<double>(length - 1)));
        record(report, c.vacuous, !c.holds, c.margin());
        break;
      }
      case Claim::trans2: {
        const std::size_t length = 2 + rng.uniform_below(o.max_length - 1);
        std::vector<double> x(length, 0.0);
        for (std::size_t i = 1; i < length; i <<= 1) {
          if (rng.bernoulli(0.6)) x[i] = static_cast<double>(rng.uniform_below(o.max_entry + 1));
        }
        if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) x[1] = 1.0;
        const auto c = check_trans2(x, random_beta(rng, static_cast<double>(length - 1)));
        record(report, c.vacuous, !c.holds, c.margin());
        break;
      }
      case Claim::goodj: {
        Transformed t;
        if (rng.bernoulli(0.5)) {
          t = random_profile(rng, o);
        } else if (!random_transformed(rng, o, t)) {
          record(report, true, false, 0.0);
          break;
        }
        const int j_max = static_cast<int>(std::ceil(0.1 * std::log2(t.diameter))) + 3;
        const int j = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(j_max) + 1));
        const auto g = check_goodj(t.xp, j, t.n, t.diameter);
        record(report, !g.condition, !g.implication_holds(), 1.0 - g.s / g.limit);
        break;
      }
      case Claim::goodjcond: {
        Transformed t;
        if (rng.bernoulli(0.5)) {
          t = random_profile(rng, o);
        } else if (!random_transformed(rng, o, t)) {
          record(report, true, false, 0.0);
          break;
        }
        const double log_d = std::log2(t.diameter);
        const int lo = static_cast<int>(std::ceil(0.01 * log_d));
        const int hi = static_cast<int>(std::floor(0.1 * log_d));
        const auto ks = k_sequence(t.xp, t.n);
        const auto c = count_bad_j(ks, t.n, t.diameter, lo, hi);
        record(report, hi < lo || !c.invariants_ok, !c.within_bound(), c.bound - c.count);
        break;
      }
    }
  }
  return report;
}

std::string claim_reports_json(std::span<const ClaimReport> reports, std::uint64_t seed) {
  nlohmann::ordered_json doc;
  doc["seed"] = seed;
  auto& claims = doc["claims"];
  claims = nlohmann::ordered_json::object();
  for (const auto& r : reports) {
    nlohmann::ordered_json entry;
    entry["samples"] = r.samples;
    entry["violations"] = r.violations;
    entry["vacuous"] = r.vacuous;
    if (std::isfinite(r.worst_margin)) {
      entry["worst_margin"] = r.worst_margin;
    } else {
      entry["worst_margin"] = nullptr;
    }
    claims[to_string(r.claim)] = std::move(entry);
  }
  return doc.dump(2) + "\n";
}

}  // namespace radionet
