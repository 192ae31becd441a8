#include <algorithm>
#include <cmath>

#include "radionet/analysis.hpp"
#include "radionet/errors.hpp"
#include "radionet/primitives.hpp"

namespace radionet {
namespace {

// Kahan-Babuska (Neumaier) running sum.
class Compensated {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be positive");
}

template <typename IndexOf>
SQuantities weighted(std::span<const double> x, double beta, IndexOf index_of) {
  check_beta(beta);
  double base = -1.0;  // smallest index with mass; S is computed relative to it
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] >= 0.0) || !std::isfinite(x[k])) {
      throw ValidationError("vector entries must be finite and non-negative");
    }
    if (x[k] > 0.0 && base < 0.0) base = index_of(k);
  }
  if (base < 0.0) throw ValidationError("vector must have a positive entry");
  Compensated t, b, ts, bs;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] == 0.0) continue;
    const double i = index_of(k);
    const double w = x[k] * std::exp(-(i * beta));
    t.add(i * w);
    b.add(w);
    const double ws = x[k] * std::exp(-((i - base) * beta));
    ts.add((i - base) * ws);
    bs.add(ws);
  }
  SQuantities q;
  q.T = t.value();
  q.B = b.value();
  q.S = base + ts.value() / bs.value();
  return q;
}

double ratio_log(double n, double diameter) noexcept {
  return log2_floor1(n) / log2_floor1(diameter);
}

}  // namespace

SQuantities s_quantities(std::span<const double> x, double beta) {
  return weighted(x, beta, [](std::size_t k) { return static_cast<double>(k); });
}

SQuantities s_quantities(const LayerVector& layers, double beta) {
  const auto reals = layers.as_reals();
  return s_quantities(std::span<const double>(reals), beta);
}

SQuantities s_quantities(const PowerProfile& profile, double beta) {
  return weighted(profile.values, beta, [](std::size_t k) { return std::ldexp(1.0, static_cast<int>(k)); });
}

bool is_power_of_two(std::size_t i) noexcept { return i != 0 && (i & (i - 1)) == 0; }

std::vector<double> transform_f(std::span<const double> x) {
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = 1; i < x.size(); i <<= 1) {
    Compensated s;
    const std::size_t hi = std::min(4 * i, x.size());
    for (std::size_t l = 2 * i; l < hi; ++l) s.add(x[l]);
    out[i] = s.value();
  }
  return out;
}

std::vector<double> transform_g(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!is_power_of_two(i) && x[i] != 0.0) {
      throw ValidationError("g expects a vector that vanishes off the powers of two");
    }
  }
  std::vector<double> out(x.size(), 0.0);
  Compensated prefix;  // sum_{l <= i} l x_l
  for (std::size_t i = 1; i < x.size(); i <<= 1) {
    prefix.add(static_cast<double>(i) * x[i]);
    out[i] = prefix.value() / static_cast<double>(i);
  }
  return out;
}

PowerProfile power_profile(std::span<const double> x) {
  PowerProfile p;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (is_power_of_two(i)) {
      p.values.push_back(x[i]);
    } else if (x[i] != 0.0) {
      throw ValidationError("vector has mass off the powers of two");
    }
  }
  return p;
}

double TransformCheck::margin() const noexcept {
  const double rhs = factor * s_transformed;
  if (rhs <= 0.0) return s_x <= 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return 1.0 - s_x / rhs;
}

namespace {

TransformCheck compare(std::span<const double> x, std::span<const double> tx, double beta,
                       double factor) {
  TransformCheck c;
  c.factor = factor;
  c.s_x = s_quantities(x, beta).S;
  if (std::all_of(tx.begin(), tx.end(), [](double v) { return v == 0.0; })) {
    c.vacuous = true;
    return c;
  }
  c.s_transformed = s_quantities(tx, beta).S;
  c.holds = c.s_x <= factor * c.s_transformed * (1.0 + kRelativeTolerance);
  return c;
}

}  // namespace

TransformCheck check_trans1(std::span<const double> x, double beta) {
  const auto fx = transform_f(x);
  return compare(x, fx, beta, 11.0);
}

TransformCheck check_trans2(std::span<const double> x, double beta) {
  const auto gx = transform_g(x);
  return compare(x, gx, beta, 2.0);
}

KSequence k_sequence(const PowerProfile& xp, double n) {
  KSequence ks;
  for (const double v : xp.values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError("k-sequence needs positive entries at every power of two");
    }
  }
  Compensated sum;
  for (std::size_t i = 0; i + 1 < xp.values.size(); ++i) {
    const double k = std::log2(xp.values[i + 1] / xp.values[i]);
    ks.k.push_back(k);
    sum.add(k);
    if (k < -1.0 - kRelativeTolerance) ks.lower_ok = false;
  }
  ks.sum = sum.value();
  ks.sum_ok = ks.sum <= std::log2(n) * (1.0 + kRelativeTolerance) + kRelativeTolerance;
  return ks;
}

KSequence k_sequence(std::span<const double> xp, double n) {
  return k_sequence(power_profile(xp), n);
}

int window_offset(double n, double diameter) noexcept {
  return std::max(0, static_cast<int>(std::lround(std::log2(ratio_log(n, diameter)))));
}

namespace {

// First m >= 8 whose window from `start` exceeds 2^m * ratio, or -1. Windows
// running past the end are vacuous. `windows` counts the ones evaluated.
int first_exceeding(const std::vector<double>& k, int start, double ratio,
                    std::size_t* windows) {
  if (start < 0) return -1;
  Compensated s;
  for (std::size_t l = static_cast<std::size_t>(start); l < k.size(); ++l) {
    s.add(k[l]);
    const int m = static_cast<int>(l) - start;
    if (m < kMinWindow) continue;
    if (windows != nullptr) ++*windows;
    if (s.value() > std::ldexp(ratio, m) * (1.0 + kRelativeTolerance)) return m;
  }
  return -1;
}

}  // namespace

GoodJCheck check_goodj(const PowerProfile& xp, int j, double n, double diameter) {
  if (j < 0) throw ValidationError("j must be non-negative");
  const auto ks = k_sequence(xp, n);
  const double ratio = ratio_log(n, diameter);
  GoodJCheck g;
  g.condition = first_exceeding(ks.k, j + window_offset(n, diameter), ratio, &g.windows) < 0;
  g.s = s_quantities(xp, std::ldexp(1.0, -j)).S;
  g.limit = kGoodJConstant * std::ldexp(ratio, j);
  g.bound = g.s <= g.limit * (1.0 + kRelativeTolerance);
  return g;
}

GoodJCheck check_goodj(std::span<const double> xp, int j, double n, double diameter) {
  return check_goodj(power_profile(xp), j, n, diameter);
}

BadJCount count_bad_j(const KSequence& ks, double n, double diameter, int j_lo, int j_hi) {
  BadJCount c;
  c.bound = 0.04 * log2_floor1(diameter);
  c.invariants_ok = ks.lower_ok && ks.sum_ok;
  const double ratio = ratio_log(n, diameter);
  const int offset = window_offset(n, diameter);
  for (int j = std::max(j_lo, 0); j <= j_hi; ++j) {
    if (first_exceeding(ks.k, j + offset, ratio, nullptr) >= 0) ++c.count;
  }
  return c;
}

BadJCount count_bad_j(std::span<const double> xp, double n, double diameter, int j_lo,
                      int j_hi) {
  return count_bad_j(k_sequence(xp, n), n, diameter, j_lo, j_hi);
}

}  // namespace radionet
