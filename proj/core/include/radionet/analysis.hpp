#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "radionet/network.hpp"

namespace radionet {

// ---------------------------------------------------------------------------
// Weighted layer sums

struct SQuantities {
  double T = 0.0;  // sum i x_i e^{-i beta}
  double B = 0.0;  // sum x_i e^{-i beta}
  double S = 0.0;  // T / B
};

/// Compensated sums over a dense vector indexed 0..D. Throws ValidationError
/// for an all-zero or negative vector or beta <= 0.
SQuantities s_quantities(std::span<const double> x, double beta);
SQuantities s_quantities(const LayerVector& layers, double beta);

bool is_power_of_two(std::size_t i) noexcept;

/// f(x)_i = sum of x over [2i, 4i-1] when i is a power of two, else 0.
std::vector<double> transform_f(std::span<const double> x);

/// g(x)_i = (sum_{l <= i} l x_l) / i when i is a power of two, else 0.
/// Throws ValidationError unless x vanishes off the powers of two.
std::vector<double> transform_g(std::span<const double> x);

/// Values of a power-of-two supported vector: values[i] = x_{2^i}. Lets the
/// k-sequence machinery run at diameters far beyond what a dense vector holds.
struct PowerProfile {
  std::vector<double> values;
};

/// Throws ValidationError when x has mass off the powers of two.
PowerProfile power_profile(std::span<const double> x);
SQuantities s_quantities(const PowerProfile& profile, double beta);

struct TransformCheck {
  bool holds = true;
  bool vacuous = false;  // transformed vector is zero
  double s_x = 0.0;
  double s_transformed = 0.0;
  double factor = 1.0;  // holds iff s_x <= factor * s_transformed
  /// 1 - s_x / (factor * s_transformed); negative on violation.
  [[nodiscard]] double margin() const noexcept;
};

/// Relative slack allowed in the inequality checks.
inline constexpr double kRelativeTolerance = 1e-9;

/// S_x <= 11 S_{f(x)}.
TransformCheck check_trans1(std::span<const double> x, double beta);
/// S_x <= 2 S_{g(x)}; x must vanish off the powers of two.
TransformCheck check_trans2(std::span<const double> x, double beta);

struct KSequence {
  std::vector<double> k;  // k[i] = log2(x'_{2^{i+1}} / x'_{2^i})
  double sum = 0.0;
  bool lower_ok = true;   // every k_i >= -1
  bool sum_ok = true;     // sum <= log2 n
};

/// Throws ValidationError on a zero or negative entry.
KSequence k_sequence(const PowerProfile& xp, double n);
KSequence k_sequence(std::span<const double> xp, double n);

/// log2(log n / log D) rounded to the nearest integer, both logs clamped at 1.
int window_offset(double n, double diameter) noexcept;

struct GoodJCheck {
  bool condition = true;  // every window sum from the offset start is within 2^m log n/log D
  bool bound = true;      // S_{x', 2^-j} <= 258 2^j log n / log D
  std::size_t windows = 0;  // windows inside the sequence (the rest are vacuous)
  double s = 0.0;
  double limit = 0.0;
  [[nodiscard]] bool implication_holds() const noexcept { return !condition || bound; }
};

inline constexpr double kGoodJConstant = 258.0;
inline constexpr int kMinWindow = 8;

GoodJCheck check_goodj(const PowerProfile& xp, int j, double n, double diameter);
GoodJCheck check_goodj(std::span<const double> xp, int j, double n, double diameter);

struct BadJCount {
  int count = 0;
  double bound = 0.0;  // 0.04 log2 D
  bool invariants_ok = true;
  [[nodiscard]] bool within_bound() const noexcept {
    return !invariants_ok || count <= bound;
  }
};

/// Number of j in [j_lo, j_hi] whose window (start j + offset) has some
/// m >= 8 with sum > 2^m log n / log D.
BadJCount count_bad_j(const KSequence& ks, double n, double diameter, int j_lo, int j_hi);
BadJCount count_bad_j(std::span<const double> xp, double n, double diameter, int j_lo, int j_hi);

// ---------------------------------------------------------------------------
// Fuzzing

enum class Claim : std::uint8_t { trans1, trans2, goodj, goodjcond };

std::string to_string(Claim claim);
/// Accepts trans1, trans2, goodj, goodjcond. Throws ValidationError otherwise.
Claim parse_claim(std::string_view name);

struct ClaimReport {
  Claim claim = Claim::trans1;
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::size_t vacuous = 0;
  /// Smallest margin seen over non-vacuous samples; +inf when there were none.
  double worst_margin = std::numeric_limits<double>::infinity();
};

struct FuzzOptions {
  std::size_t samples = 10000;
  std::size_t max_length = 1024;   // dense vectors cover indices 0..max_length-1
  std::uint64_t max_entry = 1024;  // integer entries in [0, max_entry]
  int max_log_diameter = 48;       // profile-based samples for goodj/goodjcond
};

ClaimReport fuzz_claim(Claim claim, const FuzzOptions& options, std::uint64_t seed);

/// {"claims": {name: {samples, violations, vacuous, worst_margin}}, "seed": ...}
std::string claim_reports_json(std::span<const ClaimReport> reports, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Monte Carlo

struct MeanEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t trials = 0;
};

/// Distance from v to its Partition(beta) center, averaged over `trials`
/// independent shift draws (at least 100). Trial t uses the shifts of
/// draw_shifts(n, beta, mc_trial_seed(seed, t)).
MeanEstimate mc_center_distance(const Network& net, NodeId v, double beta, std::size_t trials,
                                std::uint64_t seed);

std::uint64_t mc_trial_seed(std::uint64_t seed, std::size_t trial) noexcept;

struct CpropRow {
  int j = 0;
  double beta = 0.0;
  double mean_dist = 0.0;
  double stderr_ = 0.0;
  double bound = 0.0;  // c_cp 2^j log n / log D
  bool met = false;
};

struct CpropReport {
  std::vector<CpropRow> rows;
  double fraction_met = 0.0;
};

/// Throws ValidationError when j_hi < j_lo.
CpropReport cprop_experiment(const Network& net, NodeId v, int j_lo, int j_hi,
                             std::size_t trials_per_j, std::uint64_t seed, double c_cp);

/// CSV j,beta,mean_dist,stderr,bound,met.
void write_cprop_csv(std::ostream& out, const CpropReport& report);

}  // namespace radionet
