#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace radionet {

// Philox4x32-10 (Salmon, Moraes, Dror, Shaw; SC'11). A keyed bijection on
// 128-bit counters; every (key, counter) pair yields an independent block.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter apply(Counter ctr, Key key) noexcept;
};

/// What a stream is used for. Lives in the top byte of a stream tag so that
/// different subsystems never share draws.
enum class Purpose : std::uint8_t {
  generic = 0,
  topology = 1,
  shift = 2,            // exponential shifts of Partition(beta)
  decay = 3,            // per-node Decay coin flips
  cluster_coin = 4,     // coordinated per-cluster coins
  candidate = 5,        // leader-election candidacy
  candidate_id = 6,
  sequence = 7,         // fine-clustering sequence of a coarse cluster
  monte_carlo = 8,
  fuzz = 9,
  control = 10,         // precomputation traffic
};

/// Packs a purpose and a 24-bit auxiliary index into a stream tag.
constexpr std::uint32_t make_tag(Purpose purpose, std::uint32_t aux = 0) noexcept {
  return (static_cast<std::uint32_t>(purpose) << 24) | (aux & 0x00FFFFFFu);
}

struct StreamLabel {
  std::uint32_t tag = 0;
  std::uint32_t node = 0;
  std::uint32_t round = 0;

  friend constexpr bool operator==(const StreamLabel&, const StreamLabel&) = default;
};

/// Counter-based random stream keyed by (master seed, label). Two streams
/// with the same seed and label produce the same draws regardless of when
/// or in which order they are created. Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, StreamLabel label) noexcept;
  RandomStream(std::uint64_t seed, Purpose purpose, std::uint32_t node = 0,
               std::uint32_t round = 0, std::uint32_t aux = 0) noexcept
      : RandomStream(seed, StreamLabel{make_tag(purpose, aux), node, round}) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() noexcept { return next_u64(); }

  std::uint64_t next_u64() noexcept;
  /// Uniform on (0, 1].
  double uniform_open_closed() noexcept;
  /// Uniform on [0, 1).
  double uniform() noexcept;
  bool bernoulli(double p) noexcept;
  /// True with probability 2^-exponent (exponent >= 0).
  bool coin_pow2(unsigned exponent) noexcept;
  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept;

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] StreamLabel label() const noexcept { return label_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  StreamLabel label_;
  std::uint32_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  unsigned used_ = 2;
};

/// Inverse-CDF map for Exp(beta): -ln(u) / beta, u in (0, 1].
double exponential_from_uniform(double u, double beta);

/// One Exp(beta) draw, Pr[X <= y] = 1 - e^{-beta y}. Throws ValidationError
/// when beta <= 0.
double sample_exponential(RandomStream& stream, double beta);

/// Derives a 64-bit seed from (seed, label); used to hand out sub-seeds.
std::uint64_t derive_seed(std::uint64_t seed, StreamLabel label) noexcept;

}  // namespace radionet
