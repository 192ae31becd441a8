#include "radionet/random.hpp"

#include <cmath>

#include "radionet/errors.hpp"

namespace radionet {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;
constexpr int kPhiloxRounds = 10;

__extension__ typedef unsigned __int128 u128;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) noexcept {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

// 53 random mantissa bits.
constexpr double kInv53 = 1.0 / 9007199254740992.0;

}  // namespace

Philox4x32::Counter Philox4x32::apply(Counter ctr, Key key) noexcept {
  for (int round = 0; round < kPhiloxRounds; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

RandomStream::RandomStream(std::uint64_t seed, StreamLabel label) noexcept
    : seed_(seed), label_(label) {}

void RandomStream::refill() noexcept {
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed_),
                            static_cast<std::uint32_t>(seed_ >> 32)};
  const auto out = Philox4x32::apply({block_, label_.node, label_.round, label_.tag}, key);
  ++block_;
  buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  used_ = 0;
}

std::uint64_t RandomStream::next_u64() noexcept {
  if (used_ == 2) refill();
  return buffer_[used_++];
}

double RandomStream::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * kInv53;
}

double RandomStream::uniform_open_closed() noexcept {
  return static_cast<double>((next_u64() >> 11) + 1) * kInv53;
}

bool RandomStream::bernoulli(double p) noexcept {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform() < p;
}

bool RandomStream::coin_pow2(unsigned exponent) noexcept {
  if (exponent == 0) return true;
  if (exponent >= 64) return false;
  return next_u64() < (std::uint64_t{1} << (64 - exponent));
}

std::uint64_t RandomStream::uniform_below(std::uint64_t bound) noexcept {
  // Lemire's nearly-divisionless rejection.
  std::uint64_t x = next_u64();
  u128 m = static_cast<u128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = next_u64();
      m = static_cast<u128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double exponential_from_uniform(double u, double beta) {
  if (!(beta > 0.0)) throw ValidationError("exponential rate beta must be positive");
  if (!(u > 0.0 && u <= 1.0)) throw ValidationError("uniform draw must lie in (0, 1]");
  // -log(1) is +0 but -0.0/beta prints as -0; normalise.
  const double value = -std::log(u) / beta;
  return value == 0.0 ? 0.0 : value;
}

double sample_exponential(RandomStream& stream, double beta) {
  if (!(beta > 0.0)) throw ValidationError("exponential rate beta must be positive");
  return exponential_from_uniform(stream.uniform_open_closed(), beta);
}

std::uint64_t derive_seed(std::uint64_t seed, StreamLabel label) noexcept {
  RandomStream stream(seed, label);
  return stream.next_u64();
}

}  // namespace radionet
