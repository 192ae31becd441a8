#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "radionet/network.hpp"

namespace radionet {

enum class TopologyKind { path, cycle, grid, random_tree, star, gnp_connected };

std::string_view to_string(TopologyKind kind) noexcept;
std::optional<TopologyKind> parse_topology_kind(std::string_view name) noexcept;

struct TopologySpec {
  TopologyKind kind = TopologyKind::path;
  std::size_t n = 1;        // ignored for grids
  std::size_t rows = 0;     // grid only
  std::size_t cols = 0;     // grid only
  double p = 0.0;           // gnp_connected only
  std::uint64_t seed = 0;

  static TopologySpec path(std::size_t n) { return {TopologyKind::path, n}; }
  static TopologySpec cycle(std::size_t n) { return {TopologyKind::cycle, n}; }
  static TopologySpec star(std::size_t n) { return {TopologyKind::star, n}; }
  static TopologySpec grid(std::size_t rows, std::size_t cols) {
    return {TopologyKind::grid, rows * cols, rows, cols};
  }
  static TopologySpec random_tree(std::size_t n, std::uint64_t seed) {
    return {TopologyKind::random_tree, n, 0, 0, 0.0, seed};
  }
  static TopologySpec gnp(std::size_t n, double p, std::uint64_t seed) {
    return {TopologyKind::gnp_connected, n, 0, 0, p, seed};
  }

  /// Short human label, e.g. "path-1024" or "grid-32x32".
  [[nodiscard]] std::string label() const;
};

/// Maximum number of G(n, p) samples drawn before giving up on connectivity.
inline constexpr int kGnpMaxAttempts = 100;

/// Builds the requested topology. Deterministic in (spec, seed). Throws
/// ValidationError on bad parameters and GenerationError when G(n, p) stays
/// disconnected after kGnpMaxAttempts samples.
Network build_topology(const TopologySpec& spec);

}  // namespace radionet
