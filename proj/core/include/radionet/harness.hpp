#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radionet/network.hpp"
#include "radionet/protocols.hpp"
#include "radionet/topology.hpp"

namespace radionet {

inline constexpr int kConfigVersion = 1;
inline constexpr std::string_view kConfigSchema = "radionet-config";
inline constexpr std::string_view kExperimentSchema = "radionet-experiment";
inline constexpr std::string_view kConstantsSchema = "radionet-constants";

struct ElectionParams {
  double c_cand = 4.0;  // candidate probability c_cand log n / n
  int id_bits = 40;
};

struct BaselineParams {
  double timeout_factor = 64.0;
};

/// Empirical constants standing in for the O(.) bounds. Frozen once by
/// `calibrate` and read back by the tests.
struct FrozenConstants {
  double c_diam = 0.0;  // strong diameter <= c_diam log n / beta
  double c_cut = 0.0;   // edge-cut rate <= c_cut beta
  double p0 = 0.0;      // Decay reception probability >= p0
  double c_cp = 0.0;    // mean center distance <= c_cp 2^j log n / log D
  double c_bad = 0.0;   // mean bad subpaths <= c_bad D^0.63
  double c_base = 0.0;  // baseline median rounds ~ c_base (D + log n) log n
  double margin = 1.25;
  std::uint64_t seed = 0;
  std::string battery;  // description of the calibration battery
};

struct Profile {
  std::string name = "desk";
  CompeteConfig compete;
  ElectionParams election;
  BaselineParams baseline;
  std::optional<FrozenConstants> constants;
};

/// Desk scale: j in [1, max(2, ceil(0.5 log D))], at least 16 background
/// clusterings, short faithful layers.
Profile desk_profile();
/// Literal exponents and ranges, no floors. Infeasible below very large D.
Profile paper_profile();
/// "desk" or "paper"; ValidationError otherwise.
Profile named_profile(std::string_view name);

/// Versioned JSON. Missing keys default to the named base profile; unknown
/// keys, a wrong schema or version raise ValidationError.
Profile profile_from_json(std::string_view text);
std::string profile_to_json(const Profile& profile);
Profile load_profile(const std::filesystem::path& path);

FrozenConstants constants_from_json(std::string_view text);
std::string constants_to_json(const FrozenConstants& constants);
FrozenConstants load_constants(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// ---------------------------------------------------------------------------
// Experiments

enum class ProtocolKind : std::uint8_t { broadcast, compete, election, baseline };

std::string_view to_string(ProtocolKind kind) noexcept;
std::optional<ProtocolKind> parse_protocol(std::string_view name) noexcept;

struct ExperimentSpec {
  TopologySpec topology = TopologySpec::path(16);
  /// When set, the network is read from this JSON file instead.
  std::string network_file;
  ProtocolKind protocol = ProtocolKind::broadcast;
  Profile profile = desk_profile();
  NodeId source = 0;                   // broadcast / baseline
  std::vector<SourceMessage> sources;  // compete; empty means `source_count` random ones
  std::size_t source_count = 1;
  std::vector<std::uint64_t> seeds;
  std::uint64_t round_cap = 0;  // 0: protocol default
  std::string output_csv;       // appended to by `run`
  std::string trace_dir;        // per-seed trace summaries when set

  [[nodiscard]] Mode mode() const noexcept { return profile.compete.mode; }
};

/// `seeds` may be a list or a count n (meaning 1..n).
ExperimentSpec experiment_from_json(std::string_view text);
std::string experiment_to_json(const ExperimentSpec& spec);

struct ResultRow {
  std::uint64_t seed = 0;
  std::string topology;
  std::size_t n = 0;
  int diameter = 0;
  std::string protocol;
  std::string mode;
  std::uint64_t rounds = 0;          // simulated rounds
  std::uint64_t charged_rounds = 0;  // analytically charged rounds
  bool success = false;
  std::size_t informed = 0;
  std::int64_t leader = -1;          // election only
  std::string status = "ok";         // ok | timeout | error: <what>
  std::string trace_summary;         // trace_summary_json of the run
};

/// Column order of the results CSV.
inline constexpr std::string_view kResultsHeader =
    "seed,topology,n,diameter,protocol,mode,rounds,charged_rounds,success,informed,leader_id,"
    "status";

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool header = true);
/// Appends rows; writes the header first when the file is new or empty.
void append_results_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows);

/// Runs one seed. Failures become rows with status "error: ...".
ResultRow run_one(const Network& net, const ExperimentSpec& spec, std::uint64_t seed);

/// One row per seed, sorted by seed. Seeds run on up to RADIONET_THREADS
/// workers (default 1).
std::vector<ResultRow> campaign(const ExperimentSpec& spec);
std::vector<ResultRow> campaign(const Network& net, const ExperimentSpec& spec);

/// Worker count from RADIONET_THREADS, at least 1.
unsigned worker_count();

Network load_network(const std::filesystem::path& path);
Network experiment_network(const ExperimentSpec& spec);

// ---------------------------------------------------------------------------
// Calibration

struct CalibrationOptions {
  std::uint64_t seed = 0xCA1B;
  double margin = 1.25;
  /// Scales every trial count; 1 is the documented battery.
  double effort = 1.0;
};

/// Measures each constant on a battery disjoint from the acceptance
/// instances (different sizes and seeds) and applies the margin. `log`
/// receives one line per measurement when non-null.
FrozenConstants calibrate(const CalibrationOptions& options, std::ostream* log = nullptr);

}  // namespace radionet
