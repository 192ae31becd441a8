#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>
#include <thread>

#include "json.hpp"
#include "radionet/analysis.hpp"
#include "radionet/errors.hpp"
#include "radionet/harness.hpp"
#include "radionet/random.hpp"

namespace radionet {
namespace {

using Json = nlohmann::ordered_json;

Json topology_to_json(const TopologySpec& t) {
  Json j;
  j["kind"] = std::string(to_string(t.kind));
  if (t.kind == TopologyKind::grid) {
    j["rows"] = t.rows;
    j["cols"] = t.cols;
  } else {
    j["n"] = t.n;
  }
  if (t.kind == TopologyKind::gnp_connected) j["p"] = t.p;
  if (t.kind == TopologyKind::gnp_connected || t.kind == TopologyKind::random_tree) {
    j["seed"] = t.seed;
  }
  return j;
}

TopologySpec topology_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("topology must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "kind" && key != "n" && key != "rows" && key != "cols" && key != "p" &&
        key != "seed") {
      throw ValidationError("unknown key '" + key + "' in topology");
    }
  }
  TopologySpec t;
  const auto kind = parse_topology_kind(j.value("kind", std::string("path")));
  if (!kind) throw ValidationError("unknown topology kind");
  t.kind = *kind;
  t.n = j.value("n", std::size_t{0});
  t.rows = j.value("rows", std::size_t{0});
  t.cols = j.value("cols", std::size_t{0});
  t.p = j.value("p", 0.0);
  t.seed = j.value("seed", std::uint64_t{0});
  if (t.kind == TopologyKind::grid) t.n = t.rows * t.cols;
  return t;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<SourceMessage> random_sources(std::size_t n, std::size_t count, std::uint64_t seed) {
  count = std::min(count, n);
  RandomStream rng(seed, Purpose::generic, 0, 0, 0x5EED);
  std::vector<NodeId> nodes(n);
  for (NodeId v = 0; v < n; ++v) nodes[v] = v;
  std::vector<SourceMessage> out;
  for (std::size_t k = 0; k < count; ++k) {
    const auto pick = k + rng.uniform_below(n - k);
    std::swap(nodes[k], nodes[pick]);
    out.push_back({nodes[k], static_cast<std::int64_t>(rng.uniform_below(std::uint64_t{1} << 40))});
  }
  return out;
}

}  // namespace

std::string_view to_string(ProtocolKind kind) noexcept {
  switch (kind) {
    case ProtocolKind::broadcast: return "broadcast";
    case ProtocolKind::compete: return "compete";
    case ProtocolKind::election: return "election";
    case ProtocolKind::baseline: return "baseline";
  }
  return "unknown";
}

std::optional<ProtocolKind> parse_protocol(std::string_view name) noexcept {
  if (name == "broadcast") return ProtocolKind::broadcast;
  if (name == "compete") return ProtocolKind::compete;
  if (name == "election") return ProtocolKind::election;
  if (name == "baseline") return ProtocolKind::baseline;
  return std::nullopt;
}

ExperimentSpec experiment_from_json(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("experiment: ") + e.what());
  }
  if (!doc.is_object() || doc.value("schema", std::string()) != kExperimentSchema) {
    throw ValidationError("expected schema '" + std::string(kExperimentSchema) + "'");
  }
  if (doc.value("version", 0) != kConfigVersion) throw ValidationError("unsupported version");
  static const std::set<std::string> known = {
      "schema", "version", "topology", "network_file", "protocol", "profile", "config", "mode",
      "source", "sources", "source_count", "seeds", "round_cap", "output_csv", "trace_dir"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw ValidationError("unknown key '" + key + "' in experiment");
  }

  ExperimentSpec s;
  try {
    if (doc.contains("topology")) s.topology = topology_from_json(doc.at("topology"));
    s.network_file = doc.value("network_file", std::string());
    if (doc.contains("protocol")) {
      const auto p = parse_protocol(doc.at("protocol").get<std::string>());
      if (!p) throw ValidationError("unknown protocol");
      s.protocol = *p;
    }
    if (doc.contains("config")) {
      Json cfg = doc.at("config");
      cfg["schema"] = kConfigSchema;
      cfg["version"] = kConfigVersion;
      s.profile = profile_from_json(cfg.dump());
    } else {
      s.profile = named_profile(doc.value("profile", std::string("desk")));
    }
    if (doc.contains("mode")) {
      const auto m = parse_mode(doc.at("mode").get<std::string>());
      if (!m) throw ValidationError("mode must be 'faithful' or 'charged'");
      s.profile.compete.mode = *m;
    }
    s.source = doc.value("source", NodeId{0});
    if (doc.contains("sources")) {
      for (const auto& e : doc.at("sources")) {
        s.sources.push_back({e.at("node").get<NodeId>(), e.at("value").get<std::int64_t>()});
      }
    }
    s.source_count = doc.value("source_count", std::size_t{1});
    if (doc.contains("seeds")) {
      const auto& seeds = doc.at("seeds");
      if (seeds.is_array()) {
        for (const auto& v : seeds) s.seeds.push_back(v.get<std::uint64_t>());
      } else {
        const auto count = seeds.get<std::uint64_t>();
        for (std::uint64_t k = 1; k <= count; ++k) s.seeds.push_back(k);
      }
    }
    s.round_cap = doc.value("round_cap", std::uint64_t{0});
    s.output_csv = doc.value("output_csv", std::string());
    s.trace_dir = doc.value("trace_dir", std::string());
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("experiment: ") + e.what());
  }
  return s;
}

std::string experiment_to_json(const ExperimentSpec& s) {
  Json doc;
  doc["schema"] = kExperimentSchema;
  doc["version"] = kConfigVersion;
  if (s.network_file.empty()) {
    doc["topology"] = topology_to_json(s.topology);
  } else {
    doc["network_file"] = s.network_file;
  }
  doc["protocol"] = std::string(to_string(s.protocol));
  Json cfg = Json::parse(profile_to_json(s.profile));
  cfg.erase("schema");
  cfg.erase("version");
  doc["config"] = cfg;
  doc["source"] = s.source;
  if (!s.sources.empty()) {
    auto arr = Json::array();
    for (const auto& m : s.sources) arr.push_back(Json{{"node", m.node}, {"value", m.value}});
    doc["sources"] = arr;
  }
  doc["source_count"] = s.source_count;
  doc["seeds"] = s.seeds;
  doc["round_cap"] = s.round_cap;
  if (!s.output_csv.empty()) doc["output_csv"] = s.output_csv;
  if (!s.trace_dir.empty()) doc["trace_dir"] = s.trace_dir;
  return doc.dump(2) + "\n";
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool header) {
  if (header) out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << r.seed << ',' << csv_field(r.topology) << ',' << r.n << ',' << r.diameter << ','
        << r.protocol << ',' << r.mode << ',' << r.rounds << ',' << r.charged_rounds << ','
        << (r.success ? 1 : 0) << ',' << r.informed << ',' << r.leader << ','
        << csv_field(r.status) << '\n';
  }
}

void append_results_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw ValidationError("cannot write " + path.string());
  write_results_csv(out, rows, fresh);
}

Network load_network(const std::filesystem::path& path) {
  return network_from_json(read_text_file(path));
}

Network experiment_network(const ExperimentSpec& spec) {
  if (!spec.network_file.empty()) return load_network(spec.network_file);
  return build_topology(spec.topology);
}

ResultRow run_one(const Network& net, const ExperimentSpec& spec, std::uint64_t seed) {
  ResultRow row;
  row.seed = seed;
  row.topology = spec.network_file.empty() ? spec.topology.label()
                                           : std::filesystem::path(spec.network_file).stem().string();
  row.n = net.size();
  row.diameter = net.diameter();
  row.protocol = std::string(to_string(spec.protocol));
  row.mode = std::string(to_string(spec.mode()));
  CompeteConfig cfg = spec.profile.compete;
  if (spec.round_cap != 0) cfg.round_cap = spec.round_cap;

  const auto fill = [&](const CompeteResult& r) {
    row.rounds = r.trace.rounds();
    row.charged_rounds = r.trace.charged_rounds();
    row.success = r.success;
    row.informed = r.informed;
    row.status = r.timed_out ? "timeout" : "ok";
    row.trace_summary = trace_summary_json(r.trace);
  };
  try {
    switch (spec.protocol) {
      case ProtocolKind::broadcast:
        fill(broadcast(net, spec.source, 1, cfg, seed));
        break;
      case ProtocolKind::compete: {
        const auto sources =
            spec.sources.empty() ? random_sources(net.size(), spec.source_count, seed) : spec.sources;
        fill(compete(net, sources, cfg, seed));
        break;
      }
      case ProtocolKind::election: {
        const auto e = leader_election(net, cfg, spec.profile.election.c_cand,
                                       spec.profile.election.id_bits, seed);
        fill(e.run);
        row.success = e.success();
        row.leader = e.leader == kNoNode ? -1 : static_cast<std::int64_t>(e.leader);
        break;
      }
      case ProtocolKind::baseline: {
        if (!net.contains(spec.source)) throw ValidationError("source id out of range");
        const auto b = decay_broadcast_baseline(net, spec.source, seed, spec.round_cap, {},
                                                spec.profile.baseline.timeout_factor);
        row.rounds = b.trace.rounds();
        row.charged_rounds = b.trace.charged_rounds();
        row.success = b.success;
        row.informed = b.informed_count;
        row.status = b.timed_out ? "timeout" : "ok";
        row.trace_summary = trace_summary_json(b.trace);
        break;
      }
    }
  } catch (const std::exception& e) {
    row.success = false;
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

unsigned worker_count() {
  const char* env = std::getenv("RADIONET_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || v < 1) return 1;
  return static_cast<unsigned>(std::min<long>(v, 256));
}

std::vector<ResultRow> campaign(const Network& net, const ExperimentSpec& spec) {
  std::vector<ResultRow> rows(spec.seeds.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t k = next++; k < rows.size(); k = next++) {
      rows[k] = run_one(net, spec, spec.seeds[k]);
    }
  };
  const unsigned workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(rows.size(), 1));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ResultRow& a, const ResultRow& b) { return a.seed < b.seed; });
  if (!spec.trace_dir.empty()) {
    std::filesystem::create_directories(spec.trace_dir);
    for (const auto& r : rows) {
      if (r.trace_summary.empty()) continue;
      write_text_file(std::filesystem::path(spec.trace_dir) / ("seed-" + std::to_string(r.seed) + ".json"),
                      r.trace_summary);
    }
  }
  return rows;
}

std::vector<ResultRow> campaign(const ExperimentSpec& spec) {
  if (spec.seeds.empty()) return {};
  const Network net = experiment_network(spec);
  return campaign(net, spec);
}

}  // namespace radionet
