// radionet: generate networks, run protocol campaigns, Monte Carlo analyses,
// claim fuzzing and constant calibration.
//
// Exit codes: 0 ok (timeouts included), 1 claim violations or internal
// failure, 2 usage error, 3 validation error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "radionet/analysis.hpp"
#include "radionet/errors.hpp"
#include "radionet/harness.hpp"
#include "radionet/primitives.hpp"
#include "radionet/protocols.hpp"
#include "radionet/topology.hpp"

namespace {

using namespace radionet;

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;

struct TopologyArgs {
  std::string kind = "path";
  std::size_t n = 16;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::string net_file;

  void attach(CLI::App* app, bool allow_file) {
    app->add_option("--topology", kind, "path|cycle|grid|random_tree|star|gnp");
    app->add_option("--n", n, "node count");
    app->add_option("--rows", rows, "grid rows");
    app->add_option("--cols", cols, "grid columns");
    app->add_option("--p", p, "edge probability for gnp");
    app->add_option("--topology-seed", seed, "seed for random topologies");
    if (allow_file) app->add_option("--net", net_file, "network JSON written by gen");
  }

  [[nodiscard]] TopologySpec spec() const {
    const auto k = parse_topology_kind(kind);
    if (!k) throw ValidationError("unknown topology '" + kind + "'");
    TopologySpec t;
    t.kind = *k;
    t.n = n;
    t.rows = rows;
    t.cols = cols;
    t.p = p;
    t.seed = seed;
    if (t.kind == TopologyKind::grid) t.n = rows * cols;
    return t;
  }

  [[nodiscard]] Network network() const {
    return net_file.empty() ? build_topology(spec()) : load_network(net_file);
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Profile resolve_profile(const std::string& config, const std::string& profile) {
  return config.empty() ? named_profile(profile) : load_profile(config);
}

int run_main(int argc, char** argv) {
  CLI::App app{"radionet: radio network broadcast and leader election experiments"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "write a topology as canonical network JSON");
  TopologyArgs gen_topo;
  gen_topo.attach(gen, false);
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--seed", gen_seed, "topology seed (random_tree, gnp)");
  gen->add_option("--out,-o", gen_out, "output file (stdout by default)");

  // run
  auto* run = app.add_subcommand("run", "run a seeded protocol campaign, append rows to CSV");
  TopologyArgs run_topo;
  run_topo.attach(run, true);
  std::string run_spec, run_protocol = "broadcast", run_mode, run_config, run_profile = "desk",
                        run_out, run_trace_dir;
  NodeId run_source = 0;
  std::size_t run_seeds = 1, run_sources = 1;
  std::uint64_t run_first_seed = 1, run_cap = 0;
  run->add_option("--spec", run_spec, "experiment JSON; other flags are ignored when given");
  run->add_option("--protocol", run_protocol, "broadcast|compete|election|baseline");
  run->add_option("--mode", run_mode, "faithful|charged (overrides the profile)");
  run->add_option("--config", run_config, "profile JSON");
  run->add_option("--profile", run_profile, "desk|paper");
  run->add_option("--source", run_source, "source node for broadcast and baseline");
  run->add_option("--sources", run_sources, "random source count for compete");
  run->add_option("--seeds", run_seeds, "number of seeds");
  run->add_option("--first-seed", run_first_seed, "first seed of the range");
  run->add_option("--round-cap", run_cap, "round cap (0: protocol default)");
  run->add_option("--out,-o", run_out, "CSV to append to (stdout by default)");
  run->add_option("--trace-dir", run_trace_dir, "directory for per-seed trace summaries");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Monte Carlo clustering analyses");
  TopologyArgs an_topo;
  an_topo.attach(analyze, true);
  std::string an_kind = "center", an_out, an_constants;
  NodeId an_node = 0;
  std::vector<double> an_betas{0.05};
  std::size_t an_trials = 1000, an_reps = 10;
  int an_jlo = -1, an_jhi = -1;
  double an_ccp = 0.0;
  std::uint64_t an_seed = 1;
  analyze->add_option("--kind", an_kind, "center|cprop|subpaths")->check(
      CLI::IsMember({"center", "cprop", "subpaths"}));
  analyze->add_option("--node", an_node, "origin node");
  analyze->add_option("--beta", an_betas, "beta values for center");
  analyze->add_option("--trials", an_trials, "trials per beta or per j");
  analyze->add_option("--reps", an_reps, "partitions for subpaths");
  analyze->add_option("--j-lo", an_jlo, "first j (default: desk range)");
  analyze->add_option("--j-hi", an_jhi, "last j");
  analyze->add_option("--c-cp", an_ccp, "cprop constant (default: from --constants)");
  analyze->add_option("--constants", an_constants, "frozen constants JSON");
  analyze->add_option("--seed", an_seed, "seed");
  analyze->add_option("--out,-o", an_out, "CSV output (stdout by default)");

  // verify
  auto* verify = app.add_subcommand("verify", "fuzz the S-quantity claims, emit a JSON report");
  std::string v_claims = "trans1,trans2,goodj,goodjcond", v_out;
  FuzzOptions v_opts;
  std::uint64_t v_seed = 7;
  verify->add_option("--claims", v_claims, "comma-separated subset of trans1,trans2,goodj,goodjcond");
  verify->add_option("--samples", v_opts.samples, "samples per claim");
  verify->add_option("--max-length", v_opts.max_length, "dense vector length bound");
  verify->add_option("--seed", v_seed, "seed");
  verify->add_option("--out,-o", v_out, "report file (stdout by default)");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "measure and freeze the envelope constants");
  CalibrationOptions cal_opts;
  std::string cal_out;
  cal->add_option("--seed", cal_opts.seed, "battery seed");
  cal->add_option("--margin", cal_opts.margin, "safety factor applied to measured constants");
  cal->add_option("--effort", cal_opts.effort, "scales every trial count");
  cal->add_option("--out,-o", cal_out, "constants file (stdout by default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (gen->parsed()) {
    auto t = gen_topo.spec();
    t.seed = gen_seed;
    emit(gen_out, network_to_json(build_topology(t)) + "\n");
    return 0;
  }

  if (run->parsed()) {
    ExperimentSpec spec;
    if (!run_spec.empty()) {
      spec = experiment_from_json(read_text_file(run_spec));
    } else {
      spec.profile = resolve_profile(run_config, run_profile);
      if (!run_mode.empty()) {
        const auto m = parse_mode(run_mode);
        if (!m) throw ValidationError("mode must be 'faithful' or 'charged'");
        spec.profile.compete.mode = *m;
      }
      const auto p = parse_protocol(run_protocol);
      if (!p) throw ValidationError("unknown protocol '" + run_protocol + "'");
      spec.protocol = *p;
      spec.network_file = run_topo.net_file;
      if (spec.network_file.empty()) spec.topology = run_topo.spec();
      spec.source = run_source;
      spec.source_count = run_sources;
      for (std::size_t k = 0; k < run_seeds; ++k) spec.seeds.push_back(run_first_seed + k);
      spec.round_cap = run_cap;
      spec.output_csv = run_out;
      spec.trace_dir = run_trace_dir;
    }
    spec.profile.compete.validate();
    const Network net = experiment_network(spec);
    if (spec.protocol != ProtocolKind::election && spec.protocol != ProtocolKind::compete &&
        !net.contains(spec.source)) {
      throw ValidationError("source id out of range");
    }
    if (spec.protocol != ProtocolKind::baseline) {
      // Surface infeasible configurations before any seed runs.
      if (spec.profile.compete.j_range(net.diameter()).empty() && net.size() > 1) {
        throw ValidationError("empty j-range for diameter " + std::to_string(net.diameter()));
      }
    }
    const auto rows = campaign(net, spec);
    for (const auto& r : rows) {
      if (r.status.rfind("error: ", 0) == 0) std::cerr << "seed " << r.seed << ": " << r.status << '\n';
    }
    if (spec.output_csv.empty() || spec.output_csv == "-") {
      write_results_csv(std::cout, rows);
    } else {
      append_results_csv(spec.output_csv, rows);
    }
    return 0;
  }

  if (analyze->parsed()) {
    const Network net = an_topo.network();
    if (!net.contains(an_node)) throw ValidationError("node out of range");
    std::ostringstream out;
    if (an_kind == "center") {
      out << "beta,mean_dist,stderr,trials,bound_5s\n";
      const auto layers = bfs_layers(net, an_node);
      for (const double beta : an_betas) {
        const auto e = mc_center_distance(net, an_node, beta, an_trials, an_seed);
        out << beta << ',' << e.mean << ',' << e.stderr_ << ',' << e.trials << ','
            << 5.0 * s_quantities(layers, beta).S << '\n';
      }
    } else if (an_kind == "cprop") {
      JRange range = desk_profile().compete.j_range(net.diameter());
      if (an_jlo >= 0) range.lo = an_jlo;
      if (an_jhi >= 0) range.hi = an_jhi;
      double c_cp = an_ccp;
      if (c_cp <= 0.0) {
        if (an_constants.empty()) throw ValidationError("cprop needs --c-cp or --constants");
        c_cp = load_constants(an_constants).c_cp;
      }
      const auto report = cprop_experiment(net, an_node, range.lo, range.hi, an_trials, an_seed, c_cp);
      write_cprop_csv(out, report);
      std::cerr << "fraction_met=" << report.fraction_met << '\n';
    } else {
      const double d = std::max(1, net.diameter());
      const auto ends = std::pair{an_node, static_cast<NodeId>(net.size() - 1)};
      const auto path = shortest_path(net, ends.first, ends.second);
      out << "rep,bad,subpaths,length,radius\n";
      for (std::size_t r = 0; r < an_reps; ++r) {
        const auto coarse = partition(net, std::pow(d, -0.5), an_seed + r, PartitionOptions{{}, false});
        const auto rep = classify_subpaths(net, coarse, path);
        out << r << ',' << rep.bad << ',' << rep.labels.size() << ',' << rep.length << ','
            << rep.radius << '\n';
      }
    }
    emit(an_out, out.str());
    return 0;
  }

  if (verify->parsed()) {
    std::vector<ClaimReport> reports;
    std::size_t violations = 0;
    for (const auto& name : split(v_claims)) {
      reports.push_back(fuzz_claim(parse_claim(name), v_opts, v_seed));
      violations += reports.back().violations;
    }
    emit(v_out, claim_reports_json(reports, v_seed));
    return violations == 0 ? 0 : kExitViolation;
  }

  if (cal->parsed()) {
    const auto c = calibrate(cal_opts, &std::cerr);
    emit(cal_out, constants_to_json(c));
    return 0;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_main(argc, argv);
  } catch (const radionet::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const radionet::GenerationError& e) {
    std::cerr << "generation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitViolation;
  }
}
