#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "radionet/errors.hpp"
#include "radionet/harness.hpp"

using namespace radionet;
namespace fs = std::filesystem;

namespace {

std::string csv_of(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_results_csv(out, rows);
  return out.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("radionet-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Config, ProfilesRoundTrip) {
  for (const auto& p : {desk_profile(), paper_profile()}) {
    const auto text = profile_to_json(p);
    EXPECT_EQ(profile_to_json(profile_from_json(text)), text);
  }
  auto with_constants = desk_profile();
  with_constants.constants = load_constants(std::string(RADIONET_CONFIG_DIR) + "/frozen_constants.json");
  const auto text = profile_to_json(with_constants);
  const auto back = profile_from_json(text);
  ASSERT_TRUE(back.constants.has_value());
  EXPECT_EQ(back.constants->c_cp, with_constants.constants->c_cp);
}

TEST(Config, MissingKeysTakeProfileDefaults) {
  const auto p = profile_from_json(
      R"({"schema":"radionet-config","version":1,"profile":"paper","compete":{"c1":3.0}})");
  EXPECT_EQ(p.name, "paper");
  EXPECT_EQ(p.compete.j_rule, JRangeRule::fractions);
  EXPECT_EQ(p.compete.c1, 3.0);
}

TEST(Config, RejectsUnknownKeysAndWrongHeaders) {
  EXPECT_THROW(profile_from_json(R"({"schema":"radionet-config","version":1,"bogus":1})"),
               ValidationError);
  EXPECT_THROW(
      profile_from_json(R"({"schema":"radionet-config","version":1,"compete":{"c_one":1}})"),
      ValidationError);
  EXPECT_THROW(profile_from_json(R"({"schema":"radionet-config","version":2})"), ValidationError);
  EXPECT_THROW(profile_from_json(R"({"schema":"other","version":1})"), ValidationError);
  EXPECT_THROW(profile_from_json(
                   R"({"schema":"radionet-config","version":1,"compete":{"coarse_beta_exp":2}})"),
               ValidationError);
  EXPECT_THROW(profile_from_json("{"), ValidationError);
  EXPECT_THROW(named_profile("huge"), ValidationError);
}

TEST(Config, FrozenConstantsFileIsValid) {
  const auto c = load_constants(std::string(RADIONET_CONFIG_DIR) + "/frozen_constants.json");
  for (double v : {c.c_diam, c.c_cut, c.p0, c.c_cp, c.c_bad, c.c_base}) EXPECT_GT(v, 0.0);
  EXPECT_LE(c.p0, 1.0);
  EXPECT_EQ(constants_from_json(constants_to_json(c)).c_bad, c.c_bad);
}

TEST(Config, ShippedProfilesLoad) {
  EXPECT_EQ(load_profile(std::string(RADIONET_CONFIG_DIR) + "/desk.json").name, "desk");
  EXPECT_EQ(load_profile(std::string(RADIONET_CONFIG_DIR) + "/paper.json").name, "paper");
}

TEST(Experiment, JsonRoundTrip) {
  ExperimentSpec s;
  s.topology = TopologySpec::grid(4, 6);
  s.protocol = ProtocolKind::compete;
  s.sources = {{1, 10}, {5, 20}};
  s.seeds = {3, 1, 2};
  s.round_cap = 5000;
  s.output_csv = "out.csv";
  const auto text = experiment_to_json(s);
  const auto back = experiment_from_json(text);
  EXPECT_EQ(experiment_to_json(back), text);
  EXPECT_EQ(back.topology.label(), "grid-4x6");
  EXPECT_EQ(back.seeds, (std::vector<std::uint64_t>{3, 1, 2}));
  EXPECT_EQ(back.sources.size(), 2u);
}

TEST(Experiment, SeedCountExpands) {
  const auto s = experiment_from_json(
      R"({"schema":"radionet-experiment","version":1,"topology":{"kind":"path","n":8},"seeds":4})");
  EXPECT_EQ(s.seeds, (std::vector<std::uint64_t>{1, 2, 3, 4}));
  EXPECT_THROW(experiment_from_json(R"({"schema":"radionet-experiment","version":1,"sedes":4})"),
               ValidationError);
}

TEST(Campaign, ZeroSeedsGiveNoRows) {
  ExperimentSpec s;
  EXPECT_TRUE(campaign(s).empty());
}

TEST(Campaign, SameSpecSameBytes) {
  ExperimentSpec s;
  s.topology = TopologySpec::random_tree(200, 4);
  s.protocol = ProtocolKind::election;
  s.seeds = {5, 2, 9, 1};
  const auto a = campaign(s);
  const auto b = campaign(s);
  EXPECT_EQ(csv_of(a), csv_of(b));
  ASSERT_EQ(a.size(), 4u);
  EXPECT_EQ(a[0].seed, 1u);  // sorted by seed
  EXPECT_EQ(a[3].seed, 9u);
  for (const auto& r : a) {
    EXPECT_TRUE(r.success);
    EXPECT_GE(r.leader, 0);
    EXPECT_EQ(r.status, "ok");
  }
}

TEST(Campaign, CsvLayout) {
  ExperimentSpec s;
  s.topology = TopologySpec::path(16);
  s.seeds = {1};
  const auto text = csv_of(campaign(s));
  EXPECT_EQ(text.substr(0, text.find('\n')), kResultsHeader);
  EXPECT_NE(text.find("\n1,path-16,16,15,broadcast,charged,"), std::string::npos);
}

TEST(Campaign, SuccessRecomputableFromTraceSummary) {
  for (auto kind : {ProtocolKind::broadcast, ProtocolKind::compete, ProtocolKind::election,
                    ProtocolKind::baseline}) {
    ExperimentSpec s;
    s.topology = TopologySpec::grid(8, 8);
    s.protocol = kind;
    s.source_count = 3;
    s.seeds = {1, 2, 3};
    for (const auto& r : campaign(s)) {
      const auto doc = nlohmann::json::parse(r.trace_summary);
      EXPECT_EQ(doc.at("success").get<bool>(), r.success) << to_string(kind);
      EXPECT_EQ(doc.at("rounds").get<std::uint64_t>(), r.rounds);
      EXPECT_EQ(doc.at("charged_rounds").get<std::uint64_t>(), r.charged_rounds);
      if (r.success && kind != ProtocolKind::election) { EXPECT_EQ(r.informed, r.n); }
    }
  }
}

TEST(Campaign, ErrorsBecomeRows) {
  ExperimentSpec s;
  s.topology = TopologySpec::path(8);
  s.source = 99;
  s.seeds = {1, 2};
  const auto rows = campaign(s);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_FALSE(r.success);
    EXPECT_EQ(r.status.rfind("error: ", 0), 0u);
  }
}

TEST(Campaign, ChargedRoundsMonotoneInDiameter) {
  std::uint64_t last = 0;
  for (std::size_t n : {256u, 512u, 1024u, 2048u, 4096u}) {
    ExperimentSpec s;
    s.topology = TopologySpec::path(n);
    s.seeds = {1};
    const auto rows = campaign(s);
    ASSERT_TRUE(rows[0].success) << n;
    const auto total = rows[0].rounds + rows[0].charged_rounds;
    EXPECT_GT(total, last) << n;
    last = total;
  }
}

TEST(Campaign, AppendWritesHeaderOnce) {
  const auto dir = scratch_dir("append");
  const auto file = dir / "rows.csv";
  ExperimentSpec s;
  s.topology = TopologySpec::path(8);
  s.seeds = {1};
  append_results_csv(file, campaign(s));
  append_results_csv(file, campaign(s));
  const auto text = read_text_file(file);
  EXPECT_EQ(text.find(kResultsHeader), 0u);
  EXPECT_EQ(text.find(kResultsHeader, 1), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  fs::remove_all(dir);
}

#ifdef RADIONET_CLI

namespace {

int cli(const std::string& args) {
  const std::string cmd = std::string(RADIONET_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, GenIsDeterministic) {
  const auto dir = scratch_dir("gen");
  const auto a = (dir / "a.json").string();
  const auto b = (dir / "b.json").string();
  EXPECT_EQ(cli("gen --topology path --n 16 --seed 1 -o " + a), 0);
  EXPECT_EQ(cli("gen --topology path --n 16 --seed 1 -o " + b), 0);
  EXPECT_EQ(read_text_file(a), read_text_file(b));
  EXPECT_EQ(load_network(a).size(), 16u);
  fs::remove_all(dir);
}

TEST(Cli, RunBroadcastOnNetworkFile) {
  const auto dir = scratch_dir("run");
  const auto net = (dir / "net.json").string();
  const auto out = (dir / "rows.csv").string();
  ASSERT_EQ(cli("gen --topology grid --rows 6 --cols 6 -o " + net), 0);
  EXPECT_EQ(cli("run --protocol broadcast --net " + net +
                " --source 0 --mode charged --seeds 10 -o " + out),
            0);
  const auto text = read_text_file(out);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 11);
  fs::remove_all(dir);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("run --bogus"), 2);
  EXPECT_EQ(cli("frobnicate"), 2);
  EXPECT_EQ(cli("run --protocol broadcast --topology path --n 1024 --profile paper --seeds 1"), 3);
  EXPECT_EQ(cli("gen --topology gnp --n 50 --p 0"), 3);
  EXPECT_EQ(cli("run --protocol broadcast --topology path --n 64 --round-cap 1 --seeds 1"), 0);
}

TEST(Cli, VerifyReportsNoViolations) {
  const auto dir = scratch_dir("verify");
  const auto out = (dir / "report.json").string();
  EXPECT_EQ(cli("verify --claims trans1,trans2,goodj,goodjcond --samples 10000 --seed 7 -o " + out), 0);
  const auto doc = nlohmann::json::parse(read_text_file(out));
  for (const char* c : {"trans1", "trans2", "goodj", "goodjcond"}) {
    EXPECT_EQ(doc["claims"][c]["samples"], 10000) << c;
    EXPECT_EQ(doc["claims"][c]["violations"], 0) << c;
  }
  fs::remove_all(dir);
}

#endif
