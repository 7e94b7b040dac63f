#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "fixtures.hpp"

namespace fs = std::filesystem;
using folkswarm::cli::kExitBadInput;
using folkswarm::cli::kExitInternal;
using folkswarm::cli::kExitOk;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Outcome o;
  o.code = folkswarm::cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

const char* kThreeRecords =
    R"({"hashtag": "#a", "topic": "music", "resource": "urn:1", "impressions": 20, "clicks": 5, "concept_id": "jazz"}
{"hashtag": "#b", "topic": "music", "resource": "urn:2", "impressions": 0, "clicks": 0, "concept_id": "rock"}
{"hashtag": "#c", "topic": "sport", "resource": "urn:3", "impressions": 10, "clicks": 1, "concept_id": "tennis"}
)";

fs::path write(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

class EnvSeed {
 public:
  explicit EnvSeed(const char* value) {
    if (value) {
      setenv(folkswarm::cli::kSeedEnvVar, value, 1);
    } else {
      unsetenv(folkswarm::cli::kSeedEnvVar);
    }
  }
  ~EnvSeed() { unsetenv(folkswarm::cli::kSeedEnvVar); }
};

}  // namespace

TEST(Cli, UsageErrorsAreBadInput) {
  EXPECT_EQ(cli({}).code, kExitBadInput);
  EXPECT_EQ(cli({"fly"}).code, kExitBadInput);
  EXPECT_EQ(cli({"ingest"}).code, kExitBadInput);
  EXPECT_EQ(cli({"bench", "--task", "tags", "--n", "0"}).code, kExitBadInput);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST(Cli, IngestThreeRecords) {
  const auto dir = fixture::temp_dir("cli_ingest");
  const auto corpus = write(dir / "corpus.jsonl", kThreeRecords);
  const auto r = cli({"ingest", "--corpus", corpus.string(), "--ontology",
                      fixture::scenario("ontology_demo.json").string(), "--out", (dir / "o").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(count_lines(r.out), 1u);
  const auto csv = fixture::slurp(dir / "o" / "fd_tags.csv");
  EXPECT_EQ(csv.rfind("id,hashtag,topic,concept_id,exposition,c_coord,e_coord,resource\n", 0), 0u);
  EXPECT_EQ(count_lines(csv), 4u);
  const auto flags = nlohmann::json::parse(fixture::slurp(dir / "o" / "flags.json"));
  EXPECT_TRUE(flags.is_object());

  const auto filtered = cli({"ingest", "--corpus", corpus.string(), "--ontology",
                             fixture::scenario("ontology_demo.json").string(), "--topic", "music",
                             "--out", (dir / "f").string(), "-q"});
  ASSERT_EQ(filtered.code, kExitOk);
  EXPECT_TRUE(filtered.out.empty());
  EXPECT_EQ(count_lines(fixture::slurp(dir / "f" / "fd_tags.csv")), 3u);
}

TEST(Cli, IngestErrors) {
  const auto dir = fixture::temp_dir("cli_ingest_err");
  const auto missing = cli({"ingest", "--corpus", (dir / "none.jsonl").string(), "--out", dir.string()});
  EXPECT_EQ(missing.code, kExitBadInput);
  EXPECT_EQ(count_lines(missing.err), 1u);

  const auto corpus = write(dir / "bad.jsonl", std::string(kThreeRecords) + "garbage\n");
  const auto bad = cli({"ingest", "--corpus", corpus.string(), "--out", dir.string()});
  EXPECT_EQ(bad.code, kExitBadInput);
  EXPECT_NE(bad.err.find("1 of 4"), std::string::npos) << bad.err;

  const auto good = write(dir / "good.jsonl", kThreeRecords);
  fs::create_directories(dir / "blocked" / "fd_tags.csv");
  const auto blocked = cli({"ingest", "--corpus", good.string(), "--out", (dir / "blocked").string()});
  EXPECT_EQ(blocked.code, kExitInternal);
}

TEST(Cli, SimulateShippedScenarios) {
  const auto dir = fixture::temp_dir("cli_simulate");
  const auto goal = cli({"simulate", "--scenario", fixture::scenario("goal5.toml").string(), "--out",
                         (dir / "goal").string()});
  ASSERT_EQ(goal.code, kExitOk) << goal.err;
  EXPECT_NE(goal.out.find("5 at goal"), std::string::npos) << goal.out;
  EXPECT_EQ(count_lines(fixture::slurp(dir / "goal" / "links.csv")), 6u);

  const auto coherent = cli({"simulate", "--scenario",
                             fixture::scenario("flock5_coherent.toml").string(), "--out",
                             (dir / "coh").string()});
  ASSERT_EQ(coherent.code, kExitOk) << coherent.err;
  const auto coh = nlohmann::json::parse(fixture::slurp(dir / "coh" / "flock_report.json"));
  EXPECT_EQ(coh.at("coherent"), true);

  const auto diverge = cli({"simulate", "--scenario",
                            fixture::scenario("flock5_diverge.toml").string(), "--out",
                            (dir / "div").string()});
  ASSERT_EQ(diverge.code, kExitOk) << diverge.err;
  const auto div = nlohmann::json::parse(fixture::slurp(dir / "div" / "flock_report.json"));
  EXPECT_EQ(div.at("diverged_ids").size(), 1u);

  const auto bad = write(dir / "bad.toml", "[scenario]\nbehavior = \"goal_seek\"\nn_agents = 2\n");
  EXPECT_EQ(cli({"simulate", "--scenario", bad.string(), "--out", dir.string()}).code, kExitBadInput);
}

TEST(Cli, NetworkExamples) {
  const auto dir = fixture::temp_dir("cli_network");
  const auto ontology = fixture::scenario("ontology_demo.json").string();
  const auto two = write(dir / "two.jsonl",
      R"({"hashtag": "#a", "topic": "t", "resource": "urn:1", "impressions": 2, "clicks": 1, "concept_id": "jazz"}
{"hashtag": "#b", "topic": "t", "resource": "urn:2", "impressions": 2, "clicks": 1, "concept_id": "jazz"}
)");
  const auto r = cli({"network", "--corpus", two.string(), "--ontology", ontology, "--out",
                      (dir / "two").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto report = nlohmann::json::parse(fixture::slurp(dir / "two" / "network_report.json"));
  EXPECT_EQ(report.at("n_edges"), 1);
  EXPECT_EQ(fixture::slurp(dir / "two" / "edges.csv"), "id_a,id_b\n0,1\n");

  const auto empty = write(dir / "empty.jsonl", "");
  const auto e = cli({"network", "--corpus", empty.string(), "--ontology", ontology, "--out",
                      (dir / "empty").string()});
  ASSERT_EQ(e.code, kExitOk) << e.err;
  EXPECT_EQ(nlohmann::json::parse(fixture::slurp(dir / "empty" / "network_report.json")).at("n_nodes"), 0);

  EXPECT_EQ(cli({"network", "--out", dir.string()}).code, kExitBadInput);
}

TEST(Cli, NetworkFromTagTable) {
  const auto dir = fixture::temp_dir("cli_network_tags");
  const auto corpus = write(dir / "c.jsonl", kThreeRecords);
  const auto ontology = fixture::scenario("ontology_demo.json").string();
  ASSERT_EQ(cli({"ingest", "--corpus", corpus.string(), "--ontology", ontology, "--out",
                 (dir / "i").string()}).code, kExitOk);
  const auto r = cli({"network", "--tags", (dir / "i" / "fd_tags.csv").string(), "--ontology",
                      ontology, "--out", (dir / "n").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto report = nlohmann::json::parse(fixture::slurp(dir / "n" / "network_report.json"));
  EXPECT_EQ(report.at("n_nodes"), 3);
}

TEST(Cli, BenchLatencyHistogramSums) {
  const auto dir = fixture::temp_dir("cli_bench");
  const auto r = cli({"bench", "--task", "latency", "--n", "2000", "--queries", "500", "--out",
                      dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream csv(fixture::slurp(dir / "latency_histogram.csv"));
  std::string row;
  std::getline(csv, row);
  std::size_t total = 0;
  while (std::getline(csv, row)) total += std::stoul(row.substr(row.find(',') + 1));
  EXPECT_EQ(total, 500u);
  EXPECT_EQ(cli({"bench", "--task", "nap", "--out", dir.string()}).code, kExitBadInput);
}

TEST(Cli, ReplayIsByteIdentical) {
  const auto dir = fixture::temp_dir("cli_replay");
  const auto corpus = write(dir / "c.jsonl", kThreeRecords);
  const auto files = {"trajectory.csv", "links.csv"};
  for (const char* scenario : {"goal5.toml", "groups_contact.toml", "aggregate20.toml"}) {
    for (const char* run : {"a", "b"}) {
      ASSERT_EQ(cli({"simulate", "--scenario", fixture::scenario(scenario).string(), "--out",
                     (dir / scenario / run).string(), "-q"}).code, kExitOk);
    }
    for (const char* f : files) {
      EXPECT_EQ(fixture::slurp(dir / scenario / "a" / f), fixture::slurp(dir / scenario / "b" / f));
    }
  }
  for (const char* run : {"a", "b"}) {
    ASSERT_EQ(cli({"network", "--corpus", corpus.string(), "--ontology",
                   fixture::scenario("ontology_demo.json").string(), "--out",
                   (dir / "net" / run).string(), "-q"}).code, kExitOk);
  }
  EXPECT_EQ(fixture::slurp(dir / "net" / "a" / "network_report.json"),
            fixture::slurp(dir / "net" / "b" / "network_report.json"));
}

TEST(Cli, SeedPrecedence) {
  const auto dir = fixture::temp_dir("cli_seed");
  const auto unseeded = write(dir / "u.toml",
                              "[scenario]\nbehavior = \"disperse\"\nn_agents = 4\nmax_ticks = 1\n");
  const auto seeded = write(dir / "s.toml",
                            "[scenario]\nbehavior = \"disperse\"\nn_agents = 4\nmax_ticks = 1\n"
                            "[init]\nmode = \"uniform_random\"\nseed = 5\n");
  const auto traj = [&](const fs::path& scenario, std::vector<std::string> extra, const char* tag) {
    std::vector<std::string> args{"simulate", "--scenario", scenario.string(), "--out",
                                  (dir / tag).string(), "-q"};
    args.insert(args.end(), extra.begin(), extra.end());
    EXPECT_EQ(cli(args).code, kExitOk);
    return fixture::slurp(dir / tag / "trajectory.csv");
  };
  const auto seed = [](const char* s) { return std::vector<std::string>{"--seed", s}; };

  EnvSeed none(nullptr);
  const auto default_run = traj(unseeded, {}, "d");
  EXPECT_EQ(default_run, traj(unseeded, seed("42"), "d42"));
  EXPECT_EQ(traj(seeded, {}, "s"), traj(unseeded, seed("5"), "u5"));
  EXPECT_NE(traj(seeded, seed("6"), "s6"), traj(seeded, {}, "s5"));
  {
    EnvSeed env("6");
    EXPECT_EQ(traj(unseeded, {}, "e6"), traj(unseeded, seed("6"), "x6"));
    EXPECT_EQ(traj(seeded, {}, "es"), traj(unseeded, seed("5"), "x5"));
    EXPECT_EQ(traj(seeded, seed("7"), "e7"), traj(unseeded, seed("7"), "u7"));
  }
  {
    EnvSeed env("abc");
    EXPECT_EQ(cli({"simulate", "--scenario", unseeded.string(), "--out", dir.string()}).code,
              kExitBadInput);
  }
}
