#include "commands.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "folkswarm/bench_harness.hpp"
#include "folkswarm/error.hpp"
#include "folkswarm/fsn_network.hpp"
#include "folkswarm/ingestion.hpp"
#include "folkswarm/network_io.hpp"
#include "folkswarm/scenario.hpp"
#include "folkswarm/swarm_engine.hpp"
#include "folkswarm/trajectory_io.hpp"

namespace folkswarm::cli {

namespace fs = std::filesystem;

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv(kSeedEnvVar);
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  const std::string_view text(raw);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError(fmt::format("{}='{}' is not a non-negative integer", kSeedEnvVar, text));
  }
  return value;
}

namespace {

struct Options {
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  bool quiet = false;

  std::string scenario;
  std::optional<std::uint64_t> max_ticks;

  std::string corpus;
  std::string tags;
  std::string ontology;
  std::optional<std::string> topic;
  std::size_t k_edge = kDefaultEdgeLevel;
  std::size_t d_min = 2;
  double hub_percentile = 95.0;

  std::string task;
  std::size_t n = 1000;
  std::size_t queries = 500;
  std::size_t topics = 10;
};

fs::path prepare_out(const Options& o) {
  fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw InputError(fmt::format("cannot create output directory '{}'", dir.string()));
  }
  return dir;
}

std::uint64_t resolve_seed(const Options& o, std::optional<std::uint64_t> from_input = {}) {
  if (o.seed) return *o.seed;
  if (from_input) return *from_input;
  if (auto e = env_seed()) return *e;
  return kDefaultSeed;
}

OntologyTree load_ontology_or_default(const std::string& path) {
  return path.empty() ? default_synthetic_ontology() : OntologyTree::load(path);
}

void summary(const Options& o, std::ostream& out, const std::string& line) {
  if (!o.quiet) out << line << '\n';
}

int cmd_ingest(const Options& o, std::ostream& out) {
  const OntologyTree tree = load_ontology_or_default(o.ontology);
  const CorpusLoad load = load_corpus(o.corpus, o.topic);
  const IngestResult result = to_fd_tags(load.records, tree);
  const fs::path dir = prepare_out(o);
  export_fd_tags(result.tags, dir / "fd_tags.csv");
  std::ofstream flags(dir / "flags.json", std::ios::binary | std::ios::trunc);
  flags << ingest_report_json(load, result);
  if (!flags.flush()) throw Error("failed writing flags.json");
  summary(o, out,
          fmt::format("ingest: {} tags, {} malformed lines, {} flags -> {}", result.tags.size(),
                      load.malformed, result.flags.size(), dir.string()));
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  ScenarioConfig cfg = load_scenario(o.scenario);
  const std::uint64_t seed = resolve_seed(o, scenario_seed(cfg));
  override_seed(cfg, seed);
  if (o.max_ticks) cfg.max_ticks = *o.max_ticks;
  cfg.workers = o.workers;
  const OntologyTree tree = load_ontology_or_default(cfg.ontology_path.string());

  const RunResult r = run(cfg, tree);
  const fs::path dir = prepare_out(o);
  export_trajectory(r.state, dir / "trajectory.csv");
  export_link_events(r.state, dir / "links.csv");
  std::string extra;
  if (r.flock) {
    export_flock_report(*r.flock, dir / "flock_report.json");
    extra = fmt::format(", coherent={}, diverged={}", r.flock->coherent,
                        r.flock->diverged_ids.size());
  }
  std::size_t at_goal = 0;
  for (const auto& a : r.state.agents) at_goal += a.phase == Phase::LinkedGoal ? 1 : 0;
  summary(o, out,
          fmt::format("simulate: {} agents, {} ticks, {} links, {} at goal{} -> {}",
                      r.state.agents.size(), r.state.tick, r.state.links.size(), at_goal, extra,
                      dir.string()));
  return kExitOk;
}

int cmd_network(const Options& o, std::ostream& out) {
  if (o.tags.empty() == o.corpus.empty()) {
    throw InputError("network: give exactly one of --tags or --corpus");
  }
  const OntologyTree tree = load_ontology_or_default(o.ontology);
  std::vector<FDTag> tags;
  if (!o.tags.empty()) {
    tags = import_fd_tags(o.tags, tree);
    if (o.topic) std::erase_if(tags, [&](const FDTag& t) { return t.context.topic != *o.topic; });
  } else {
    tags = to_fd_tags(load_corpus(o.corpus, o.topic).records, tree).tags;
  }
  const FsnGraph g = build_fsn(tags, tree, o.k_edge);
  NetworkOptions options;
  options.d_min = o.d_min;
  options.hub_percentile = o.hub_percentile;
  options.workers = o.workers;
  const NetworkReport report = analyze_network(g, options);
  const fs::path dir = prepare_out(o);
  export_network_report(report, dir / "network_report.json");
  export_edge_list(g, dir / "edges.csv");
  summary(o, out,
          fmt::format("network: {} nodes, {} edges, alpha_hat={} -> {}", report.n_nodes,
                      report.n_edges,
                      report.alpha_hat ? fmt::format("{:.3f}", *report.alpha_hat) : "n/a",
                      dir.string()));
  return kExitOk;
}

int cmd_bench(const Options& o, std::ostream& out) {
  const BenchTask task = parse_bench_task(o.task);
  const std::uint64_t seed = resolve_seed(o);
  BenchReport report;
  if (task == BenchTask::TagGeneration) {
    report = bench_tag_generation(o.n, seed, o.topics);
  } else {
    std::vector<FDTag> tags;
    bench_tag_generation(o.n, seed, o.topics, &tags);
    const OntologyTree tree = default_synthetic_ontology();
    if (task == BenchTask::FsnMatching) {
      NetworkOptions options;
      options.d_min = o.d_min;
      options.hub_percentile = o.hub_percentile;
      options.workers = o.workers;
      report = bench_fsn_matching(tags, tree, options, seed);
    } else {
      report = bench_query_latency(tags, tree, o.topic.value_or("topic0"), o.queries, seed,
                                   o.workers);
    }
  }
  const fs::path dir = prepare_out(o);
  export_bench_report(report, dir / "bench_report.json");
  if (task == BenchTask::QueryLatency) export_latency_histogram(report, dir / "latency_histogram.csv");
  summary(o, out,
          fmt::format("bench {}: {} items in {:.1f} ms -> {}", to_string(task), report.n_items,
                      report.wall_time_ms, dir.string()));
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Folksodriven tag swarm simulator and structure-network analyzer", "folkswarm"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output directory (created if absent)");
    sub->add_option("--seed", o.seed, "Seed; overrides the scenario and FOLKSWARM_SEED");
    sub->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("-q,--quiet", o.quiet, "Suppress the summary line");
  };

  auto* ingest = app.add_subcommand("ingest", "Turn a JSON-lines corpus into an FD-tag table");
  common(ingest);
  ingest->add_option("--corpus", o.corpus, "Corpus file (JSON lines)")->required();
  ingest->add_option("--ontology", o.ontology, "Ontology JSON (default: built-in synthetic tree)");
  ingest->add_option("--topic", o.topic, "Keep only records of this topic");

  auto* simulate = app.add_subcommand("simulate", "Run a swarm scenario");
  common(simulate);
  simulate->add_option("--scenario", o.scenario, "Scenario file")->required();
  simulate->add_option("--max-ticks", o.max_ticks, "Override scenario.max_ticks")
      ->check(CLI::PositiveNumber);

  auto* network = app.add_subcommand("network", "Build and analyze the structure network");
  common(network);
  network->add_option("--tags", o.tags, "FD-tag table written by ingest");
  network->add_option("--corpus", o.corpus, "Corpus file (JSON lines)");
  network->add_option("--ontology", o.ontology, "Ontology JSON (default: built-in synthetic tree)");
  network->add_option("--topic", o.topic, "Keep only tags of this topic");
  network->add_option("--k-edge", o.k_edge, "Similarity level that creates an edge");
  network->add_option("--d-min", o.d_min, "Lower degree cutoff of the power-law fit");
  network->add_option("--hub-percentile", o.hub_percentile, "Degree percentile marking hubs");

  auto* bench = app.add_subcommand("bench", "Run a stress benchmark on synthetic tags");
  common(bench);
  bench->add_option("--task", o.task, "tags | fsn | latency")->required();
  bench->add_option("--n", o.n, "Synthetic tags to generate")->check(CLI::PositiveNumber);
  bench->add_option("--queries", o.queries, "Latency queries")->check(CLI::PositiveNumber);
  bench->add_option("--topic", o.topic, "Topic queried by the latency task (default topic0)");
  bench->add_option("--topics", o.topics, "Synthetic topic count")->check(CLI::PositiveNumber);
  bench->add_option("--d-min", o.d_min, "Lower degree cutoff of the power-law fit");
  bench->add_option("--hub-percentile", o.hub_percentile, "Degree percentile marking hubs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitBadInput;
  }

  try {
    if (ingest->parsed()) return cmd_ingest(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out);
    if (network->parsed()) return cmd_network(o, out);
    if (bench->parsed()) return cmd_bench(o, out);
    return kExitBadInput;
  } catch (const InputError& e) {
    err << "folkswarm: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    err << "folkswarm: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"folkswarm"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace folkswarm::cli
