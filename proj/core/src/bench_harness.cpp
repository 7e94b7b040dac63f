#include "folkswarm/bench_harness.hpp"

#include <sys/utsname.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "folkswarm/error.hpp"
#include "folkswarm/ingestion.hpp"
#include "folkswarm/random.hpp"

namespace folkswarm {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace

std::string_view to_string(BenchTask task) {
  switch (task) {
    case BenchTask::TagGeneration: return "tag_generation";
    case BenchTask::FsnMatching: return "fsn_matching";
    case BenchTask::QueryLatency: return "query_latency";
  }
  return "?";
}

BenchTask parse_bench_task(std::string_view name) {
  if (name == "tags" || name == "tag_generation") return BenchTask::TagGeneration;
  if (name == "fsn" || name == "fsn_matching") return BenchTask::FsnMatching;
  if (name == "latency" || name == "query_latency") return BenchTask::QueryLatency;
  throw InputError(fmt::format("unknown bench task '{}' (tags, fsn, latency)", name));
}

std::size_t latency_bucket(double ms) {
  if (!(ms <= static_cast<double>(kLatencyBuckets) * kLatencyBucketWidthMs)) return kLatencyBuckets;
  const double b = std::ceil(ms / kLatencyBucketWidthMs) - 1.0;
  return b <= 0.0 ? 0 : static_cast<std::size_t>(b);
}

double median(std::span<const double> samples) {
  if (samples.empty()) throw Error("median of an empty sample");
  std::vector<double> s(samples.begin(), samples.end());
  const std::size_t mid = s.size() / 2;
  std::nth_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(mid), s.end());
  const double upper = s[mid];
  if (s.size() % 2 == 1) return upper;
  const double lower = *std::max_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::string machine_descriptor() {
  std::string os = "unknown";
  utsname u{};
  if (uname(&u) == 0) os = fmt::format("{} {} {}", u.sysname, u.release, u.machine);
#if defined(__clang__)
  const std::string compiler = fmt::format("clang {}.{}", __clang_major__, __clang_minor__);
#elif defined(__GNUC__)
  const std::string compiler = fmt::format("gcc {}.{}", __GNUC__, __GNUC_MINOR__);
#else
  const std::string compiler = "unknown compiler";
#endif
  return fmt::format("{}, {} hardware threads, {}", os, std::thread::hardware_concurrency(),
                     compiler);
}

BenchReport bench_tag_generation(std::size_t n, std::uint64_t seed, std::size_t topics,
                                 std::vector<FDTag>* tags_out) {
  const OntologyTree tree = default_synthetic_ontology();
  BenchReport report;
  report.task = BenchTask::TagGeneration;
  report.seed = seed;
  report.env = machine_descriptor();
  const auto start = Clock::now();
  const auto records = synth_corpus(n, topics, seed, tree);
  auto result = to_fd_tags(records, tree);
  report.wall_time_ms = elapsed_ms(start);
  report.n_items = result.tags.size();
  if (tags_out != nullptr) *tags_out = std::move(result.tags);
  return report;
}

BenchReport bench_fsn_matching(std::span<const FDTag> tags, const OntologyTree& tree,
                               const NetworkOptions& options, std::uint64_t seed) {
  if (tags.empty()) throw InputError("fsn benchmark: no tags");
  BenchReport report;
  report.task = BenchTask::FsnMatching;
  report.seed = seed;
  report.workers = std::max(1u, options.workers);
  report.env = machine_descriptor();
  const auto start = Clock::now();
  const FsnGraph g = build_fsn(tags, tree);
  const NetworkReport network = analyze_network(g, options);
  report.wall_time_ms = elapsed_ms(start);
  report.n_items = tags.size();
  report.n_edges = network.n_edges;
  return report;
}

BenchReport bench_query_latency(std::span<const FDTag> tags, const OntologyTree& tree,
                                const std::string& topic, std::size_t n_queries,
                                std::uint64_t seed, unsigned workers) {
  if (n_queries == 0) throw InputError("latency benchmark: n_queries must be at least 1");
  std::vector<std::size_t> pool;
  TagId max_id = 0;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    max_id = std::max(max_id, tags[i].id);
    if (tags[i].context.topic == topic) pool.push_back(i);
  }
  if (pool.empty()) throw InputError(fmt::format("latency benchmark: no tag has topic '{}'", topic));

  const AcquaintanceIndex index(tags, tree, kDefaultEdgeLevel);
  Rng rng(seed);
  std::vector<FDTag> probes;
  probes.reserve(n_queries);
  for (std::size_t q = 0; q < n_queries; ++q) {
    FDTag probe = tags[pool[rng.uniform_index(pool.size())]];
    probe.id = max_id + 1;
    probes.push_back(std::move(probe));
  }

  BenchReport report;
  report.task = BenchTask::QueryLatency;
  report.seed = seed;
  report.env = machine_descriptor();
  report.n_items = n_queries;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_queries)));
  report.workers = workers;
  report.latencies_ms.assign(n_queries, 0.0);

  std::vector<std::exception_ptr> errors(workers);
  const auto work = [&](unsigned w) {
    try {
      for (std::size_t q = w; q < n_queries; q += workers) {
        const auto t0 = Clock::now();
        const auto hits = index.match(probes[q]);
        report.latencies_ms[q] = elapsed_ms(t0);
        if (hits.size() > tags.size()) throw Error("latency benchmark: impossible match count");
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  const auto start = Clock::now();
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool_threads;
    for (unsigned w = 0; w < workers; ++w) pool_threads.emplace_back(work, w);
    for (auto& t : pool_threads) t.join();
  }
  report.wall_time_ms = elapsed_ms(start);
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  report.latency_histogram.assign(kLatencyBuckets + 1, 0);
  for (double ms : report.latencies_ms) ++report.latency_histogram[latency_bucket(ms)];
  report.median_latency_ms = median(report.latencies_ms);
  return report;
}

std::string bench_report_json(const BenchReport& report) {
  nlohmann::ordered_json j;
  j["task"] = to_string(report.task);
  j["n_items"] = report.n_items;
  j["wall_time_ms"] = report.wall_time_ms;
  j["seed"] = report.seed;
  j["workers"] = report.workers;
  j["env"] = report.env;
  if (report.n_edges) j["n_edges"] = *report.n_edges;
  if (report.task == BenchTask::QueryLatency) {
    j["median_latency_ms"] = report.median_latency_ms.value_or(0.0);
    auto& hist = j["latency_histogram"] = nlohmann::ordered_json::array();
    for (std::size_t b = 0; b < report.latency_histogram.size(); ++b) {
      nlohmann::ordered_json row;
      if (b < kLatencyBuckets) {
        row["bucket_ms_upper"] = static_cast<double>(b + 1) * kLatencyBucketWidthMs;
      } else {
        row["bucket_ms_upper"] = "inf";
      }
      row["count"] = report.latency_histogram[b];
      hist.push_back(std::move(row));
    }
    j["latencies_ms"] = report.latencies_ms;
  }
  return j.dump(2) + "\n";
}

void export_bench_report(const BenchReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot open '{}' for writing", path.string()));
  out << bench_report_json(report);
  if (!out.flush()) throw Error(fmt::format("failed writing '{}'", path.string()));
}

void write_latency_histogram_csv(const BenchReport& report, std::ostream& out) {
  out << "bucket_ms_upper,count\n";
  for (std::size_t b = 0; b < report.latency_histogram.size(); ++b) {
    if (b < kLatencyBuckets) {
      out << fmt::format("{:g}", static_cast<double>(b + 1) * kLatencyBucketWidthMs);
    } else {
      out << "inf";
    }
    out << ',' << report.latency_histogram[b] << '\n';
  }
}

void export_latency_histogram(const BenchReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot open '{}' for writing", path.string()));
  write_latency_histogram_csv(report, out);
  if (!out.flush()) throw Error(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace folkswarm
