#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "folkswarm/core_model.hpp"
#include "folkswarm/fsn_network.hpp"
#include "folkswarm/ontology.hpp"

namespace folkswarm {

enum class BenchTask { TagGeneration, FsnMatching, QueryLatency };

std::string_view to_string(BenchTask task);
/// Accepts "tags", "fsn" and "latency" as well as the to_string names.
BenchTask parse_bench_task(std::string_view name);

inline constexpr std::size_t kLatencyBuckets = 100;
inline constexpr double kLatencyBucketWidthMs = 1.0;

/// Bucket of a latency: [0, 1] ms goes to 0, (b, b + 1] ms to b, anything
/// above 100 ms to the overflow bucket kLatencyBuckets.
std::size_t latency_bucket(double ms);

/// Median of the samples (mean of the middle pair for even counts). Throws
/// Error when empty.
double median(std::span<const double> samples);

struct BenchReport {
  BenchTask task = BenchTask::TagGeneration;
  std::size_t n_items = 0;
  double wall_time_ms = 0.0;
  std::string env;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  /// FsnMatching only.
  std::optional<std::size_t> n_edges;
  /// QueryLatency only: kLatencyBuckets 1 ms buckets plus overflow, the raw
  /// per-query samples and their median.
  std::vector<std::size_t> latency_histogram;
  std::vector<double> latencies_ms;
  std::optional<double> median_latency_ms;
};

/// "<os> <release> <machine>, <n> hardware threads, <compiler>".
std::string machine_descriptor();

/// Times synth_corpus(n) followed by to_fd_tags. The produced tags are moved
/// into `tags_out` when given. Throws InputError for n == 0.
BenchReport bench_tag_generation(std::size_t n, std::uint64_t seed, std::size_t topics = 10,
                                 std::vector<FDTag>* tags_out = nullptr);

/// Times build_fsn plus analyze_network. Throws InputError for no tags.
BenchReport bench_fsn_matching(std::span<const FDTag> tags, const OntologyTree& tree,
                               const NetworkOptions& options = {}, std::uint64_t seed = 0);

/// Issues n_queries single-tag acquaintance queries for tags of `topic`
/// against an index of `tags`. Probes copy a seeded draw of topic tags under
/// a fresh id. Throws InputError when no tag has the topic or n_queries is 0.
BenchReport bench_query_latency(std::span<const FDTag> tags, const OntologyTree& tree,
                                const std::string& topic, std::size_t n_queries = 500,
                                std::uint64_t seed = 0, unsigned workers = 1);

std::string bench_report_json(const BenchReport& report);
void export_bench_report(const BenchReport& report, const std::filesystem::path& path);

/// `bucket_ms_upper,count`; the overflow row reads "inf".
void write_latency_histogram_csv(const BenchReport& report, std::ostream& out);
void export_latency_histogram(const BenchReport& report, const std::filesystem::path& path);

}  // namespace folkswarm
