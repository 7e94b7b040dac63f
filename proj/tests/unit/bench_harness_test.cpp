#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <numeric>
#include <sstream>

#include "folkswarm/bench_harness.hpp"
#include "folkswarm/error.hpp"
#include "folkswarm/ingestion.hpp"
#include "oracles.hpp"

using namespace folkswarm;

TEST(Task, NamesRoundTrip) {
  for (auto t : {BenchTask::TagGeneration, BenchTask::FsnMatching, BenchTask::QueryLatency}) {
    EXPECT_EQ(parse_bench_task(to_string(t)), t);
  }
  EXPECT_EQ(parse_bench_task("tags"), BenchTask::TagGeneration);
  EXPECT_EQ(parse_bench_task("fsn"), BenchTask::FsnMatching);
  EXPECT_EQ(parse_bench_task("latency"), BenchTask::QueryLatency);
  EXPECT_THROW(parse_bench_task("sprint"), InputError);
}

TEST(Latency, Buckets) {
  EXPECT_EQ(latency_bucket(0.0), 0u);
  EXPECT_EQ(latency_bucket(1.0), 0u);
  EXPECT_EQ(latency_bucket(1.0000001), 1u);
  EXPECT_EQ(latency_bucket(2.0), 1u);
  EXPECT_EQ(latency_bucket(99.5), 99u);
  EXPECT_EQ(latency_bucket(100.0), 99u);
  EXPECT_EQ(latency_bucket(100.5), kLatencyBuckets);
}

TEST(Median, MatchesOracle) {
  EXPECT_THROW(median(std::vector<double>{}), Error);
  EXPECT_DOUBLE_EQ(median(std::vector<double>{3.0}), 3.0);
  EXPECT_DOUBLE_EQ(median(std::vector<double>{4.0, 1.0, 3.0, 2.0}), 2.5);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int n = 1; n < 40; ++n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = u(gen);
    EXPECT_DOUBLE_EQ(median(v), oracle::median(v));
  }
}

TEST(TagGeneration, CountsAndDeterminism) {
  std::vector<FDTag> a;
  std::vector<FDTag> b;
  const auto r = bench_tag_generation(1, 42, 10, &a);
  EXPECT_EQ(r.n_items, 1u);
  EXPECT_EQ(a.size(), 1u);
  EXPECT_GE(r.wall_time_ms, 0.0);
  bench_tag_generation(1, 42, 10, &b);
  EXPECT_EQ(a, b);
  EXPECT_THROW(bench_tag_generation(0, 42), InputError);
  const auto big = bench_tag_generation(3000, 1);
  EXPECT_EQ(big.n_items, 3000u);
  EXPECT_FALSE(big.env.empty());
}

TEST(FsnMatching, ReportsEdgeCount) {
  const auto tree = default_synthetic_ontology();
  std::vector<FDTag> tags;
  bench_tag_generation(800, 3, 10, &tags);
  const auto r = bench_fsn_matching(tags, tree);
  ASSERT_TRUE(r.n_edges);
  EXPECT_EQ(*r.n_edges, build_fsn(tags, tree).edge_count());
  EXPECT_EQ(r.n_items, 800u);
  EXPECT_THROW(bench_fsn_matching({}, tree), InputError);
}

TEST(QueryLatency, HistogramSumsToQueries) {
  const auto tree = default_synthetic_ontology();
  std::vector<FDTag> tags;
  bench_tag_generation(2000, 3, 10, &tags);
  for (unsigned workers : {1u, 3u}) {
    const auto r = bench_query_latency(tags, tree, "topic0", 200, 5, workers);
    ASSERT_EQ(r.latency_histogram.size(), kLatencyBuckets + 1);
    EXPECT_EQ(std::accumulate(r.latency_histogram.begin(), r.latency_histogram.end(), std::size_t{0}),
              200u);
    ASSERT_EQ(r.latencies_ms.size(), 200u);
    ASSERT_TRUE(r.median_latency_ms);
    EXPECT_DOUBLE_EQ(*r.median_latency_ms, oracle::median(r.latencies_ms));
    std::vector<std::size_t> rebuilt(kLatencyBuckets + 1, 0);
    for (double ms : r.latencies_ms) ++rebuilt[latency_bucket(ms)];
    EXPECT_EQ(rebuilt, r.latency_histogram);
  }
  EXPECT_THROW(bench_query_latency(tags, tree, "no-such-topic"), InputError);
  EXPECT_THROW(bench_query_latency(tags, tree, "topic0", 0), InputError);
}

TEST(Report, JsonAndCsvShape) {
  const auto tree = default_synthetic_ontology();
  std::vector<FDTag> tags;
  bench_tag_generation(500, 3, 4, &tags);
  const auto r = bench_query_latency(tags, tree, "topic1", 50, 2);
  const auto j = nlohmann::json::parse(bench_report_json(r));
  EXPECT_EQ(j.at("n_items"), 50);
  EXPECT_TRUE(j.contains("wall_time_ms"));
  EXPECT_TRUE(j.contains("env"));
  std::ostringstream csv;
  write_latency_histogram_csv(r, csv);
  std::istringstream in(csv.str());
  std::string row;
  std::getline(in, row);
  EXPECT_EQ(row, "bucket_ms_upper,count");
  std::size_t rows = 0;
  std::string last;
  while (std::getline(in, row)) {
    ++rows;
    last = row;
  }
  EXPECT_EQ(rows, kLatencyBuckets + 1);
  EXPECT_EQ(last.rfind("inf,", 0), 0u);
}
