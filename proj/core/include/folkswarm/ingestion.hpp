#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "folkswarm/core_model.hpp"
#include "folkswarm/ontology.hpp"

namespace folkswarm {

/// One hashtag observation of a corpus.
struct TagRecord {
  std::string hashtag;
  std::string topic;
  std::string resource;
  std::uint64_t impressions = 0;
  std::uint64_t clicks = 0;
  ConceptId concept_id;

  bool operator==(const TagRecord&) const = default;
};

/// Throws InputError for an empty hashtag or clicks > impressions.
void validate(const TagRecord& record);

inline constexpr std::size_t kMaxCorpusLineBytes = 64 * 1024;
inline constexpr double kMaxMalformedFraction = 0.01;

struct CorpusLoad {
  std::vector<TagRecord> records;
  /// Non-blank lines seen, malformed ones included.
  std::size_t lines = 0;
  std::size_t malformed = 0;
  /// 1-based line numbers of the first malformed lines (at most 20).
  std::vector<std::size_t> malformed_examples;
};

/// Reads JSON-lines records in file order, keeping those whose topic equals
/// `topic` when one is given. Blank lines are skipped; malformed or overlong
/// lines are counted. Throws InputError when the file cannot be read or more
/// than 1% of its lines are malformed.
CorpusLoad load_corpus(const std::filesystem::path& path,
                       const std::optional<std::string>& topic = std::nullopt);
CorpusLoad parse_corpus(std::istream& in, const std::optional<std::string>& topic = std::nullopt);

struct IngestFlag {
  TagId tag_id = 0;
  std::string concept_id;
  std::string reason;

  bool operator==(const IngestFlag&) const = default;
};

struct IngestResult {
  std::vector<FDTag> tags;
  std::vector<IngestFlag> flags;
};

/// One tag per record, ids from 0 in record order. Exposition is the
/// click-through rate (0 without impressions); the context holds the record
/// topic with the hashtag as its only descriptor. Unknown concepts map to the
/// ontology root and are flagged.
IngestResult to_fd_tags(std::span<const TagRecord> records, const OntologyTree& tree);

/// Root with 12 children, 12 grandchildren each and 10 leaves under every
/// grandchild (depth 3, 1597 nodes).
OntologyTree default_synthetic_ontology();

/// Deterministic synthetic corpus over the leaves of `tree`. Leaf popularity
/// grows by preferential attachment, click-through rates follow a Beta(2, 5)
/// shape and about 30% of records introduce a new resource. Topics are
/// "topic0" .. "topic<k-1>", derived from the top-level branch of the concept.
/// Throws InputError when n or topics is zero.
std::vector<TagRecord> synth_corpus(std::size_t n, std::size_t topics, std::uint64_t seed,
                                    const OntologyTree& tree);
std::vector<TagRecord> synth_corpus(std::size_t n, std::size_t topics, std::uint64_t seed);

/// Inverse of the Beta(2, 5) distribution function, by bisection.
double beta25_quantile(double u);

/// `id,hashtag,topic,concept_id,exposition,c_coord,e_coord,resource`.
void write_fd_tags_csv(std::span<const FDTag> tags, std::ostream& out);
void export_fd_tags(std::span<const FDTag> tags, const std::filesystem::path& path);
/// Reads a table written by write_fd_tags_csv. Throws InputError on malformed
/// rows or concepts missing from `tree`.
std::vector<FDTag> read_fd_tags_csv(std::istream& in, const OntologyTree& tree);
std::vector<FDTag> import_fd_tags(const std::filesystem::path& path, const OntologyTree& tree);

/// Load statistics and flags as JSON.
std::string ingest_report_json(const CorpusLoad& load, const IngestResult& result);

}  // namespace folkswarm
