#include "folkswarm/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "folkswarm/csv.hpp"
#include "folkswarm/error.hpp"
#include "folkswarm/random.hpp"

namespace folkswarm {

void validate(const TagRecord& record) {
  if (record.hashtag.empty()) throw InputError("record: empty hashtag");
  if (record.clicks > record.impressions) {
    throw InputError(fmt::format("record '{}': clicks {} exceed impressions {}", record.hashtag,
                                 record.clicks, record.impressions));
  }
}

namespace {

std::optional<TagRecord> parse_record(std::string_view line) {
  const auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object()) return std::nullopt;
  const auto text = [&](const char* key) -> std::optional<std::string> {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
  };
  const auto count = [&](const char* key) -> std::optional<std::uint64_t> {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_number_unsigned()) return std::nullopt;
    return it->get<std::uint64_t>();
  };
  auto hashtag = text("hashtag");
  auto topic = text("topic");
  auto resource = text("resource");
  auto concept_id = text("concept_id");
  const auto impressions = count("impressions");
  const auto clicks = count("clicks");
  if (!hashtag || !topic || !resource || !concept_id || !impressions || !clicks) {
    return std::nullopt;
  }
  TagRecord r{std::move(*hashtag), std::move(*topic), std::move(*resource), *impressions, *clicks,
              std::move(*concept_id)};
  if (r.hashtag.empty() || r.clicks > r.impressions) return std::nullopt;
  return r;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

}  // namespace

CorpusLoad parse_corpus(std::istream& in, const std::optional<std::string>& topic) {
  CorpusLoad load;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    ++load.lines;
    std::optional<TagRecord> record;
    if (line.size() <= kMaxCorpusLineBytes) record = parse_record(line);
    if (!record) {
      ++load.malformed;
      if (load.malformed_examples.size() < 20) load.malformed_examples.push_back(line_no);
      continue;
    }
    if (topic && record->topic != *topic) continue;
    load.records.push_back(std::move(*record));
  }
  if (in.bad()) throw InputError("corpus: read error");
  if (static_cast<double>(load.malformed) > kMaxMalformedFraction * static_cast<double>(load.lines)) {
    throw InputError(fmt::format("corpus: {} of {} lines malformed (limit 1%), first at line {}",
                                 load.malformed, load.lines, load.malformed_examples.front()));
  }
  return load;
}

CorpusLoad load_corpus(const std::filesystem::path& path, const std::optional<std::string>& topic) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot read corpus '{}'", path.string()));
  try {
    return parse_corpus(in, topic);
  } catch (const InputError& e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

IngestResult to_fd_tags(std::span<const TagRecord> records, const OntologyTree& tree) {
  IngestResult result;
  result.tags.reserve(records.size());
  const ConceptId& root_id = tree.node(tree.root()).id;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TagRecord& r = records[i];
    const auto id = static_cast<TagId>(i);
    const auto concept_index = tree.find(r.concept_id);
    if (!concept_index) {
      result.flags.push_back({id, r.concept_id, "unresolved concept mapped to root"});
    }
    const OntologyTree::Index node = concept_index.value_or(tree.root());
    const double exposition =
        r.impressions == 0 ? 0.0
                           : static_cast<double>(r.clicks) / static_cast<double>(r.impressions);
    auto context =
        make_formal_context(r.topic, {r.hashtag}, concept_index ? r.concept_id : root_id, tree);
    result.tags.push_back(make_fd_tag(id, std::move(context), exposition, r.resource,
                                      kDefaultElasticity, context_coordinate(node, tree)));
  }
  return result;
}

OntologyTree default_synthetic_ontology() {
  OntologyTree::Builder b("thing", "thing");
  for (int i = 0; i < 12; ++i) {
    const auto a = fmt::format("c{}", i);
    b.add_child("thing", a);
    for (int j = 0; j < 12; ++j) {
      const auto bj = fmt::format("{}_{}", a, j);
      b.add_child(a, bj);
      for (int k = 0; k < 10; ++k) b.add_child(bj, fmt::format("{}_{}", bj, k));
    }
  }
  return std::move(b).build();
}

double beta25_quantile(double u) {
  u = std::clamp(u, 0.0, 1.0);
  const auto cdf = [](double x) {
    const double q = 1.0 - x;
    const double q5 = q * q * q * q * q;
    return 1.0 - q5 * q - 6.0 * x * q5;
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

constexpr double kUniformLeafProbability = 0.5;
constexpr double kNewResourceProbability = 0.3;
constexpr std::uint64_t kMinImpressions = 100;
constexpr std::uint64_t kMaxImpressions = 10000;
constexpr std::uint64_t kHashtagVariants = 5;

}  // namespace

std::vector<TagRecord> synth_corpus(std::size_t n, std::size_t topics, std::uint64_t seed,
                                    const OntologyTree& tree) {
  if (n == 0) throw InputError("synth_corpus: n must be at least 1");
  if (topics == 0) throw InputError("synth_corpus: topics must be at least 1");
  const auto leaves = tree.leaves();
  const auto& root_children = tree.node(tree.root()).children;

  // Top-level branch of every leaf, as its position among the root's children.
  std::vector<std::size_t> branch(leaves.size(), 0);
  for (std::size_t l = 0; l < leaves.size(); ++l) {
    if (auto top = tree.ancestor_at_depth(leaves[l], 1)) {
      branch[l] = static_cast<std::size_t>(
          std::find(root_children.begin(), root_children.end(), *top) - root_children.begin());
    }
  }

  Rng rng(seed);
  std::vector<TagRecord> out;
  out.reserve(n);
  std::vector<std::uint32_t> chosen_leaf;
  chosen_leaf.reserve(n);
  std::size_t resources = 0;
  for (std::size_t i = 0; i < n; ++i) {
    // Copying an earlier record's concept makes popular concepts more popular.
    std::uint32_t leaf;
    if (i == 0 || rng.uniform01() < kUniformLeafProbability) {
      leaf = static_cast<std::uint32_t>(rng.uniform_index(leaves.size()));
    } else {
      leaf = chosen_leaf[rng.uniform_index(i)];
    }
    chosen_leaf.push_back(leaf);

    std::size_t resource;
    if (resources == 0 || rng.uniform01() < kNewResourceProbability) {
      resource = resources++;
    } else {
      resource = rng.uniform_index(resources);
    }

    const double ctr = beta25_quantile(rng.uniform01());
    const std::uint64_t impressions =
        kMinImpressions + rng.uniform_index(kMaxImpressions - kMinImpressions + 1);
    const auto clicks = std::min<std::uint64_t>(
        impressions, static_cast<std::uint64_t>(std::llround(ctr * static_cast<double>(impressions))));
    const std::uint64_t variant = rng.uniform_index(kHashtagVariants);

    const ConceptId& concept_id = tree.node(leaves[leaf]).id;
    out.push_back(TagRecord{fmt::format("#{}v{}", concept_id, variant),
                            fmt::format("topic{}", branch[leaf] % topics),
                            fmt::format("https://synthetic.example/r/{}", resource), impressions,
                            clicks, concept_id});
  }
  return out;
}

std::vector<TagRecord> synth_corpus(std::size_t n, std::size_t topics, std::uint64_t seed) {
  return synth_corpus(n, topics, seed, default_synthetic_ontology());
}

void write_fd_tags_csv(std::span<const FDTag> tags, std::ostream& out) {
  out << "id,hashtag,topic,concept_id,exposition,c_coord,e_coord,resource\n";
  for (const FDTag& t : tags) {
    const std::string hashtag = t.context.descriptors.empty() ? "" : t.context.descriptors.front();
    csv::write_row(out, {std::to_string(t.id), hashtag, t.context.topic, t.context.concept_id,
                         csv::format_real(t.exposition), csv::format_real(t.position.x),
                         csv::format_real(t.position.y), t.resource});
  }
}

void export_fd_tags(std::span<const FDTag> tags, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot open '{}' for writing", path.string()));
  write_fd_tags_csv(tags, out);
  if (!out.flush()) throw Error(fmt::format("failed writing '{}'", path.string()));
}

namespace {

template <typename T>
T parse_number(const std::string& field, std::size_t line_no, const char* column) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw InputError(fmt::format("line {}: bad {} '{}'", line_no, column, field));
  }
  return value;
}

}  // namespace

std::vector<FDTag> read_fd_tags_csv(std::istream& in, const OntologyTree& tree) {
  std::string line;
  if (!std::getline(in, line)) return {};
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "id,hashtag,topic,concept_id,exposition,c_coord,e_coord,resource") {
    throw InputError("tag table: unexpected header");
  }
  std::vector<FDTag> tags;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = csv::split_row(line);
    if (f.size() != 8) {
      throw InputError(fmt::format("line {}: expected 8 fields, got {}", line_no, f.size()));
    }
    try {
      const auto id = parse_number<TagId>(f[0], line_no, "id");
      const auto exposition = parse_number<double>(f[4], line_no, "exposition");
      const auto c = parse_number<double>(f[5], line_no, "c_coord");
      const auto e = parse_number<double>(f[6], line_no, "e_coord");
      auto context = make_formal_context(f[2], {f[1]}, f[3], tree);
      FDTag tag = make_fd_tag(id, std::move(context), exposition, f[7], kDefaultElasticity, c);
      if (!(e >= 0.0 && e <= 1.0)) {
        throw InputError(fmt::format("e_coord {} outside [0, 1]", e));
      }
      tag.position.y = e;
      tags.push_back(std::move(tag));
    } catch (const InputError& err) {
      throw InputError(fmt::format("tag table line {}: {}", line_no, err.what()));
    }
  }
  return tags;
}

std::vector<FDTag> import_fd_tags(const std::filesystem::path& path, const OntologyTree& tree) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot read tag table '{}'", path.string()));
  return read_fd_tags_csv(in, tree);
}

std::string ingest_report_json(const CorpusLoad& load, const IngestResult& result) {
  nlohmann::ordered_json j;
  j["lines"] = load.lines;
  j["malformed"] = load.malformed;
  j["malformed_lines"] = load.malformed_examples;
  j["records"] = load.records.size();
  j["tags"] = result.tags.size();
  auto& flags = j["flags"] = nlohmann::ordered_json::array();
  for (const IngestFlag& f : result.flags) {
    flags.push_back({{"tag_id", f.tag_id}, {"concept_id", f.concept_id}, {"reason", f.reason}});
  }
  return j.dump(2) + "\n";
}

}  // namespace folkswarm
