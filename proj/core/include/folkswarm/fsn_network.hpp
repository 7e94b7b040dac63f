#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "folkswarm/core_model.hpp"
#include "folkswarm/error.hpp"
#include "folkswarm/ontology.hpp"

namespace folkswarm {

/// Folksodriven Structure Network: tags as nodes, semantic acquaintance as
/// undirected edges. Simple graph, immutable once built.
///
/// Besides adjacency the graph keeps a list of acquaintance groups: cliques
/// that together cover every edge. build_fsn produces one group per shared
/// concept ancestor or shared resource; a bare edge is a group of two.
class FsnGraph {
 public:
  using Index = std::uint32_t;

  class Builder {
   public:
    /// Node ids must be unique.
    explicit Builder(std::vector<TagId> nodes);

    /// Throws InputError for a self-loop or an unknown id. Parallel edges
    /// collapse into one.
    Builder& add_edge(TagId a, TagId b);
    Builder& add_edge_by_index(Index a, Index b);
    /// Connects every pair of members (node indices). Groups of fewer than two
    /// are ignored.
    Builder& add_group(std::vector<Index> members);

    FsnGraph build() &&;

    std::optional<Index> find(TagId id) const;

   private:
    std::vector<TagId> nodes_;
    std::unordered_map<TagId, Index> index_;
    std::vector<std::vector<Index>> adjacency_;
    std::vector<std::vector<Index>> groups_;
  };

  FsnGraph() = default;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::span<const TagId> nodes() const { return nodes_; }
  TagId id_at(Index i) const { return nodes_.at(i); }

  std::optional<Index> find(TagId id) const;
  /// Throws InputError naming the id.
  Index index_of(TagId id) const;

  /// Sorted neighbor indices.
  std::span<const Index> neighbors(Index i) const { return adjacency_.at(i); }
  std::size_t degree(Index i) const { return adjacency_.at(i).size(); }
  std::size_t degree_of(TagId id) const { return degree(index_of(id)); }
  bool has_edge(TagId a, TagId b) const;

  /// Every edge as (smaller id, larger id), sorted.
  std::vector<std::pair<TagId, TagId>> edges() const;

  const std::vector<std::vector<Index>>& groups() const { return groups_; }
  /// Groups containing node i.
  std::span<const std::uint32_t> groups_of(Index i) const { return node_groups_.at(i); }

 private:
  std::vector<TagId> nodes_;
  std::unordered_map<TagId, Index> index_;
  std::vector<std::vector<Index>> adjacency_;
  std::vector<std::vector<Index>> groups_;
  std::vector<std::vector<std::uint32_t>> node_groups_;
  std::size_t edge_count_ = 0;
};

/// Buckets tags by their concept's ancestor at depth k_edge and by resource,
/// which is exactly the acquaintance relation build_fsn uses.
class AcquaintanceIndex {
 public:
  /// Throws InputError for unresolvable concepts, duplicate ids or a level
  /// outside [1, depth].
  AcquaintanceIndex(std::span<const FDTag> tags, const OntologyTree& tree, std::size_t k_edge);

  /// Ids of indexed tags acquainted with `probe`, ascending, excluding the
  /// probe's own id.
  std::vector<TagId> match(const FDTag& probe) const;

  std::size_t k_edge() const { return k_edge_; }
  const std::unordered_map<OntologyTree::Index, std::vector<TagId>>& concept_buckets() const {
    return by_concept_;
  }
  const std::unordered_map<std::string, std::vector<TagId>>& resource_buckets() const {
    return by_resource_;
  }

 private:
  const OntologyTree* tree_;
  std::size_t k_edge_;
  std::unordered_map<OntologyTree::Index, std::vector<TagId>> by_concept_;
  std::unordered_map<std::string, std::vector<TagId>> by_resource_;
};

inline constexpr std::size_t kDefaultEdgeLevel = 2;

/// Edge (a, b) iff the tags are similar at level k_edge or share a resource.
FsnGraph build_fsn(std::span<const FDTag> tags, const OntologyTree& tree,
                   std::size_t k_edge = kDefaultEdgeLevel);

/// 2 * triangles / (deg * (deg - 1)), 0 below degree 2. Throws InputError
/// for an unknown node.
double clustering_coefficient(const FsnGraph& g, TagId node);
/// Local clustering coefficient of every node, by index.
std::vector<double> local_clustering(const FsnGraph& g);

/// Raised when a power-law fit has too few or degenerate samples.
class PowerLawFitError : public Error {
 public:
  using Error::Error;
};

/// Discrete maximum-likelihood exponent (continuous approximation):
/// 1 + n / sum(ln(d / (d_min - 0.5))) over samples >= d_min. Needs at least
/// ten such samples.
double fit_power_law(std::span<const std::size_t> degrees, std::size_t d_min);

/// Mean clustering coefficient per occurring degree.
std::map<std::size_t, double> cc_vs_degree(const FsnGraph& g);

/// Nodes whose degree reaches the nearest-rank p-th percentile, by
/// descending degree then ascending id. Requires 0 < p < 100.
std::vector<TagId> find_hubs(const FsnGraph& g, double percentile);

/// Mean shortest-path length over all pairs of the largest connected
/// component (ties go to the component holding the lowest index). Throws
/// Error when that component has fewer than two nodes.
double avg_path_length(const FsnGraph& g, unsigned workers = 1);

/// Component label per node index, labels numbered in order of first node.
std::vector<std::uint32_t> connected_components(const FsnGraph& g);

/// Spearman rank correlation with average ranks for ties; empty when either
/// side is constant or there are fewer than two points.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

/// Barabasi-Albert growth: a complete seed graph on m + 1 nodes, then every
/// new node attaches to m distinct nodes with probability proportional to
/// degree. Node ids are 0..n-1.
FsnGraph preferential_attachment_graph(std::size_t n, std::size_t m, std::uint64_t seed);

struct NetworkOptions {
  std::size_t d_min = 2;
  double hub_percentile = 95.0;
  unsigned workers = 1;
};

struct NetworkReport {
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  std::map<std::size_t, std::size_t> degree_histogram;
  std::optional<double> alpha_hat;
  std::size_t d_min = 2;
  /// Why alpha_hat is missing, when it is.
  std::string fit_error;
  std::map<std::size_t, double> cc_by_degree;
  /// Spearman correlation between degree and mean clustering coefficient.
  std::optional<double> cc_degree_trend;
  std::vector<TagId> hubs;
  std::optional<double> avg_path_length;
  std::size_t n_components = 0;
  std::size_t largest_component = 0;
};

NetworkReport analyze_network(const FsnGraph& g, const NetworkOptions& options = {});

}  // namespace folkswarm
