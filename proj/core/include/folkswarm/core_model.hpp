#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "folkswarm/geometry.hpp"
#include "folkswarm/ontology.hpp"

namespace folkswarm {

using TagId = std::uint32_t;

/// Formal context C = (T, D, I): a topic, its ordered descriptor set and the
/// incidence pairs between them, resolved to one ontology concept.
struct FormalContext {
  std::string topic;
  std::vector<std::string> descriptors;
  std::vector<std::pair<std::string, std::string>> incidence;
  ConceptId concept_id;

  bool operator==(const FormalContext&) const = default;
};

/// Builds a context whose incidence relates the topic to every descriptor.
/// Throws InputError when descriptors are empty or repeated, or the concept
/// is not in `tree`.
FormalContext make_formal_context(std::string topic, std::vector<std::string> descriptors,
                                  ConceptId concept_id, const OntologyTree& tree);

/// Checks every FormalContext invariant against `tree`.
void validate(const FormalContext& context, const OntologyTree& tree);

inline constexpr double kDefaultElasticity = 1.0;

/// The Folksodriven tag: an agent of the simulation and a node of the
/// structure network.
struct FDTag {
  TagId id = 0;
  FormalContext context;
  /// Click-through rate at creation, in [0, 1].
  double exposition = 0.0;
  std::string resource;
  double elasticity = kDefaultElasticity;
  /// Plane position (context coordinate, exposition coordinate).
  Vec2 position;
  std::optional<TagId> linked_to;

  bool operator==(const FDTag&) const = default;
};

/// Creates a tag at (c_coord, exposition); the exposition coordinate starts
/// equal to the exposition. Throws InputError on out-of-range values.
FDTag make_fd_tag(TagId id, FormalContext context, double exposition, std::string resource,
                  double elasticity, double c_coord);

enum class TimeDirection { PastDirected, FutureDirected };

/// A point of the (context, exposition, resource) event space tagged with a
/// signed time component. A zero time component has no direction and is
/// rejected.
class FDEvent {
 public:
  FDEvent(std::string context_id, double exposition, std::string resource, double time_component);

  const std::string& context_id() const { return context_id_; }
  double exposition() const { return exposition_; }
  const std::string& resource() const { return resource_; }
  double time_component() const { return time_component_; }

 private:
  std::string context_id_;
  double exposition_;
  std::string resource_;
  double time_component_;
};

TimeDirection classify_time_direction(const FDEvent& event);

/// One (context, exposition, resource) element of the relation X.
struct XTriple {
  std::string context;
  double exposition = 0.0;
  std::string resource;

  bool operator==(const XTriple&) const = default;
  /// Ordered by (context, resource, exposition) so a web slice is one
  /// contiguous range.
  friend bool operator<(const XTriple& a, const XTriple& b) {
    return std::tie(a.context, a.resource, a.exposition) <
           std::tie(b.context, b.resource, b.exposition);
  }
};

/// The ternary relation X as a set of triples.
class RelationX {
 public:
  RelationX() = default;
  /// Returns false when the triple was already present. Throws InputError
  /// for a non-finite exposition.
  bool insert(XTriple triple);

  const std::set<XTriple>& triples() const { return triples_; }
  std::size_t size() const { return triples_.size(); }

 private:
  std::set<XTriple> triples_;
};

/// Every triple of `x` with the given context and resource, any exposition.
std::set<XTriple> web_slice(const RelationX& x, const std::string& context,
                            const std::string& resource);

/// Depth of the lowest common ancestor of two concepts (root = 0).
std::size_t lca_depth(const ConceptId& a, const ConceptId& b, const OntologyTree& tree);

/// True when the tags' concepts share an ancestor at depth >= k.
/// Requires 1 <= k <= tree.depth().
bool is_simile_at_level(const FDTag& a, const FDTag& b, std::size_t k, const OntologyTree& tree);

/// True when the tag's concept sits at depth >= k.
bool is_in_ontology(const FDTag& tag, std::size_t k, const OntologyTree& tree);

/// Pre-order position of the concept divided by (node count - 1); 0 for a
/// single-node tree.
double context_coordinate(const FormalContext& context, const OntologyTree& tree);
double context_coordinate(OntologyTree::Index concept_index, const OntologyTree& tree);

}  // namespace folkswarm
