#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace folkswarm {

using ConceptId = std::string;

/// Rooted concept tree. Tags resolve to a node; the depth of the lowest common
/// ancestor of two nodes grounds the "similar at level k" predicate.
///
/// Nodes are addressed by a dense index assigned in insertion order; the root
/// is always index 0. The tree is immutable once built.
class OntologyTree {
 public:
  using Index = std::size_t;

  struct Node {
    ConceptId id;
    std::string label;
    std::optional<Index> parent;
    std::size_t depth = 0;
    std::vector<Index> children;
  };

  /// Builds a tree incrementally; children keep insertion order, which
  /// defines the pre-order traversal.
  class Builder {
   public:
    Builder(ConceptId root_id, std::string root_label = {});

    /// Adds `id` under `parent_id`. Throws InputError for an unknown parent
    /// or a duplicate id.
    Builder& add_child(std::string_view parent_id, ConceptId id, std::string label = {});

    OntologyTree build() &&;

   private:
    std::vector<Node> nodes_;
    std::unordered_map<ConceptId, Index> index_;
  };

  /// Parses `{ "id": ..., "label": ..., "children": [...] }`. Rejects duplicate
  /// ids (which is also how a cyclic reference would show up) and malformed nodes.
  static OntologyTree from_json(std::string_view text);
  static OntologyTree load(const std::filesystem::path& path);

  std::size_t size() const { return nodes_.size(); }
  /// Maximum node depth; the root sits at depth 0.
  std::size_t depth() const { return depth_; }
  Index root() const { return 0; }

  const Node& node(Index i) const { return nodes_.at(i); }
  bool contains(std::string_view id) const;
  std::optional<Index> find(std::string_view id) const;
  /// Throws InputError naming the id when it is not in the tree.
  Index index_of(std::string_view id) const;

  std::size_t depth_of(Index i) const { return nodes_.at(i).depth; }
  /// The ancestor of `i` at depth `k` (i itself when k == depth_of(i)); empty
  /// when k exceeds the node's depth.
  std::optional<Index> ancestor_at_depth(Index i, std::size_t k) const;
  /// Depth of the lowest common ancestor of two nodes.
  std::size_t lca_depth(Index a, Index b) const;

  /// Position of the node in a depth-first pre-order walk, root = 0.
  std::size_t preorder_position(Index i) const { return preorder_.at(i); }
  /// Node indices in pre-order.
  std::span<const Index> preorder() const { return preorder_nodes_; }
  std::span<const Index> leaves() const { return leaves_; }

 private:
  OntologyTree() = default;

  std::vector<Node> nodes_;
  std::unordered_map<ConceptId, Index> index_;
  std::vector<std::size_t> preorder_;
  std::vector<Index> preorder_nodes_;
  std::vector<Index> leaves_;
  std::size_t depth_ = 0;
};

}  // namespace folkswarm
