#include "folkswarm/ontology.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "folkswarm/error.hpp"

namespace folkswarm {

OntologyTree::Builder::Builder(ConceptId root_id, std::string root_label) {
  if (root_id.empty()) throw InputError("ontology: node id must be non-empty");
  if (root_label.empty()) root_label = root_id;
  index_.emplace(root_id, 0);
  nodes_.push_back(Node{std::move(root_id), std::move(root_label), std::nullopt, 0, {}});
}

OntologyTree::Builder& OntologyTree::Builder::add_child(std::string_view parent_id, ConceptId id,
                                                        std::string label) {
  const auto parent = index_.find(std::string(parent_id));
  if (parent == index_.end()) {
    throw InputError(fmt::format("ontology: unknown parent id '{}'", parent_id));
  }
  if (id.empty()) throw InputError("ontology: node id must be non-empty");
  if (index_.contains(id)) {
    throw InputError(fmt::format("ontology: duplicate node id '{}'", id));
  }
  const Index p = parent->second;
  const Index i = nodes_.size();
  if (label.empty()) label = id;
  index_.emplace(id, i);
  nodes_.push_back(Node{std::move(id), std::move(label), p, nodes_[p].depth + 1, {}});
  nodes_[p].children.push_back(i);
  return *this;
}

OntologyTree OntologyTree::Builder::build() && {
  OntologyTree tree;
  tree.nodes_ = std::move(nodes_);
  tree.index_ = std::move(index_);

  const std::size_t n = tree.nodes_.size();
  tree.preorder_.assign(n, 0);
  tree.preorder_nodes_.reserve(n);
  std::vector<Index> stack{0};
  while (!stack.empty()) {
    const Index i = stack.back();
    stack.pop_back();
    tree.preorder_[i] = tree.preorder_nodes_.size();
    tree.preorder_nodes_.push_back(i);
    const auto& kids = tree.nodes_[i].children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    if (kids.empty()) tree.leaves_.push_back(i);
    tree.depth_ = std::max(tree.depth_, tree.nodes_[i].depth);
  }
  return tree;
}

namespace {

void add_json_subtree(OntologyTree::Builder& builder, const std::string& parent_id,
                      const nlohmann::json& node);

std::pair<std::string, std::string> read_id_label(const nlohmann::json& node) {
  if (!node.is_object()) throw InputError("ontology: every node must be a JSON object");
  const auto id = node.find("id");
  if (id == node.end() || !id->is_string()) {
    throw InputError("ontology: node is missing a string \"id\"");
  }
  std::string label;
  if (const auto l = node.find("label"); l != node.end()) {
    if (!l->is_string()) throw InputError("ontology: \"label\" must be a string");
    label = l->get<std::string>();
  }
  return {id->get<std::string>(), std::move(label)};
}

void add_json_children(OntologyTree::Builder& builder, const std::string& id,
                       const nlohmann::json& node) {
  const auto kids = node.find("children");
  if (kids == node.end()) return;
  if (!kids->is_array()) throw InputError("ontology: \"children\" must be an array");
  for (const auto& child : *kids) add_json_subtree(builder, id, child);
}

void add_json_subtree(OntologyTree::Builder& builder, const std::string& parent_id,
                      const nlohmann::json& node) {
  auto [id, label] = read_id_label(node);
  builder.add_child(parent_id, id, std::move(label));
  add_json_children(builder, id, node);
}

}  // namespace

OntologyTree OntologyTree::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(fmt::format("ontology: invalid JSON: {}", e.what()));
  }
  auto [id, label] = read_id_label(doc);
  Builder builder(id, std::move(label));
  add_json_children(builder, id, doc);
  return std::move(builder).build();
}

OntologyTree OntologyTree::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("ontology: cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

bool OntologyTree::contains(std::string_view id) const { return find(id).has_value(); }

std::optional<OntologyTree::Index> OntologyTree::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

OntologyTree::Index OntologyTree::index_of(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw InputError(fmt::format("unknown concept id '{}'", id));
}

std::optional<OntologyTree::Index> OntologyTree::ancestor_at_depth(Index i, std::size_t k) const {
  if (k > nodes_.at(i).depth) return std::nullopt;
  while (nodes_[i].depth > k) i = *nodes_[i].parent;
  return i;
}

std::size_t OntologyTree::lca_depth(Index a, Index b) const {
  while (nodes_.at(a).depth > nodes_.at(b).depth) a = *nodes_[a].parent;
  while (nodes_[b].depth > nodes_[a].depth) b = *nodes_[b].parent;
  while (a != b) {
    a = *nodes_[a].parent;
    b = *nodes_[b].parent;
  }
  return nodes_[a].depth;
}

}  // namespace folkswarm
