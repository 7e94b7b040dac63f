#include "folkswarm/core_model.hpp"

#include <cmath>
#include <tuple>
#include <unordered_set>

#include <fmt/format.h>

#include "folkswarm/error.hpp"

namespace folkswarm {

FormalContext make_formal_context(std::string topic, std::vector<std::string> descriptors,
                                  ConceptId concept_id, const OntologyTree& tree) {
  FormalContext c;
  c.topic = std::move(topic);
  c.descriptors = std::move(descriptors);
  c.concept_id = std::move(concept_id);
  c.incidence.reserve(c.descriptors.size());
  for (const auto& d : c.descriptors) c.incidence.emplace_back(c.topic, d);
  validate(c, tree);
  return c;
}

void validate(const FormalContext& context, const OntologyTree& tree) {
  if (context.descriptors.empty()) {
    throw InputError("formal context: descriptor set must be non-empty");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& d : context.descriptors) {
    if (!seen.insert(d).second) {
      throw InputError(fmt::format("formal context: duplicate descriptor '{}'", d));
    }
  }
  for (const auto& [t, d] : context.incidence) {
    if (t != context.topic || !seen.contains(d)) {
      throw InputError(fmt::format("formal context: incidence pair ({}, {}) is foreign", t, d));
    }
  }
  tree.index_of(context.concept_id);
}

FDTag make_fd_tag(TagId id, FormalContext context, double exposition, std::string resource,
                  double elasticity, double c_coord) {
  if (!(exposition >= 0.0 && exposition <= 1.0)) {
    throw InputError(fmt::format("tag {}: exposition {} outside [0, 1]", id, exposition));
  }
  if (!(elasticity >= 0.0) || !std::isfinite(elasticity)) {
    throw InputError(fmt::format("tag {}: elasticity must be finite and >= 0", id));
  }
  if (!(c_coord >= 0.0 && c_coord <= 1.0)) {
    throw InputError(fmt::format("tag {}: context coordinate {} outside [0, 1]", id, c_coord));
  }
  FDTag tag;
  tag.id = id;
  tag.context = std::move(context);
  tag.exposition = exposition;
  tag.resource = std::move(resource);
  tag.elasticity = elasticity;
  tag.position = {c_coord, exposition};
  return tag;
}

FDEvent::FDEvent(std::string context_id, double exposition, std::string resource,
                 double time_component)
    : context_id_(std::move(context_id)),
      exposition_(exposition),
      resource_(std::move(resource)),
      time_component_(time_component) {
  if (time_component == 0.0 || std::isnan(time_component)) {
    throw InputError("event: time component must be non-zero");
  }
}

TimeDirection classify_time_direction(const FDEvent& event) {
  return event.time_component() < 0.0 ? TimeDirection::PastDirected
                                      : TimeDirection::FutureDirected;
}

bool RelationX::insert(XTriple triple) {
  if (!std::isfinite(triple.exposition)) {
    throw InputError("relation X: exposition must be finite");
  }
  return triples_.insert(std::move(triple)).second;
}

std::set<XTriple> web_slice(const RelationX& x, const std::string& context,
                            const std::string& resource) {
  const auto& all = x.triples();
  const XTriple lo{context, -HUGE_VAL, resource};
  std::set<XTriple> out;
  for (auto it = all.lower_bound(lo); it != all.end(); ++it) {
    if (it->context != context || it->resource != resource) break;
    out.insert(out.end(), *it);
  }
  return out;
}

std::size_t lca_depth(const ConceptId& a, const ConceptId& b, const OntologyTree& tree) {
  return tree.lca_depth(tree.index_of(a), tree.index_of(b));
}

namespace {

void check_level(std::size_t k, const OntologyTree& tree) {
  if (k < 1 || k > tree.depth()) {
    throw InputError(fmt::format("ontology level {} outside [1, {}]", k, tree.depth()));
  }
}

}  // namespace

bool is_simile_at_level(const FDTag& a, const FDTag& b, std::size_t k, const OntologyTree& tree) {
  check_level(k, tree);
  return lca_depth(a.context.concept_id, b.context.concept_id, tree) >= k;
}

bool is_in_ontology(const FDTag& tag, std::size_t k, const OntologyTree& tree) {
  check_level(k, tree);
  return tree.depth_of(tree.index_of(tag.context.concept_id)) >= k;
}

double context_coordinate(OntologyTree::Index concept_index, const OntologyTree& tree) {
  if (tree.size() < 2) return 0.0;
  return static_cast<double>(tree.preorder_position(concept_index)) /
         static_cast<double>(tree.size() - 1);
}

double context_coordinate(const FormalContext& context, const OntologyTree& tree) {
  return context_coordinate(tree.index_of(context.concept_id), tree);
}

}  // namespace folkswarm
