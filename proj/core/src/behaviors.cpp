#include "folkswarm/behaviors.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "folkswarm/error.hpp"

namespace folkswarm {

BehaviorCommand BehaviorCommand::go(Vec2 direction, double magnitude, std::uint32_t sustain_ticks) {
  BehaviorCommand c;
  c.kind = CommandKind::Go;
  c.direction = normalized_or_fallback(direction);
  c.magnitude = magnitude;
  c.sustain_ticks = std::max<std::uint32_t>(sustain_ticks, 1);
  return c;
}

BehaviorCommand BehaviorCommand::link(TagId target) {
  BehaviorCommand c;
  c.kind = CommandKind::Link;
  c.target = target;
  return c;
}

bool Perception::is_linked_to(TagId id) const {
  return std::binary_search(self_links.begin(), self_links.end(), id);
}

void BehaviorParams::validate(std::size_t ontology_depth) const {
  const auto fail = [](const std::string& what) { throw InputError("behavior params: " + what); };
  if (!(r_p > 0.0 && r_p < r_s && r_s <= 1.0)) fail("require 0 < r_p < r_s <= 1");
  if (!(step > 0.0) || !std::isfinite(step)) fail("step must be > 0");
  if (t_forward < 1) fail("t_forward must be >= 1");
  if (!(eps_elastic >= 0.0)) fail("eps_elastic must be >= 0");
  if (!(k_agg >= 0.0) || !std::isfinite(k_agg)) fail("k_agg must be >= 0");
  if (!(d_agg >= 0.0) || !std::isfinite(d_agg)) fail("d_agg must be >= 0");
  if (level_simile < 1 || level_simile > ontology_depth) {
    fail(fmt::format("level_simile {} outside [1, {}]", level_simile, ontology_depth));
  }
}

Vec2 centroid(const std::vector<SensedNeighbor>& neighbors) {
  Vec2 sum;
  for (const auto& n : neighbors) sum = sum + n.tag.position;
  return sum / static_cast<double>(neighbors.size());
}

namespace {

void require_neighbor(const Perception& p, const FDTag& other) {
  const bool found = std::any_of(p.neighbors.begin(), p.neighbors.end(),
                                 [&](const SensedNeighbor& n) { return n.tag.id == other.id; });
  if (!found) throw Error(fmt::format("tag {} is not a sensed neighbor of {}", other.id, p.self.id));
}

}  // namespace

MatchDecision avoid_or_merge(const Perception& p, const FDTag& other, const OntologyTree& tree,
                             const BehaviorParams& params) {
  require_neighbor(p, other);
  return is_simile_at_level(p.self, other, params.level_simile, tree) ? MatchDecision::Merge
                                                                       : MatchDecision::Avoid;
}

std::optional<std::size_t> avoid_trigger_level(const FDTag& other, const OntologyTree& tree) {
  for (std::size_t k = 1; k <= tree.depth(); ++k) {
    if (!is_in_ontology(other, k, tree)) return k;
  }
  return std::nullopt;
}

std::optional<std::size_t> merge_trigger_level(const FDTag& other, const OntologyTree& tree) {
  for (std::size_t k = 1; k <= tree.depth(); ++k) {
    if (is_in_ontology(other, k, tree)) return k;
  }
  return std::nullopt;
}

BehaviorCommand avoid_everything_else(const Perception& p, const FDTag& other,
                                      const OntologyTree& tree, const BehaviorParams& params) {
  require_neighbor(p, other);
  if (!avoid_trigger_level(other, tree)) return BehaviorCommand::stop();
  return BehaviorCommand::go(p.self.position - other.position, params.step);
}

BehaviorCommand merge_everything_else(const Perception& p, const FDTag& other,
                                      const OntologyTree& tree) {
  require_neighbor(p, other);
  if (!merge_trigger_level(other, tree)) return BehaviorCommand::stop();
  return BehaviorCommand::link(other.id);
}

BehaviorCommand disperse(const Perception& p, const BehaviorParams& params) {
  if (p.neighbors.size() >= 2) {
    return BehaviorCommand::go(p.self.position - centroid(p.neighbors), params.step,
                               params.t_forward);
  }
  if (p.neighbors.size() == 1 && p.neighbors.front().distance <= params.r_p) {
    return BehaviorCommand::go(p.self.position - p.neighbors.front().tag.position, params.step,
                               params.t_forward);
  }
  return BehaviorCommand::stop();
}

BehaviorCommand aggregate(const Perception& p, const BehaviorParams& params) {
  if (p.neighbors.empty()) return BehaviorCommand::stop();
  const Vec2 c = centroid(p.neighbors);
  if (distance(p.self.position, c) <= params.d_agg / 2.0) return BehaviorCommand::stop();
  return BehaviorCommand::go(c - p.self.position, params.step);
}

BehaviorCommand goal_seek(const Perception& p, const BehaviorParams& params) {
  if (!p.goal) throw Error("goal_seek requires a goal tag");
  if (distance(p.self.position, p.goal->position) <= params.r_p) {
    return BehaviorCommand::link(p.goal->id);
  }
  return BehaviorCommand::go(p.goal->position - p.self.position, params.step);
}

BehaviorCommand flock(const Perception& p, const OntologyTree& tree, const BehaviorParams& params) {
  const auto different_elasticity = [&](const SensedNeighbor& n) {
    return std::abs(n.tag.elasticity - p.self.elasticity) > params.eps_elastic;
  };
  const auto offending = [&](const SensedNeighbor& n) {
    return different_elasticity(n) ||
           !is_simile_at_level(p.self, n.tag, params.level_simile, tree);
  };
  if (auto avoid = avoid_nearest_within_personal_space(p, params, offending)) return *avoid;

  Vec2 sum;
  std::size_t count = 0;
  for (const auto& n : p.neighbors) {
    if (different_elasticity(n)) continue;
    sum = sum + n.tag.position;
    ++count;
  }
  if (count == 0) return BehaviorCommand::stop();
  const Vec2 c = sum / static_cast<double>(count);
  const double d = distance(p.self.position, c);
  return BehaviorCommand::go(c - p.self.position, std::min(params.step, params.k_agg * d));
}

}  // namespace folkswarm
