#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "folkswarm/core_model.hpp"
#include "folkswarm/geometry.hpp"
#include "folkswarm/ontology.hpp"

namespace folkswarm {

enum class CommandKind { Stop, Go, Link };

/// Effect of one behavior evaluation on one agent.
///
/// Go carries a unit direction and the displacement to apply this tick;
/// `sustain_ticks` > 1 commits the agent to the same move for that many ticks
/// in total. Link carries the id of the tag to link to.
struct BehaviorCommand {
  CommandKind kind = CommandKind::Stop;
  std::optional<Vec2> direction;
  double magnitude = 0.0;
  std::uint32_t sustain_ticks = 1;
  std::optional<TagId> target;

  static BehaviorCommand stop() { return {}; }
  /// `direction` is normalized here; a zero vector becomes kFallbackDirection.
  static BehaviorCommand go(Vec2 direction, double magnitude, std::uint32_t sustain_ticks = 1);
  static BehaviorCommand link(TagId target);

  bool operator==(const BehaviorCommand&) const = default;
};

struct SensedNeighbor {
  FDTag tag;
  double distance = 0.0;

  bool operator==(const SensedNeighbor&) const = default;
};

/// Everything an agent may read when choosing its command: its own state,
/// the tags within sensing radius and the goal tag, if any. Agents never see
/// beyond this.
struct Perception {
  FDTag self;
  std::vector<SensedNeighbor> neighbors;
  std::optional<FDTag> goal;
  /// Ids the agent is already linked to, ascending.
  std::vector<TagId> self_links;

  bool is_linked_to(TagId id) const;
};

struct BehaviorParams {
  double r_p = 0.05;         ///< personal-space radius
  double r_s = 0.2;          ///< sensing radius
  double step = 0.01;        ///< displacement per tick
  std::uint32_t t_forward = 5;
  double eps_elastic = 0.05;
  double k_agg = 0.5;
  double d_agg = 0.4;
  std::size_t level_simile = 1;

  /// Throws InputError unless 0 < r_p < r_s <= 1, step > 0, t_forward >= 1,
  /// eps_elastic >= 0, k_agg >= 0, d_agg >= 0 and 1 <= level_simile <= depth.
  void validate(std::size_t ontology_depth) const;

  bool operator==(const BehaviorParams&) const = default;
};

enum class MatchDecision { Avoid, Merge };

/// Merge when the two tags are similar at params.level_simile, else Avoid.
MatchDecision avoid_or_merge(const Perception& p, const FDTag& other, const OntologyTree& tree,
                             const BehaviorParams& params);

/// First level in 1..depth at which `other` is not in the ontology.
std::optional<std::size_t> avoid_trigger_level(const FDTag& other, const OntologyTree& tree);
/// First level in 1..depth at which `other` is in the ontology.
std::optional<std::size_t> merge_trigger_level(const FDTag& other, const OntologyTree& tree);

/// Level scan for unrecognised tags: Go straight away from `other` at the
/// first failing level, Stop when it is recognised at every level. The Go
/// displacement is params.step.
BehaviorCommand avoid_everything_else(const Perception& p, const FDTag& other,
                                      const OntologyTree& tree, const BehaviorParams& params = {});
/// Complement of avoid_everything_else: Link at the first passing level.
BehaviorCommand merge_everything_else(const Perception& p, const FDTag& other,
                                      const OntologyTree& tree);

BehaviorCommand disperse(const Perception& p, const BehaviorParams& params);
BehaviorCommand aggregate(const Perception& p, const BehaviorParams& params);
/// Throws Error when the perception carries no goal.
BehaviorCommand goal_seek(const Perception& p, const BehaviorParams& params);
BehaviorCommand flock(const Perception& p, const OntologyTree& tree, const BehaviorParams& params);

/// Straight-line repulsion from the nearest neighbor inside r_p that matches
/// `offending`; empty when there is none.
template <typename Pred>
std::optional<BehaviorCommand> avoid_nearest_within_personal_space(const Perception& p,
                                                                   const BehaviorParams& params,
                                                                   Pred offending) {
  const SensedNeighbor* nearest = nullptr;
  for (const auto& n : p.neighbors) {
    if (n.distance > params.r_p || !offending(n)) continue;
    if (nearest == nullptr || n.distance < nearest->distance ||
        (n.distance == nearest->distance && n.tag.id < nearest->tag.id)) {
      nearest = &n;
    }
  }
  if (nearest == nullptr) return std::nullopt;
  return BehaviorCommand::go(p.self.position - nearest->tag.position, params.step);
}

/// Mean position of the given neighbors. Requires a non-empty list.
Vec2 centroid(const std::vector<SensedNeighbor>& neighbors);

}  // namespace folkswarm
