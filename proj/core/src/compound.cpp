#include <cmath>

#include "folkswarm/swarm_engine.hpp"

namespace folkswarm {

CompoundDecision compound_controller(Phase phase, const Perception& p, const OntologyTree& tree,
                                     const BehaviorParams& params, bool seek_forever) {
  (void)tree;
  const auto same_elasticity = [&](const SensedNeighbor& n) {
    return std::abs(n.tag.elasticity - p.self.elasticity) <= params.eps_elastic;
  };

  switch (phase) {
    case Phase::LinkedGoal:
      return {BehaviorCommand::stop(), Phase::LinkedGoal};

    case Phase::None:
    case Phase::Disperse: {
      bool found_connection = false;
      for (const auto& n : p.neighbors) found_connection = found_connection || same_elasticity(n);
      return {disperse(p, params), found_connection ? Phase::Seek : Phase::Disperse};
    }

    case Phase::Seek:
    case Phase::LinkedPeer:
      break;
  }

  if (phase == Phase::LinkedPeer && !seek_forever) {
    return {BehaviorCommand::stop(), Phase::LinkedPeer};
  }

  // Arriving at the goal ends the task, so it outranks the local reactions.
  if (p.goal && distance(p.self.position, p.goal->position) <= params.r_p) {
    return {BehaviorCommand::link(p.goal->id), Phase::LinkedGoal};
  }

  const auto different = [&](const SensedNeighbor& n) { return !same_elasticity(n); };
  if (auto avoid = avoid_nearest_within_personal_space(p, params, different)) {
    return {*avoid, phase};
  }

  const SensedNeighbor* peer = nullptr;
  for (const auto& n : p.neighbors) {
    if (n.distance > params.r_p || !same_elasticity(n) || p.is_linked_to(n.tag.id)) continue;
    if (peer == nullptr || n.distance < peer->distance ||
        (n.distance == peer->distance && n.tag.id < peer->tag.id)) {
      peer = &n;
    }
  }
  if (peer != nullptr) return {BehaviorCommand::link(peer->tag.id), Phase::LinkedPeer};

  return {goal_seek(p, params), phase};
}

}  // namespace folkswarm
