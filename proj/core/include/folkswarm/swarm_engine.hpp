#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "folkswarm/behaviors.hpp"
#include "folkswarm/core_model.hpp"
#include "folkswarm/ontology.hpp"
#include "folkswarm/random.hpp"

namespace folkswarm {

enum class BehaviorKind { Disperse, Aggregate, GoalSeek, Flock, Compound };

std::string_view to_string(BehaviorKind kind);
/// Accepts the snake_case names written by to_string. Throws InputError.
BehaviorKind parse_behavior_kind(std::string_view name);

/// Per-agent controller state. Only Compound scenarios move through
/// Disperse -> Seek -> LinkedPeer/LinkedGoal; GoalSeek agents go from None to
/// LinkedGoal when they reach the goal.
enum class Phase { None, Disperse, Seek, LinkedPeer, LinkedGoal };

std::string_view to_string(Phase phase);
Phase parse_phase(std::string_view name);
std::string_view to_string(CommandKind kind);

struct GoalSpec {
  Vec2 position;
  ConceptId concept_id;  ///< empty means the ontology root
  double elasticity = kDefaultElasticity;
};

struct AgentSpec {
  Vec2 position;
  ConceptId concept_id;  ///< empty means the ontology root
  double elasticity = kDefaultElasticity;
  std::string resource;  ///< empty means "agent://<id>"
  std::optional<Phase> phase;
};

/// Positions drawn i.i.d. uniform on the unit square from `seed`.
struct UniformRandomInit {
  std::uint64_t seed = 0;
  /// False while `seed` is only the default, so a fallback seed may replace it.
  bool seed_given = false;
  ConceptId concept_id;
  double elasticity = kDefaultElasticity;
};

struct ExplicitInit {
  std::vector<AgentSpec> agents;
};

using InitSpec = std::variant<UniformRandomInit, ExplicitInit>;

struct ScenarioConfig {
  std::size_t n_agents = 1;
  BehaviorKind behavior = BehaviorKind::Disperse;
  BehaviorParams params;
  std::filesystem::path ontology_path;
  std::optional<GoalSpec> goal;
  InitSpec init = UniformRandomInit{};
  /// Links that exist before the first tick (agent ids).
  std::vector<std::pair<TagId, TagId>> initial_links;
  std::uint64_t max_ticks = 500;
  double dt_seconds = 1.0;
  /// Compound agents linked to a peer keep seeking when true, stop otherwise.
  bool seek_forever = true;
  /// Consecutive all-Stop ticks that end a run; 0 disables the check.
  std::uint32_t quiescence_window = 10;
  /// Threads used to evaluate behaviors within a tick.
  unsigned workers = 1;

  /// Structural checks that do not need the ontology. Throws InputError.
  void validate() const;
};

struct AgentState {
  FDTag tag;
  Phase phase = Phase::None;
  /// Remaining ticks of a committed Go, and its direction and displacement.
  std::uint32_t hold_remaining = 0;
  Vec2 hold_direction;
  double hold_magnitude = 0.0;

  bool operator==(const AgentState&) const = default;
};

struct AgentFrame {
  Vec2 position;
  Phase phase = Phase::None;
  /// Command executed to reach this frame; empty for the initial frame.
  std::optional<CommandKind> command;
  std::optional<TagId> link_target;

  bool operator==(const AgentFrame&) const = default;
};

struct Frame {
  std::uint64_t tick = 0;
  std::vector<AgentFrame> agents;

  bool operator==(const Frame&) const = default;
};

struct LinkEvent {
  std::uint64_t tick = 0;
  TagId a = 0;  ///< smaller id
  TagId b = 0;

  bool operator==(const LinkEvent&) const = default;
};

using LinkPair = std::pair<TagId, TagId>;

/// Complete synchronous world state. Agent ids are 0..n-1 and agents[i] has
/// id i; the goal, when present, has id n.
struct SimState {
  std::uint64_t tick = 0;
  std::vector<AgentState> agents;
  std::optional<FDTag> goal;
  /// Unordered pairs stored as (min, max).
  std::set<LinkPair> links;
  std::vector<LinkEvent> link_events;
  Rng rng;
  std::vector<Frame> trajectory;
  /// Consecutive ticks in which every agent was commanded Stop.
  std::uint64_t quiet_ticks = 0;

  bool has_agent(TagId id) const;
  /// Every id linked to `id`, ascending.
  std::vector<TagId> links_of(TagId id) const;

  bool operator==(const SimState&) const = default;
};

/// Per-tick flock analysis. The reference group is the largest set of agents
/// whose elasticity lies within eps_elastic of one member (ties go to the
/// lowest member id); an agent diverges when it stays farther than 2 * r_s
/// from that group's centroid for the whole final quarter of the run.
struct FlockReport {
  bool coherent = true;
  /// Max pairwise distance within the reference group, one entry per frame.
  std::vector<double> diameter_series;
  std::vector<TagId> diverged_ids;
  std::vector<TagId> reference_group;
};

struct RunResult {
  SimState state;
  std::optional<FlockReport> flock;
};

/// Places agents as `cfg.init` describes. Throws InputError for unknown concepts,
/// a mismatched agent count or invalid parameters.
SimState init_sim(const ScenarioConfig& cfg, const OntologyTree& tree);

/// Tags within r_s of the agent (closed ball), with exact distances, plus
/// the goal. Throws Error for an unknown agent id.
Perception sense(const SimState& state, TagId agent_id, const BehaviorParams& params);

/// Advances one synchronous tick. Every command is computed from the input
/// state before any is applied; commands are applied in agent-id order.
/// `evaluation_order`, when given, must be a permutation of agent indices and
/// only changes the order in which behaviors are evaluated.
SimState step(SimState state, const ScenarioConfig& cfg, const OntologyTree& tree,
              std::span<const std::size_t> evaluation_order = {});

/// Steps until max_ticks or quiescence. Flock scenarios also get a report.
RunResult run(const ScenarioConfig& cfg, const OntologyTree& tree);

/// Flock analysis over a recorded trajectory.
FlockReport analyze_flock(const SimState& state, const BehaviorParams& params);

/// The behavior one compound agent runs this tick and its next phase.
struct CompoundDecision {
  BehaviorCommand command;
  Phase next_phase = Phase::Disperse;

  bool operator==(const CompoundDecision&) const = default;
};

/// Matching-task state machine: disperse until a same-elasticity tag is
/// sensed, then seek the goal, avoiding different-elasticity tags inside
/// personal space and linking to same-elasticity ones.
CompoundDecision compound_controller(Phase phase, const Perception& p, const OntologyTree& tree,
                                     const BehaviorParams& params, bool seek_forever = true);

/// Max pairwise distance among the given positions; 0 for fewer than two.
double diameter(std::span<const Vec2> positions);

}  // namespace folkswarm
