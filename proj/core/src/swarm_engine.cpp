#include "folkswarm/swarm_engine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include <fmt/format.h>

#include "folkswarm/error.hpp"

namespace folkswarm {

namespace {

constexpr std::string_view kBehaviorNames[] = {"disperse", "aggregate", "goal_seek", "flock",
                                               "compound"};
constexpr std::string_view kPhaseNames[] = {"none", "disperse", "seek", "linked_peer",
                                            "linked_goal"};

}  // namespace

std::string_view to_string(BehaviorKind kind) { return kBehaviorNames[static_cast<int>(kind)]; }

BehaviorKind parse_behavior_kind(std::string_view name) {
  for (int i = 0; i < 5; ++i) {
    if (kBehaviorNames[i] == name) return static_cast<BehaviorKind>(i);
  }
  throw InputError(fmt::format("unknown behavior '{}'", name));
}

std::string_view to_string(Phase phase) { return kPhaseNames[static_cast<int>(phase)]; }

Phase parse_phase(std::string_view name) {
  for (int i = 0; i < 5; ++i) {
    if (kPhaseNames[i] == name) return static_cast<Phase>(i);
  }
  throw InputError(fmt::format("unknown phase '{}'", name));
}

std::string_view to_string(CommandKind kind) {
  switch (kind) {
    case CommandKind::Stop: return "stop";
    case CommandKind::Go: return "go";
    case CommandKind::Link: return "link";
  }
  return "?";
}

void ScenarioConfig::validate() const {
  if (n_agents == 0) throw InputError("scenario: n_agents must be positive");
  if (max_ticks < 1) throw InputError("scenario: max_ticks must be >= 1");
  if (!(dt_seconds > 0.0)) throw InputError("scenario: dt_seconds must be > 0");
  if ((behavior == BehaviorKind::GoalSeek || behavior == BehaviorKind::Compound) && !goal) {
    throw InputError(fmt::format("scenario: behavior '{}' requires a goal", to_string(behavior)));
  }
  if (const auto* ex = std::get_if<ExplicitInit>(&init); ex && ex->agents.size() != n_agents) {
    throw InputError(fmt::format("scenario: n_agents = {} but {} agents are listed", n_agents,
                                 ex->agents.size()));
  }
  if (workers == 0) throw InputError("scenario: workers must be >= 1");
}

bool SimState::has_agent(TagId id) const {
  return id < agents.size() || (goal && goal->id == id);
}

std::vector<TagId> SimState::links_of(TagId id) const {
  std::vector<TagId> out;
  for (const auto& [a, b] : links) {
    if (a == id) out.push_back(b);
    if (b == id) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double diameter(std::span<const Vec2> positions) {
  double best = 0.0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      best = std::max(best, distance(positions[i], positions[j]));
    }
  }
  return best;
}

namespace {

FDTag make_agent_tag(TagId id, const ConceptId& concept_id, double elasticity,
                     const std::string& resource, Vec2 position, const OntologyTree& tree) {
  const ConceptId resolved = concept_id.empty() ? tree.node(tree.root()).id : concept_id;
  if (!tree.contains(resolved)) {
    throw InputError(fmt::format("agent {}: unknown concept id '{}'", id, resolved));
  }
  if (!(position.x >= 0.0 && position.x <= 1.0 && position.y >= 0.0 && position.y <= 1.0)) {
    throw InputError(fmt::format("agent {}: position outside the unit square", id));
  }
  auto context = make_formal_context("swarm", {fmt::format("agent{}", id)}, resolved, tree);
  return make_fd_tag(id, std::move(context), position.y,
                     resource.empty() ? fmt::format("agent://{}", id) : resource, elasticity,
                     position.x);
}

Frame snapshot_frame(const SimState& s) {
  Frame f;
  f.tick = s.tick;
  f.agents.reserve(s.agents.size());
  for (const auto& a : s.agents) f.agents.push_back({a.tag.position, a.phase, std::nullopt, {}});
  return f;
}

LinkPair ordered(TagId a, TagId b) { return a < b ? LinkPair{a, b} : LinkPair{b, a}; }

std::vector<std::vector<TagId>> link_lists(const SimState& s) {
  std::vector<std::vector<TagId>> out(s.agents.size());
  for (const auto& [a, b] : s.links) {
    if (a < out.size()) out[a].push_back(b);
    if (b < out.size()) out[b].push_back(a);
  }
  for (auto& v : out) std::sort(v.begin(), v.end());
  return out;
}

Perception sense_impl(const SimState& state, std::size_t index, const BehaviorParams& params,
                      std::vector<TagId> self_links) {
  const auto& self = state.agents[index].tag;
  Perception p;
  p.self = self;
  for (std::size_t j = 0; j < state.agents.size(); ++j) {
    if (j == index) continue;
    const auto& other = state.agents[j].tag;
    const double d = distance(self.position, other.position);
    if (d <= params.r_s) p.neighbors.push_back({other, d});
  }
  p.goal = state.goal;
  p.self_links = std::move(self_links);
  return p;
}

struct Decision {
  BehaviorCommand command;
  Phase next_phase = Phase::None;
  bool held = false;
};

Decision evaluate(const SimState& state, std::size_t i, const ScenarioConfig& cfg,
                  const OntologyTree& tree, const std::vector<std::vector<TagId>>& links) {
  const AgentState& agent = state.agents[i];
  if (agent.phase == Phase::LinkedGoal) return {BehaviorCommand::stop(), Phase::LinkedGoal};
  if (agent.hold_remaining > 0) {
    return {BehaviorCommand::go(agent.hold_direction, agent.hold_magnitude), agent.phase, true};
  }

  const auto& params = cfg.params;
  const Perception p = sense_impl(state, i, params, links[i]);
  switch (cfg.behavior) {
    case BehaviorKind::Disperse: return {disperse(p, params), agent.phase};
    case BehaviorKind::Aggregate: return {aggregate(p, params), agent.phase};
    case BehaviorKind::Flock: return {flock(p, tree, params), agent.phase};
    case BehaviorKind::GoalSeek: {
      auto cmd = goal_seek(p, params);
      const Phase next = cmd.kind == CommandKind::Link ? Phase::LinkedGoal : agent.phase;
      return {std::move(cmd), next};
    }
    case BehaviorKind::Compound: {
      auto d = compound_controller(agent.phase, p, tree, params, cfg.seek_forever);
      return {std::move(d.command), d.next_phase};
    }
  }
  throw Error("unreachable behavior kind");
}

}  // namespace

SimState init_sim(const ScenarioConfig& cfg, const OntologyTree& tree) {
  cfg.validate();
  cfg.params.validate(tree.depth());

  SimState s;
  std::visit(
      [&](const auto& init) {
        using T = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<T, UniformRandomInit>) {
          s.rng = Rng(init.seed);
          for (std::size_t i = 0; i < cfg.n_agents; ++i) {
            const double c = s.rng.uniform01();
            const double e = s.rng.uniform01();
            AgentState a;
            a.tag = make_agent_tag(static_cast<TagId>(i), init.concept_id, init.elasticity, {},
                                   {c, e}, tree);
            s.agents.push_back(std::move(a));
          }
        } else {
          for (std::size_t i = 0; i < init.agents.size(); ++i) {
            const AgentSpec& spec = init.agents[i];
            AgentState a;
            a.tag = make_agent_tag(static_cast<TagId>(i), spec.concept_id, spec.elasticity,
                                   spec.resource, spec.position, tree);
            if (spec.phase) a.phase = *spec.phase;
            s.agents.push_back(std::move(a));
          }
        }
      },
      cfg.init);

  const bool compound = cfg.behavior == BehaviorKind::Compound;
  if (compound) {
    const auto* ex = std::get_if<ExplicitInit>(&cfg.init);
    for (std::size_t i = 0; i < s.agents.size(); ++i) {
      if (!ex || !ex->agents[i].phase) s.agents[i].phase = Phase::Disperse;
    }
  }

  if (cfg.goal) {
    const TagId goal_id = static_cast<TagId>(cfg.n_agents);
    FDTag g = make_agent_tag(goal_id, cfg.goal->concept_id, cfg.goal->elasticity, "goal://",
                             cfg.goal->position, tree);
    s.goal = std::move(g);
  }

  for (const auto& [a, b] : cfg.initial_links) {
    if (a == b || !s.has_agent(a) || !s.has_agent(b)) {
      throw InputError(fmt::format("scenario: invalid initial link ({}, {})", a, b));
    }
    if (s.links.insert(ordered(a, b)).second) {
      s.link_events.push_back({0, std::min(a, b), std::max(a, b)});
    }
    for (TagId end : {a, b}) {
      if (end >= s.agents.size()) continue;
      auto& agent = s.agents[end];
      agent.tag.linked_to = end == a ? b : a;
      const bool to_goal = s.goal && agent.tag.linked_to == s.goal->id;
      if (to_goal) {
        agent.phase = Phase::LinkedGoal;
      } else if (compound && agent.phase == Phase::Disperse) {
        agent.phase = Phase::LinkedPeer;
      }
    }
  }

  s.trajectory.push_back(snapshot_frame(s));
  return s;
}

Perception sense(const SimState& state, TagId agent_id, const BehaviorParams& params) {
  if (agent_id >= state.agents.size()) {
    throw Error(fmt::format("sense: unknown agent id {}", agent_id));
  }
  return sense_impl(state, agent_id, params, state.links_of(agent_id));
}

SimState step(SimState state, const ScenarioConfig& cfg, const OntologyTree& tree,
              std::span<const std::size_t> evaluation_order) {
  if (state.tick >= cfg.max_ticks) {
    throw Error(fmt::format("step: simulation already finished at tick {}", state.tick));
  }
  const std::size_t n = state.agents.size();
  std::vector<std::size_t> order(n);
  if (evaluation_order.empty()) {
    std::iota(order.begin(), order.end(), std::size_t{0});
  } else {
    if (evaluation_order.size() != n) throw Error("step: evaluation order must cover every agent");
    order.assign(evaluation_order.begin(), evaluation_order.end());
    std::vector<bool> seen(n, false);
    for (auto i : order) {
      if (i >= n || seen[i]) throw Error("step: evaluation order is not a permutation");
      seen[i] = true;
    }
  }

  const auto links = link_lists(state);
  std::vector<Decision> decisions(n);
  const SimState& snapshot = state;
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (auto i : order) decisions[i] = evaluate(snapshot, i, cfg, tree, links);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = w; k < n; k += workers) {
            decisions[order[k]] = evaluate(snapshot, order[k], cfg, tree, links);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  const std::uint64_t next_tick = state.tick + 1;
  Frame frame;
  frame.tick = next_tick;
  frame.agents.reserve(n);
  bool all_stop = true;
  for (std::size_t i = 0; i < n; ++i) {
    AgentState& agent = state.agents[i];
    Decision& d = decisions[i];
    const BehaviorCommand& cmd = d.command;
    switch (cmd.kind) {
      case CommandKind::Go: {
        all_stop = false;
        const Vec2 dir = *cmd.direction;
        agent.tag.position = clamp_to_unit_square(agent.tag.position + dir * cmd.magnitude);
        if (d.held) {
          --agent.hold_remaining;
        } else if (cmd.sustain_ticks > 1) {
          agent.hold_remaining = cmd.sustain_ticks - 1;
          agent.hold_direction = dir;
          agent.hold_magnitude = cmd.magnitude;
        }
        break;
      }
      case CommandKind::Link: {
        all_stop = false;
        const TagId target = *cmd.target;
        if (target == agent.tag.id || !state.has_agent(target)) {
          throw Error(fmt::format("step: agent {} issued an invalid link to {}", i, target));
        }
        const LinkPair pair = ordered(agent.tag.id, target);
        if (state.links.insert(pair).second) {
          state.link_events.push_back({next_tick, pair.first, pair.second});
        }
        agent.tag.linked_to = target;
        break;
      }
      case CommandKind::Stop:
        break;
    }
    agent.phase = d.next_phase;
    frame.agents.push_back({agent.tag.position, agent.phase, cmd.kind, cmd.target});
  }

  state.tick = next_tick;
  state.quiet_ticks = all_stop ? state.quiet_ticks + 1 : 0;
  state.trajectory.push_back(std::move(frame));
  return state;
}

RunResult run(const ScenarioConfig& cfg, const OntologyTree& tree) {
  RunResult result{init_sim(cfg, tree), std::nullopt};
  SimState& s = result.state;
  while (s.tick < cfg.max_ticks) {
    s = step(std::move(s), cfg, tree);
    if (cfg.quiescence_window > 0 && s.quiet_ticks >= cfg.quiescence_window) break;
  }
  if (cfg.behavior == BehaviorKind::Flock) result.flock = analyze_flock(s, cfg.params);
  return result;
}

FlockReport analyze_flock(const SimState& state, const BehaviorParams& params) {
  FlockReport report;
  const std::size_t n = state.agents.size();
  if (n == 0 || state.trajectory.empty()) return report;

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<TagId> group;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(state.agents[j].tag.elasticity - state.agents[i].tag.elasticity) <=
          params.eps_elastic) {
        group.push_back(static_cast<TagId>(j));
      }
    }
    if (group.size() > report.reference_group.size()) report.reference_group = std::move(group);
  }

  const std::uint64_t last_tick = state.trajectory.back().tick;
  const std::uint64_t window_start = last_tick - last_tick / 4;
  std::vector<bool> always_far(n, true);
  std::vector<Vec2> members;
  for (const Frame& f : state.trajectory) {
    members.clear();
    Vec2 sum;
    for (TagId id : report.reference_group) {
      members.push_back(f.agents[id].position);
      sum = sum + f.agents[id].position;
    }
    report.diameter_series.push_back(diameter(members));
    if (f.tick < window_start) continue;
    const Vec2 c = sum / static_cast<double>(members.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (distance(f.agents[i].position, c) <= 2.0 * params.r_s) always_far[i] = false;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (always_far[i]) report.diverged_ids.push_back(static_cast<TagId>(i));
  }
  report.coherent = report.diverged_ids.empty();
  return report;
}

}  // namespace folkswarm
