#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "folkswarm/error.hpp"
#include "folkswarm/scenario.hpp"
#include "folkswarm/swarm_engine.hpp"
#include "oracles.hpp"

using namespace folkswarm;

namespace {

const OntologyTree& tree15() {
  static const OntologyTree t = oracle::binary_tree_15();
  return t;
}

ScenarioConfig explicit_cfg(BehaviorKind behavior, const std::vector<Vec2>& positions,
                            std::optional<Vec2> goal = std::nullopt) {
  ScenarioConfig cfg;
  cfg.behavior = behavior;
  cfg.n_agents = positions.size();
  ExplicitInit init;
  for (const auto& p : positions) init.agents.push_back({p, "aaa", kDefaultElasticity, {}, {}});
  cfg.init = init;
  if (goal) cfg.goal = GoalSpec{*goal, "aaa", kDefaultElasticity};
  return cfg;
}

std::vector<Vec2> positions(const SimState& s) {
  std::vector<Vec2> out;
  for (const auto& a : s.agents) out.push_back(a.tag.position);
  return out;
}

std::vector<Vec2> random_points(std::size_t n, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({u(gen), u(gen)});
  return out;
}

void check_invariants(const SimState& s) {
  EXPECT_EQ(s.trajectory.size(), s.tick + 1);
  for (const auto& [a, b] : s.links) {
    EXPECT_LT(a, b);
    EXPECT_TRUE(s.has_agent(a));
    EXPECT_TRUE(s.has_agent(b));
  }
  for (const auto& a : s.agents) {
    EXPECT_GE(a.tag.position.x, 0.0);
    EXPECT_LE(a.tag.position.x, 1.0);
    EXPECT_GE(a.tag.position.y, 0.0);
    EXPECT_LE(a.tag.position.y, 1.0);
  }
}

}  // namespace

TEST(Init, ExplicitSingleAgent) {
  const auto s = init_sim(explicit_cfg(BehaviorKind::Disperse, {{0.5, 0.5}}), tree15());
  ASSERT_EQ(s.agents.size(), 1u);
  EXPECT_EQ(s.agents[0].tag.position, (Vec2{0.5, 0.5}));
  EXPECT_EQ(s.tick, 0u);
  EXPECT_TRUE(s.links.empty());
  EXPECT_EQ(s.trajectory.size(), 1u);
}

TEST(Init, UniformRandomIsDeterministic) {
  ScenarioConfig cfg;
  cfg.n_agents = 5;
  cfg.init = UniformRandomInit{42, true, "aaa", kDefaultElasticity};
  EXPECT_EQ(init_sim(cfg, tree15()), init_sim(cfg, tree15()));
  auto other = cfg;
  other.init = UniformRandomInit{43, true, "aaa", kDefaultElasticity};
  EXPECT_NE(positions(init_sim(cfg, tree15())), positions(init_sim(other, tree15())));
}

TEST(Init, Errors) {
  auto cfg = explicit_cfg(BehaviorKind::Disperse, {{0.5, 0.5}});
  std::get<ExplicitInit>(cfg.init).agents[0].concept_id = "missing";
  EXPECT_THROW(init_sim(cfg, tree15()), InputError);
  cfg = explicit_cfg(BehaviorKind::Disperse, {{0.5, 0.5}});
  cfg.n_agents = 0;
  EXPECT_THROW(init_sim(cfg, tree15()), InputError);
  cfg = explicit_cfg(BehaviorKind::GoalSeek, {{0.5, 0.5}});
  EXPECT_THROW(init_sim(cfg, tree15()), InputError);
  cfg = explicit_cfg(BehaviorKind::Disperse, {{1.5, 0.5}});
  EXPECT_THROW(init_sim(cfg, tree15()), InputError);
}

TEST(Sense, LoneAgentAndClosedBall) {
  BehaviorParams params;
  const auto lone = init_sim(explicit_cfg(BehaviorKind::Disperse, {{0.5, 0.5}}), tree15());
  EXPECT_TRUE(sense(lone, 0, params).neighbors.empty());
  EXPECT_THROW(sense(lone, 1, params), Error);

  const auto pair = init_sim(explicit_cfg(BehaviorKind::Disperse, {{0.25, 0.5}, {0.5, 0.5}}), tree15());
  params.r_s = 0.25;
  EXPECT_EQ(sense(pair, 0, params).neighbors.size(), 1u);
  EXPECT_EQ(sense(pair, 1, params).neighbors.size(), 1u);
  EXPECT_DOUBLE_EQ(sense(pair, 0, params).neighbors[0].distance, 0.25);
  params.r_s = 0.25 - 1e-9;
  EXPECT_TRUE(sense(pair, 0, params).neighbors.empty());
}

TEST(Sense, MatchesBruteForce) {
  BehaviorParams params;
  const auto pts = random_points(40, 5);
  const auto s = init_sim(explicit_cfg(BehaviorKind::Disperse, pts), tree15());
  for (TagId i = 0; i < pts.size(); ++i) {
    std::vector<TagId> want;
    for (TagId j = 0; j < pts.size(); ++j) {
      if (i != j && std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y) <= params.r_s) {
        want.push_back(j);
      }
    }
    std::vector<TagId> got;
    for (const auto& n : sense(s, i, params).neighbors) got.push_back(n.tag.id);
    EXPECT_EQ(got, want);
  }
}

TEST(Step, AllStopLeavesPositions) {
  const auto cfg = explicit_cfg(BehaviorKind::Disperse, {{0.1, 0.1}, {0.9, 0.9}});
  const auto s0 = init_sim(cfg, tree15());
  const auto s1 = step(s0, cfg, tree15());
  EXPECT_EQ(positions(s1), positions(s0));
  EXPECT_EQ(s1.tick, 1u);
  EXPECT_EQ(s1.quiet_ticks, 1u);
  check_invariants(s1);
}

TEST(Step, GoalSeekArrivesWithinBound) {
  for (int k : {1, 3, 10, 37}) {
    BehaviorParams params;
    const double d = params.step * k;
    auto cfg = explicit_cfg(BehaviorKind::GoalSeek, {{0.2, 0.3}}, Vec2{0.2 + d, 0.3});
    auto s = init_sim(cfg, tree15());
    while (s.agents[0].phase != Phase::LinkedGoal && s.tick < static_cast<std::uint64_t>(k) + 1) {
      s = step(std::move(s), cfg, tree15());
    }
    EXPECT_EQ(s.agents[0].phase, Phase::LinkedGoal) << k;
    EXPECT_TRUE(s.links.count({0, 1})) << k;
    check_invariants(s);
  }
}

TEST(Step, DisperseSeparatesClosePair) {
  const auto cfg = explicit_cfg(BehaviorKind::Disperse, {{0.49, 0.5}, {0.51, 0.5}});
  const auto s0 = init_sim(cfg, tree15());
  const auto s1 = step(s0, cfg, tree15());
  EXPECT_GT(distance(s1.agents[0].tag.position, s1.agents[1].tag.position),
            distance(s0.agents[0].tag.position, s0.agents[1].tag.position));
}

TEST(Step, FinishedSimulationThrows) {
  auto cfg = explicit_cfg(BehaviorKind::Disperse, {{0.5, 0.5}});
  cfg.max_ticks = 1;
  auto s = step(init_sim(cfg, tree15()), cfg, tree15());
  EXPECT_THROW(step(s, cfg, tree15()), Error);
}

TEST(Step, EvaluationOrderDoesNotMatter) {
  ScenarioConfig cfg;
  cfg.behavior = BehaviorKind::Compound;
  cfg.n_agents = 12;
  ExplicitInit init;
  const auto pts = random_points(12, 3, 0.3, 0.7);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    init.agents.push_back({pts[i], "aaa", i % 3 == 0 ? 1.5 : 1.0, {}, {}});
  }
  cfg.init = init;
  cfg.goal = GoalSpec{{0.5, 0.5}, "aaa", 1.0};
  auto a = init_sim(cfg, tree15());
  auto b = a;
  std::vector<std::size_t> order(12);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 gen(9);
  for (int t = 0; t < 120; ++t) {
    std::shuffle(order.begin(), order.end(), gen);
    a = step(std::move(a), cfg, tree15());
    b = step(std::move(b), cfg, tree15(), order);
    ASSERT_EQ(a, b) << "tick " << t;
  }
  check_invariants(a);
  const std::vector<std::size_t> bad{0, 0, 1};
  EXPECT_THROW(step(a, cfg, tree15(), bad), Error);
}

TEST(Step, WorkersMatchSingleThread) {
  for (auto behavior : {BehaviorKind::Disperse, BehaviorKind::Aggregate, BehaviorKind::Flock}) {
    auto cfg = explicit_cfg(behavior, random_points(30, 17, 0.3, 0.7));
    cfg.max_ticks = 60;
    auto threaded = cfg;
    threaded.workers = 4;
    EXPECT_EQ(run(cfg, tree15()).state, run(threaded, tree15()).state);
  }
}

TEST(Run, LoneDisperserIsQuiescentAtTen) {
  const auto r = run(explicit_cfg(BehaviorKind::Disperse, {{0.5, 0.5}}), tree15());
  EXPECT_EQ(r.state.tick, 10u);
  EXPECT_FALSE(r.flock);
}

TEST(Run, InvariantsHoldForEveryBehavior) {
  for (auto behavior : {BehaviorKind::Disperse, BehaviorKind::Aggregate, BehaviorKind::Flock,
                        BehaviorKind::GoalSeek, BehaviorKind::Compound}) {
    auto cfg = explicit_cfg(behavior, random_points(15, 23), Vec2{0.5, 0.5});
    cfg.max_ticks = 200;
    const auto r = run(cfg, tree15());
    check_invariants(r.state);
    EXPECT_EQ(r.flock.has_value(), behavior == BehaviorKind::Flock);
    for (std::size_t i = 0; i < r.state.agents.size(); ++i) {
      const auto& frame = r.state.trajectory.back().agents[i];
      EXPECT_EQ(frame.position, r.state.agents[i].tag.position);
    }
  }
}

TEST(Run, FlockNeverLinks) {
  auto cfg = explicit_cfg(BehaviorKind::Flock, random_points(20, 31, 0.4, 0.6));
  cfg.max_ticks = 300;
  EXPECT_TRUE(run(cfg, tree15()).state.links.empty());
}

TEST(Compound, DisperseWithoutNeighborsStays) {
  BehaviorParams params;
  Perception p;
  p.self = fixture::tag(0, "aaa", {0.5, 0.5}, tree15());
  p.goal = fixture::tag(9, "aaa", {0.9, 0.9}, tree15());
  const auto d = compound_controller(Phase::Disperse, p, tree15(), params);
  EXPECT_EQ(d.command.kind, CommandKind::Stop);
  EXPECT_EQ(d.next_phase, Phase::Disperse);
}

TEST(Compound, TransitionsAndReactions) {
  BehaviorParams params;
  Perception p;
  p.self = fixture::tag(0, "aaa", {0.5, 0.5}, tree15());
  p.goal = fixture::tag(9, "aaa", {0.9, 0.5}, tree15());
  const auto same = fixture::tag(1, "bbb", {0.47, 0.5}, tree15());
  const auto other = fixture::tag(2, "aaa", {0.53, 0.5}, tree15(), 1.5);

  p.neighbors = {{same, 0.03}};
  EXPECT_EQ(compound_controller(Phase::Disperse, p, tree15(), params).next_phase, Phase::Seek);
  p.neighbors = {{other, 0.03}};
  EXPECT_EQ(compound_controller(Phase::Disperse, p, tree15(), params).next_phase, Phase::Disperse);

  const auto avoid = compound_controller(Phase::Seek, p, tree15(), params);
  EXPECT_EQ(avoid.command.kind, CommandKind::Go);
  EXPECT_NEAR(avoid.command.direction->x, -1.0, 1e-12);

  p.neighbors = {{same, 0.03}};
  const auto link = compound_controller(Phase::Seek, p, tree15(), params);
  EXPECT_EQ(link.command, BehaviorCommand::link(1));
  EXPECT_EQ(link.next_phase, Phase::LinkedPeer);

  p.self_links = {1};
  const auto keep = compound_controller(Phase::LinkedPeer, p, tree15(), params);
  EXPECT_EQ(keep.command.kind, CommandKind::Go);
  EXPECT_NEAR(keep.command.direction->x, 1.0, 1e-12);
  EXPECT_EQ(keep.next_phase, Phase::LinkedPeer);
  EXPECT_EQ(compound_controller(Phase::LinkedPeer, p, tree15(), params, false).command.kind,
            CommandKind::Stop);

  EXPECT_EQ(compound_controller(Phase::LinkedGoal, p, tree15(), params).command.kind,
            CommandKind::Stop);
  p.goal->position = {0.52, 0.5};
  const auto arrive = compound_controller(Phase::Seek, p, tree15(), params);
  EXPECT_EQ(arrive.command, BehaviorCommand::link(9));
  EXPECT_EQ(arrive.next_phase, Phase::LinkedGoal);
}

TEST(Compound, LinksOnlyJoinEqualElasticity) {
  ScenarioConfig cfg;
  cfg.behavior = BehaviorKind::Compound;
  cfg.n_agents = 16;
  ExplicitInit init;
  const auto pts = random_points(16, 41, 0.2, 0.8);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    init.agents.push_back({pts[i], "aaa", i % 2 == 0 ? 1.5 : 1.0, {}, {}});
  }
  cfg.init = init;
  cfg.goal = GoalSpec{{0.5, 0.5}, "aaa", 1.0};
  cfg.max_ticks = 400;
  const auto r = run(cfg, tree15());
  check_invariants(r.state);
  for (const auto& [a, b] : r.state.links) {
    if (b == cfg.n_agents) continue;
    EXPECT_EQ(r.state.agents[a].tag.elasticity, r.state.agents[b].tag.elasticity);
  }
}

TEST(FlockReport, DivergentAgentIsReported) {
  const auto cfg = load_scenario(fixture::scenario("flock5_diverge.toml"));
  const auto tree = OntologyTree::load(cfg.ontology_path);
  const auto r = run(cfg, tree);
  ASSERT_TRUE(r.flock);
  EXPECT_FALSE(r.flock->coherent);
  EXPECT_EQ(r.flock->diverged_ids, std::vector<TagId>{4});
  EXPECT_EQ(r.flock->diameter_series.size(), r.state.trajectory.size());
}

TEST(Diameter, MatchesOracle) {
  EXPECT_EQ(diameter(std::vector<Vec2>{}), 0.0);
  const auto pts = random_points(25, 2);
  EXPECT_DOUBLE_EQ(diameter(pts), oracle::max_pairwise(pts));
}
