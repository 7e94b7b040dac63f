#include "folkswarm/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "folkswarm/error.hpp"
#include "folkswarm/kv_config.hpp"

namespace folkswarm {

namespace {

void reject_unknown(const kv::Table& t, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : t.values()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == key;
    if (!ok) {
      throw InputError(fmt::format("scenario: unknown key '{}' in [{}]", key,
                                   t.name.empty() ? "top level" : t.name));
    }
  }
}

Vec2 read_point(const kv::Table& t, std::string_view key) {
  const kv::Value* v = t.find(key);
  if (!v) throw InputError(fmt::format("scenario: [{}] requires '{}'", t.name, key));
  const std::string what = fmt::format("{}.{}", t.name, key);
  const auto& arr = v->as_array(what);
  if (arr.size() != 2) throw InputError(fmt::format("scenario: '{}' must be [x, y]", what));
  return {arr[0].as_real(what), arr[1].as_real(what)};
}

std::uint64_t non_negative(std::int64_t v, std::string_view what) {
  if (v < 0) throw InputError(fmt::format("scenario: '{}' must be >= 0", what));
  return static_cast<std::uint64_t>(v);
}

void read_params(const kv::Table& t, BehaviorParams& p) {
  reject_unknown(t, {"r_p", "r_s", "step", "t_forward", "eps_elastic", "k_agg", "d_agg",
                     "level_simile"});
  if (auto v = t.real("r_p")) p.r_p = *v;
  if (auto v = t.real("r_s")) p.r_s = *v;
  if (auto v = t.real("step")) p.step = *v;
  if (auto v = t.integer("t_forward")) {
    p.t_forward = static_cast<std::uint32_t>(non_negative(*v, "params.t_forward"));
  }
  if (auto v = t.real("eps_elastic")) p.eps_elastic = *v;
  if (auto v = t.real("k_agg")) p.k_agg = *v;
  if (auto v = t.real("d_agg")) p.d_agg = *v;
  if (auto v = t.integer("level_simile")) {
    p.level_simile = static_cast<std::size_t>(non_negative(*v, "params.level_simile"));
  }
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  const kv::Document doc = kv::parse(text);
  for (const auto& [name, table] : doc.tables) {
    if (name != "" && name != "scenario" && name != "params" && name != "init" && name != "goal") {
      throw InputError(fmt::format("scenario: unknown table [{}]", name));
    }
  }
  for (const auto& [name, tables] : doc.arrays) {
    if (name != "agent" && name != "link") {
      throw InputError(fmt::format("scenario: unknown table array [[{}]]", name));
    }
  }
  if (!doc.table("")->values().empty()) {
    throw InputError("scenario: keys must live under a [table] header");
  }

  ScenarioConfig cfg;
  const kv::Table* sc = doc.table("scenario");
  if (!sc) throw InputError("scenario: missing [scenario] table");
  reject_unknown(*sc, {"behavior", "n_agents", "max_ticks", "dt_seconds", "ontology",
                       "seek_forever", "quiescence_window", "workers"});
  const auto behavior = sc->string("behavior");
  if (!behavior) throw InputError("scenario: [scenario] requires 'behavior'");
  cfg.behavior = parse_behavior_kind(*behavior);
  if (const auto ontology = sc->string("ontology")) {
    cfg.ontology_path = std::filesystem::path(*ontology);
    if (cfg.ontology_path.is_relative() && !base_dir.empty()) {
      cfg.ontology_path = base_dir / cfg.ontology_path;
    }
  }
  if (auto v = sc->integer("max_ticks")) cfg.max_ticks = non_negative(*v, "scenario.max_ticks");
  if (auto v = sc->real("dt_seconds")) cfg.dt_seconds = *v;
  if (auto v = sc->boolean("seek_forever")) cfg.seek_forever = *v;
  if (auto v = sc->integer("quiescence_window")) {
    cfg.quiescence_window =
        static_cast<std::uint32_t>(non_negative(*v, "scenario.quiescence_window"));
  }
  if (auto v = sc->integer("workers")) {
    cfg.workers = static_cast<unsigned>(non_negative(*v, "scenario.workers"));
  }

  if (const kv::Table* params = doc.table("params")) read_params(*params, cfg.params);

  const kv::Table* init = doc.table("init");
  const std::string mode = init ? init->string("mode").value_or("uniform_random") : "uniform_random";
  const auto* agents = doc.array("agent");
  if (mode == "uniform_random") {
    UniformRandomInit u;
    if (init) {
      reject_unknown(*init, {"mode", "seed", "concept", "elasticity"});
      if (auto v = init->integer("seed")) {
        u.seed = non_negative(*v, "init.seed");
        u.seed_given = true;
      }
      if (auto v = init->string("concept")) u.concept_id = *v;
      if (auto v = init->real("elasticity")) u.elasticity = *v;
    }
    if (agents) throw InputError("scenario: [[agent]] entries need init.mode = \"explicit\"");
    const auto n = sc->integer("n_agents");
    if (!n) throw InputError("scenario: uniform_random placement requires scenario.n_agents");
    cfg.n_agents = non_negative(*n, "scenario.n_agents");
    cfg.init = u;
  } else if (mode == "explicit") {
    reject_unknown(*init, {"mode"});
    ExplicitInit ex;
    if (agents) {
      for (const kv::Table& a : *agents) {
        reject_unknown(a, {"position", "concept", "elasticity", "resource", "phase"});
        AgentSpec spec;
        spec.position = read_point(a, "position");
        if (auto v = a.string("concept")) spec.concept_id = *v;
        if (auto v = a.real("elasticity")) spec.elasticity = *v;
        if (auto v = a.string("resource")) spec.resource = *v;
        if (auto v = a.string("phase")) spec.phase = parse_phase(*v);
        ex.agents.push_back(std::move(spec));
      }
    }
    cfg.n_agents = ex.agents.size();
    if (auto n = sc->integer("n_agents")) {
      if (non_negative(*n, "scenario.n_agents") != cfg.n_agents) {
        throw InputError(fmt::format("scenario: n_agents = {} but {} [[agent]] entries", *n,
                                     cfg.n_agents));
      }
    }
    cfg.init = std::move(ex);
  } else {
    throw InputError(fmt::format("scenario: unknown init.mode '{}'", mode));
  }

  if (const kv::Table* g = doc.table("goal")) {
    reject_unknown(*g, {"position", "concept", "elasticity"});
    GoalSpec goal;
    goal.position = read_point(*g, "position");
    if (auto v = g->string("concept")) goal.concept_id = *v;
    if (auto v = g->real("elasticity")) goal.elasticity = *v;
    cfg.goal = goal;
  }

  if (const auto* links = doc.array("link")) {
    for (const kv::Table& l : *links) {
      reject_unknown(l, {"ids"});
      const kv::Value* ids = l.find("ids");
      if (!ids) throw InputError(fmt::format("scenario: [{}] requires 'ids'", l.name));
      const auto& arr = ids->as_array(l.name + ".ids");
      if (arr.size() != 2) throw InputError(fmt::format("scenario: '{}.ids' must be [a, b]", l.name));
      cfg.initial_links.emplace_back(
          static_cast<TagId>(non_negative(arr[0].as_int(l.name + ".ids"), l.name + ".ids")),
          static_cast<TagId>(non_negative(arr[1].as_int(l.name + ".ids"), l.name + ".ids")));
    }
  }

  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("scenario: cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.parent_path());
}

std::optional<std::uint64_t> scenario_seed(const ScenarioConfig& cfg) {
  if (const auto* u = std::get_if<UniformRandomInit>(&cfg.init); u && u->seed_given) return u->seed;
  return std::nullopt;
}

void override_seed(ScenarioConfig& cfg, std::uint64_t seed) {
  if (auto* u = std::get_if<UniformRandomInit>(&cfg.init)) {
    u->seed = seed;
    u->seed_given = true;
  }
}

}  // namespace folkswarm
