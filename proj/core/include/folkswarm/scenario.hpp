#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>

#include "folkswarm/swarm_engine.hpp"

namespace folkswarm {

/// Parses a scenario file (format in docs/scenario_format.md). A relative
/// ontology path is resolved against `base_dir`; without one, ontology_path
/// stays empty. Unknown keys are rejected.
/// Throws InputError.
ScenarioConfig parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// The UniformRandom seed, if the scenario file sets one.
std::optional<std::uint64_t> scenario_seed(const ScenarioConfig& cfg);
/// Replaces the UniformRandom seed; no effect for explicit placement.
void override_seed(ScenarioConfig& cfg, std::uint64_t seed);

}  // namespace folkswarm
