#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "folkswarm/core_model.hpp"
#include "folkswarm/ontology.hpp"

namespace fixture {

inline folkswarm::FDTag tag(folkswarm::TagId id, const std::string& concept_id,
                            folkswarm::Vec2 position, const folkswarm::OntologyTree& tree,
                            double elasticity = folkswarm::kDefaultElasticity,
                            std::string resource = {}) {
  if (resource.empty()) resource = "urn:tag:" + std::to_string(id);
  auto ctx = folkswarm::make_formal_context("t", {"d" + std::to_string(id)}, concept_id, tree);
  auto t = folkswarm::make_fd_tag(id, std::move(ctx), 0.5, std::move(resource), elasticity, 0.0);
  t.position = position;
  return t;
}

inline std::filesystem::path scenario(const std::string& name) {
  return std::filesystem::path(FOLKSWARM_SCENARIO_DIR) / name;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("folkswarm_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixture
