#pragma once

#include <filesystem>
#include <iosfwd>

#include "folkswarm/swarm_engine.hpp"

namespace folkswarm {

/// `tick,agent_id,c_coord,e_coord,phase,command,link_target`, one row per
/// (tick, agent), reals with 9 significant digits. The initial frame's
/// command column reads "init".
void write_trajectory_csv(const SimState& state, std::ostream& out);
void export_trajectory(const SimState& state, const std::filesystem::path& path);

/// `tick,id_a,id_b` with id_a < id_b, in creation order.
void write_link_events_csv(const SimState& state, std::ostream& out);
void export_link_events(const SimState& state, const std::filesystem::path& path);

std::string flock_report_json(const FlockReport& report);
void export_flock_report(const FlockReport& report, const std::filesystem::path& path);

}  // namespace folkswarm
