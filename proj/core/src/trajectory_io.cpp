#include "folkswarm/trajectory_io.hpp"

#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "folkswarm/csv.hpp"
#include "folkswarm/error.hpp"

namespace folkswarm {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot open '{}' for writing", path.string()));
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace

void write_trajectory_csv(const SimState& state, std::ostream& out) {
  out << "tick,agent_id,c_coord,e_coord,phase,command,link_target\n";
  for (const Frame& f : state.trajectory) {
    for (std::size_t i = 0; i < f.agents.size(); ++i) {
      const AgentFrame& a = f.agents[i];
      out << f.tick << ',' << i << ',' << csv::format_real(a.position.x) << ','
          << csv::format_real(a.position.y) << ',' << to_string(a.phase) << ','
          << (a.command ? to_string(*a.command) : std::string_view("init")) << ',';
      if (a.link_target) out << *a.link_target;
      out << '\n';
    }
  }
}

void export_trajectory(const SimState& state, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_trajectory_csv(state, out);
  finish(out, path);
}

void write_link_events_csv(const SimState& state, std::ostream& out) {
  out << "tick,id_a,id_b\n";
  for (const LinkEvent& e : state.link_events) out << e.tick << ',' << e.a << ',' << e.b << '\n';
}

void export_link_events(const SimState& state, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_link_events_csv(state, out);
  finish(out, path);
}

std::string flock_report_json(const FlockReport& report) {
  nlohmann::ordered_json j;
  j["coherent"] = report.coherent;
  j["diverged_ids"] = report.diverged_ids;
  j["reference_group"] = report.reference_group;
  j["diameter_series"] = report.diameter_series;
  return j.dump(2) + "\n";
}

void export_flock_report(const FlockReport& report, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << flock_report_json(report);
  finish(out, path);
}

}  // namespace folkswarm
