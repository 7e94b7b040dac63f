#include "folkswarm/network_io.hpp"

#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "folkswarm/error.hpp"

namespace folkswarm {

namespace {

nlohmann::ordered_json optional_real(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string network_report_json(const NetworkReport& report) {
  nlohmann::ordered_json j;
  j["n_nodes"] = report.n_nodes;
  j["n_edges"] = report.n_edges;
  j["n_components"] = report.n_components;
  j["largest_component"] = report.largest_component;
  j["d_min"] = report.d_min;
  j["alpha_hat"] = optional_real(report.alpha_hat);
  if (!report.fit_error.empty()) j["fit_error"] = report.fit_error;
  j["avg_path_length"] = optional_real(report.avg_path_length);
  j["cc_degree_trend"] = optional_real(report.cc_degree_trend);
  j["hubs"] = report.hubs;

  // Degrees become object keys, so keep them as sorted rows instead.
  auto& hist = j["degree_histogram"] = nlohmann::ordered_json::array();
  for (const auto& [deg, count] : report.degree_histogram) {
    hist.push_back({{"degree", deg}, {"count", count}});
  }
  auto& cc = j["cc_by_degree"] = nlohmann::ordered_json::array();
  for (const auto& [deg, mean] : report.cc_by_degree) {
    cc.push_back({{"degree", deg}, {"mean_cc", mean}});
  }
  return j.dump(2) + "\n";
}

void export_network_report(const NetworkReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot open '{}' for writing", path.string()));
  out << network_report_json(report);
  if (!out.flush()) throw Error(fmt::format("failed writing '{}'", path.string()));
}

void write_edge_list_csv(const FsnGraph& g, std::ostream& out) {
  out << "id_a,id_b\n";
  for (const auto& [a, b] : g.edges()) out << a << ',' << b << '\n';
}

void export_edge_list(const FsnGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot open '{}' for writing", path.string()));
  write_edge_list_csv(g, out);
  if (!out.flush()) throw Error(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace folkswarm
