#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "folkswarm/fsn_network.hpp"

namespace folkswarm {

std::string network_report_json(const NetworkReport& report);
void export_network_report(const NetworkReport& report, const std::filesystem::path& path);

/// `id_a,id_b` with id_a < id_b, sorted.
void write_edge_list_csv(const FsnGraph& g, std::ostream& out);
void export_edge_list(const FsnGraph& g, const std::filesystem::path& path);

}  // namespace folkswarm
