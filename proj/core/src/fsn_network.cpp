#include "folkswarm/fsn_network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <numeric>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "folkswarm/random.hpp"

namespace folkswarm {

// ---------------------------------------------------------------------------
// FsnGraph

FsnGraph::Builder::Builder(std::vector<TagId> nodes) : nodes_(std::move(nodes)) {
  index_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i], static_cast<Index>(i)).second) {
      throw InputError(fmt::format("fsn: duplicate node id {}", nodes_[i]));
    }
  }
  adjacency_.resize(nodes_.size());
}

std::optional<FsnGraph::Index> FsnGraph::Builder::find(TagId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

FsnGraph::Builder& FsnGraph::Builder::add_edge(TagId a, TagId b) {
  const auto ia = find(a);
  const auto ib = find(b);
  if (!ia || !ib) throw InputError(fmt::format("fsn: edge ({}, {}) references an unknown node", a, b));
  return add_edge_by_index(*ia, *ib);
}

FsnGraph::Builder& FsnGraph::Builder::add_edge_by_index(Index a, Index b) {
  if (a == b) throw InputError(fmt::format("fsn: self-loop on node {}", nodes_.at(a)));
  if (a >= nodes_.size() || b >= nodes_.size()) throw InputError("fsn: node index out of range");
  adjacency_[a].push_back(b);
  adjacency_[b].push_back(a);
  groups_.push_back({std::min(a, b), std::max(a, b)});
  return *this;
}

FsnGraph::Builder& FsnGraph::Builder::add_group(std::vector<Index> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.size() < 2) return *this;
  if (members.back() >= nodes_.size()) throw InputError("fsn: node index out of range");
  for (std::size_t i = 0; i < members.size(); ++i) {
    auto& adj = adjacency_[members[i]];
    adj.reserve(adj.size() + members.size() - 1);
    for (std::size_t j = 0; j < members.size(); ++j) {
      if (i != j) adj.push_back(members[j]);
    }
  }
  groups_.push_back(std::move(members));
  return *this;
}

FsnGraph FsnGraph::Builder::build() && {
  FsnGraph g;
  g.nodes_ = std::move(nodes_);
  g.index_ = std::move(index_);
  g.adjacency_ = std::move(adjacency_);
  std::size_t degree_sum = 0;
  for (auto& adj : g.adjacency_) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    adj.shrink_to_fit();
    degree_sum += adj.size();
  }
  g.edge_count_ = degree_sum / 2;

  std::sort(groups_.begin(), groups_.end());
  groups_.erase(std::unique(groups_.begin(), groups_.end()), groups_.end());
  g.groups_ = std::move(groups_);
  g.node_groups_.resize(g.nodes_.size());
  for (std::size_t k = 0; k < g.groups_.size(); ++k) {
    for (Index m : g.groups_[k]) g.node_groups_[m].push_back(static_cast<std::uint32_t>(k));
  }
  return g;
}

std::optional<FsnGraph::Index> FsnGraph::find(TagId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

FsnGraph::Index FsnGraph::index_of(TagId id) const {
  if (auto i = find(id)) return *i;
  throw InputError(fmt::format("fsn: unknown node {}", id));
}

bool FsnGraph::has_edge(TagId a, TagId b) const {
  const auto ia = find(a);
  const auto ib = find(b);
  if (!ia || !ib) return false;
  const auto& adj = adjacency_[*ia];
  return std::binary_search(adj.begin(), adj.end(), *ib);
}

std::vector<std::pair<TagId, TagId>> FsnGraph::edges() const {
  std::vector<std::pair<TagId, TagId>> out;
  out.reserve(edge_count_);
  for (Index u = 0; u < nodes_.size(); ++u) {
    for (Index v : adjacency_[u]) {
      if (u < v) out.emplace_back(std::min(nodes_[u], nodes_[v]), std::max(nodes_[u], nodes_[v]));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Acquaintance

AcquaintanceIndex::AcquaintanceIndex(std::span<const FDTag> tags, const OntologyTree& tree,
                                     std::size_t k_edge)
    : tree_(&tree), k_edge_(k_edge) {
  if (k_edge < 1 || k_edge > tree.depth()) {
    throw InputError(fmt::format("fsn: k_edge {} outside [1, {}]", k_edge, tree.depth()));
  }
  std::set<TagId> seen;
  for (const FDTag& t : tags) {
    if (!seen.insert(t.id).second) throw InputError(fmt::format("fsn: duplicate tag id {}", t.id));
    const auto concept_index = tree.index_of(t.context.concept_id);
    if (auto anc = tree.ancestor_at_depth(concept_index, k_edge)) by_concept_[*anc].push_back(t.id);
    by_resource_[t.resource].push_back(t.id);
  }
  for (auto& [k, v] : by_concept_) std::sort(v.begin(), v.end());
  for (auto& [k, v] : by_resource_) std::sort(v.begin(), v.end());
}

std::vector<TagId> AcquaintanceIndex::match(const FDTag& probe) const {
  std::vector<TagId> out;
  const auto concept_index = tree_->index_of(probe.context.concept_id);
  if (auto anc = tree_->ancestor_at_depth(concept_index, k_edge_)) {
    if (const auto it = by_concept_.find(*anc); it != by_concept_.end()) {
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
  }
  if (const auto it = by_resource_.find(probe.resource); it != by_resource_.end()) {
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (const auto self = std::lower_bound(out.begin(), out.end(), probe.id);
      self != out.end() && *self == probe.id) {
    out.erase(self);
  }
  return out;
}

FsnGraph build_fsn(std::span<const FDTag> tags, const OntologyTree& tree, std::size_t k_edge) {
  const AcquaintanceIndex index(tags, tree, k_edge);
  std::vector<TagId> ids;
  ids.reserve(tags.size());
  for (const FDTag& t : tags) ids.push_back(t.id);
  FsnGraph::Builder builder(std::move(ids));

  const auto add_buckets = [&](const auto& buckets) {
    // Iterate in a fixed order so group numbering does not depend on hashing.
    std::vector<const std::vector<TagId>*> ordered;
    for (const auto& [key, members] : buckets) {
      if (members.size() >= 2) ordered.push_back(&members);
    }
    std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) { return *a < *b; });
    for (const auto* members : ordered) {
      std::vector<FsnGraph::Index> group;
      group.reserve(members->size());
      for (TagId id : *members) group.push_back(*builder.find(id));
      builder.add_group(std::move(group));
    }
  };
  add_buckets(index.concept_buckets());
  add_buckets(index.resource_buckets());
  return std::move(builder).build();
}

// ---------------------------------------------------------------------------
// Metrics

std::vector<double> local_clustering(const FsnGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> cc(n, 0.0);
  std::vector<std::uint32_t> mark(n, UINT32_MAX);
  for (FsnGraph::Index u = 0; u < n; ++u) {
    const auto nu = g.neighbors(u);
    const std::size_t deg = nu.size();
    if (deg < 2) continue;
    for (auto v : nu) mark[v] = u;
    std::uint64_t links = 0;
    for (auto v : nu) {
      const auto nv = g.neighbors(v);
      for (auto it = std::upper_bound(nv.begin(), nv.end(), v); it != nv.end(); ++it) {
        if (mark[*it] == u) ++links;
      }
    }
    cc[u] = 2.0 * static_cast<double>(links) / (static_cast<double>(deg) * (deg - 1));
  }
  return cc;
}

double clustering_coefficient(const FsnGraph& g, TagId node) {
  const auto u = g.index_of(node);
  const auto nu = g.neighbors(u);
  const std::size_t deg = nu.size();
  if (deg < 2) return 0.0;
  std::uint64_t links = 0;
  for (std::size_t i = 0; i < deg; ++i) {
    const auto nv = g.neighbors(nu[i]);
    for (std::size_t j = i + 1; j < deg; ++j) {
      if (std::binary_search(nv.begin(), nv.end(), nu[j])) ++links;
    }
  }
  return 2.0 * static_cast<double>(links) / (static_cast<double>(deg) * (deg - 1));
}

double fit_power_law(std::span<const std::size_t> degrees, std::size_t d_min) {
  if (d_min < 1) throw PowerLawFitError("power-law fit: d_min must be >= 1");
  std::size_t n = 0;
  double log_sum = 0.0;
  bool varied = false;
  std::optional<std::size_t> first;
  const double shift = static_cast<double>(d_min) - 0.5;
  for (std::size_t d : degrees) {
    if (d < d_min) continue;
    ++n;
    log_sum += std::log(static_cast<double>(d) / shift);
    if (!first) first = d;
    varied = varied || d != *first;
  }
  if (n < 10) {
    throw PowerLawFitError(fmt::format("power-law fit: too few samples ({} >= d_min, need 10)", n));
  }
  if (!varied) throw PowerLawFitError("power-law fit: degenerate sample");
  return 1.0 + static_cast<double>(n) / log_sum;
}

std::map<std::size_t, double> cc_vs_degree(const FsnGraph& g) {
  const auto cc = local_clustering(g);
  std::map<std::size_t, std::pair<double, std::size_t>> acc;
  for (FsnGraph::Index u = 0; u < g.node_count(); ++u) {
    auto& [sum, count] = acc[g.degree(u)];
    sum += cc[u];
    ++count;
  }
  std::map<std::size_t, double> out;
  for (const auto& [deg, sc] : acc) out.emplace(deg, sc.first / static_cast<double>(sc.second));
  return out;
}

std::vector<TagId> find_hubs(const FsnGraph& g, double percentile) {
  if (!(percentile > 0.0 && percentile < 100.0)) {
    throw InputError(fmt::format("hubs: percentile {} outside (0, 100)", percentile));
  }
  const std::size_t n = g.node_count();
  if (n == 0) return {};
  std::vector<std::size_t> sorted(n);
  for (FsnGraph::Index u = 0; u < n; ++u) sorted[u] = g.degree(u);
  std::sort(sorted.begin(), sorted.end());
  const auto rank = static_cast<std::size_t>(std::ceil(percentile / 100.0 * static_cast<double>(n)));
  const std::size_t threshold = sorted[std::clamp<std::size_t>(rank, 1, n) - 1];

  std::vector<FsnGraph::Index> hubs;
  for (FsnGraph::Index u = 0; u < n; ++u) {
    if (g.degree(u) >= threshold) hubs.push_back(u);
  }
  std::sort(hubs.begin(), hubs.end(), [&](auto a, auto b) {
    if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
    return g.id_at(a) < g.id_at(b);
  });
  std::vector<TagId> out;
  out.reserve(hubs.size());
  for (auto u : hubs) out.push_back(g.id_at(u));
  return out;
}

std::vector<std::uint32_t> connected_components(const FsnGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> label(n, UINT32_MAX);
  std::uint32_t next = 0;
  std::vector<FsnGraph::Index> stack;
  for (FsnGraph::Index s = 0; s < n; ++s) {
    if (label[s] != UINT32_MAX) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (auto v : g.neighbors(u)) {
        if (label[v] == UINT32_MAX) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

namespace {

/// Sum of BFS distances from `source` to every reachable node, walking
/// acquaintance groups: one group expansion reaches all its members at once.
struct GroupBfs {
  explicit GroupBfs(const FsnGraph& g)
      : graph(g), dist(g.node_count(), 0), node_stamp(g.node_count(), 0),
        group_stamp(g.groups().size(), 0) {}

  std::uint64_t distance_sum(FsnGraph::Index source) {
    ++stamp;
    std::uint64_t sum = 0;
    frontier.clear();
    frontier.push_back(source);
    node_stamp[source] = stamp;
    dist[source] = 0;
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      const auto u = frontier[head];
      const std::uint32_t du = dist[u];
      for (const auto gi : graph.groups_of(u)) {
        if (group_stamp[gi] == stamp) continue;
        group_stamp[gi] = stamp;
        for (const auto v : graph.groups()[gi]) {
          if (node_stamp[v] == stamp) continue;
          node_stamp[v] = stamp;
          dist[v] = du + 1;
          sum += du + 1;
          frontier.push_back(v);
        }
      }
    }
    return sum;
  }

  const FsnGraph& graph;
  std::vector<std::uint32_t> dist;
  std::vector<std::uint32_t> node_stamp;
  std::vector<std::uint32_t> group_stamp;
  std::vector<FsnGraph::Index> frontier;
  std::uint32_t stamp = 0;
};

std::vector<FsnGraph::Index> largest_component(const FsnGraph& g) {
  const auto label = connected_components(g);
  if (label.empty()) return {};
  const std::uint32_t count = *std::max_element(label.begin(), label.end()) + 1;
  std::vector<std::size_t> sizes(count, 0);
  for (auto l : label) ++sizes[l];
  const auto best = static_cast<std::uint32_t>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<FsnGraph::Index> members;
  for (FsnGraph::Index u = 0; u < label.size(); ++u) {
    if (label[u] == best) members.push_back(u);
  }
  return members;
}

}  // namespace

double avg_path_length(const FsnGraph& g, unsigned workers) {
  const auto members = largest_component(g);
  if (members.size() < 2) {
    throw Error("average path length: largest component has fewer than two nodes");
  }
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(members.size())));
  std::vector<std::uint64_t> partial(workers, 0);
  std::vector<std::exception_ptr> errors(workers);
  const auto work = [&](unsigned w) {
    try {
      GroupBfs bfs(g);
      for (std::size_t k = w; k < members.size(); k += workers) {
        partial[w] += bfs.distance_sum(members[k]);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  const std::uint64_t total = std::accumulate(partial.begin(), partial.end(), std::uint64_t{0});
  const double k = static_cast<double>(members.size());
  return static_cast<double>(total) / (k * (k - 1.0));
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  return rank;
}

}  // namespace

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("spearman: length mismatch");
  if (x.size() < 2) return std::nullopt;
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

FsnGraph preferential_attachment_graph(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || n < m + 1) {
    throw InputError(fmt::format("preferential attachment: need m >= 1 and n >= m + 1 (n={}, m={})",
                                 n, m));
  }
  std::vector<TagId> ids(n);
  std::iota(ids.begin(), ids.end(), TagId{0});
  FsnGraph::Builder builder(std::move(ids));
  Rng rng(seed);
  std::vector<FsnGraph::Index> endpoints;
  endpoints.reserve(2 * n * m);
  for (FsnGraph::Index a = 0; a <= m; ++a) {
    for (FsnGraph::Index b = a + 1; b <= m; ++b) {
      builder.add_edge_by_index(a, b);
      endpoints.push_back(a);
      endpoints.push_back(b);
    }
  }
  std::vector<FsnGraph::Index> targets;
  for (auto v = static_cast<FsnGraph::Index>(m + 1); v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      const auto t = endpoints[rng.uniform_index(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (auto t : targets) {
      builder.add_edge_by_index(v, t);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return std::move(builder).build();
}

NetworkReport analyze_network(const FsnGraph& g, const NetworkOptions& options) {
  NetworkReport r;
  r.n_nodes = g.node_count();
  r.n_edges = g.edge_count();
  r.d_min = options.d_min;

  std::vector<std::size_t> degrees(g.node_count());
  for (FsnGraph::Index u = 0; u < g.node_count(); ++u) {
    degrees[u] = g.degree(u);
    ++r.degree_histogram[degrees[u]];
  }
  try {
    r.alpha_hat = fit_power_law(degrees, options.d_min);
  } catch (const PowerLawFitError& e) {
    r.fit_error = e.what();
  }

  const auto cc = local_clustering(g);
  std::map<std::size_t, std::pair<double, std::size_t>> acc;
  for (FsnGraph::Index u = 0; u < g.node_count(); ++u) {
    auto& [sum, count] = acc[degrees[u]];
    sum += cc[u];
    ++count;
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [deg, sc] : acc) {
    const double mean = sc.first / static_cast<double>(sc.second);
    r.cc_by_degree.emplace(deg, mean);
    xs.push_back(static_cast<double>(deg));
    ys.push_back(mean);
  }
  r.cc_degree_trend = spearman(xs, ys);

  if (g.node_count() > 0) r.hubs = find_hubs(g, options.hub_percentile);

  const auto label = connected_components(g);
  if (!label.empty()) {
    r.n_components = *std::max_element(label.begin(), label.end()) + 1;
    std::vector<std::size_t> sizes(r.n_components, 0);
    for (auto l : label) ++sizes[l];
    r.largest_component = *std::max_element(sizes.begin(), sizes.end());
  }
  if (r.largest_component >= 2) r.avg_path_length = avg_path_length(g, options.workers);
  return r;
}

}  // namespace folkswarm
