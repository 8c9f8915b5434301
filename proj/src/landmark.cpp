#include "croute/landmark.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "croute/random.hpp"

namespace croute {

double sample_probability(std::size_t n, double scale) {
  if (n < 2) return 1.0;
  const double nd = static_cast<double>(n);
  return std::min(1.0, scale * std::sqrt(std::log(nd) / nd));
}

double cluster_cap(std::size_t n, double factor) {
  const double nd = static_cast<double>(std::max<std::size_t>(n, 2));
  return factor * std::sqrt(nd * std::log(nd));
}

std::size_t LandmarkAssignment::index_of(NodeId landmark) const {
  auto it = std::lower_bound(landmarks.begin(), landmarks.end(), landmark);
  if (it == landmarks.end() || *it != landmark) return landmarks.size();
  return static_cast<std::size_t>(it - landmarks.begin());
}

std::size_t ClusterMap::max_size() const {
  std::size_t best = 0;
  for (const auto& m : members) best = std::max(best, m.size());
  return best;
}

bool ClusterMap::contains(NodeId v, NodeId w) const {
  const auto& m = members[v];
  return std::binary_search(m.begin(), m.end(), PortMap::Entry{w, 0},
                            [](const PortMap::Entry& a, const PortMap::Entry& b) { return a.key < b.key; });
}

LandmarkAssignment assign_landmarks(const Graph& graph, std::vector<NodeId> landmarks) {
  const std::size_t n = graph.node_count();
  std::sort(landmarks.begin(), landmarks.end());
  landmarks.erase(std::unique(landmarks.begin(), landmarks.end()), landmarks.end());
  if (landmarks.empty()) throw BuildError("landmark-assignment", "landmark set is empty");
  for (NodeId a : landmarks) {
    if (a >= n) throw BuildError("landmark-assignment", "landmark " + std::to_string(a) + " outside graph");
  }

  LandmarkAssignment out;
  out.landmarks = std::move(landmarks);
  out.nearest.assign(n, kNoNode);
  out.nearest_dist.assign(n, kUnreachable);
  out.toward.resize(out.landmarks.size());
  out.first_hop.resize(out.landmarks.size());

  std::vector<NodeId> first(n);
  for (std::size_t i = 0; i < out.landmarks.size(); ++i) {
    const NodeId a = out.landmarks[i];
    DistanceVector dv = bfs(graph, a);
    std::vector<Port>& toward = out.toward[i];
    toward = std::move(dv.parent_port);
    toward[a] = kDeliverPort;

    std::vector<Port>& hop = out.first_hop[i];
    hop.assign(n, kNoPort);
    // Nodes in nondecreasing distance order, so parents resolve first.
    std::vector<NodeId> order;
    order.reserve(n);
    for (NodeId v = 0; v < n; ++v) {
      if (dv.dist[v] != kUnreachable) order.push_back(v);
    }
    std::stable_sort(order.begin(), order.end(), [&](NodeId x, NodeId y) { return dv.dist[x] < dv.dist[y]; });
    for (NodeId v : order) {
      if (v == a) continue;
      NodeId parent = graph.neighbor(v, toward[v]);
      first[v] = parent == a ? v : first[parent];
      hop[v] = *graph.port_to(a, first[v]);
    }

    for (NodeId v = 0; v < n; ++v) {
      // Landmarks are visited in ascending id, so strict < keeps the smaller id on ties.
      if (dv.dist[v] < out.nearest_dist[v]) {
        out.nearest_dist[v] = dv.dist[v];
        out.nearest[v] = a;
      }
    }
  }
  return out;
}

ClusterMap compute_clusters(const Graph& graph, const LandmarkAssignment& assignment) {
  const std::size_t n = graph.node_count();
  ClusterMap out;
  out.members.resize(n);
  std::vector<std::uint32_t> dist(n, kUnreachable);
  std::vector<NodeId> queue;
  for (NodeId w = 0; w < n; ++w) {
    const std::uint32_t limit = assignment.nearest_dist[w];
    if (limit == kUnreachable || limit < 2) continue;
    const std::uint32_t radius = limit - 1;
    queue.assign(1, w);
    dist[w] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      NodeId u = queue[head];
      if (dist[u] == radius) continue;
      for (NodeId v : graph.neighbors(u)) {
        if (dist[v] == kUnreachable) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
    for (NodeId v : queue) {
      if (v == w) continue;
      auto nbrs = graph.neighbors(v);
      for (Port p = 0; p < nbrs.size(); ++p) {
        if (dist[nbrs[p]] + 1 == dist[v]) {
          out.members[v].push_back({w, p});
          break;
        }
      }
    }
    for (NodeId v : queue) dist[v] = kUnreachable;
  }
  return out;
}

namespace {

std::vector<NodeId> greedy_dominating_set(const Graph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<bool> covered(n, false);
  std::size_t remaining = n;
  auto gain = [&](NodeId v) {
    std::size_t g = covered[v] ? 0 : 1;
    for (NodeId u : graph.neighbors(v)) g += covered[u] ? 0 : 1;
    return g;
  };
  // Max gain first, then smaller id.
  using Item = std::pair<std::size_t, std::int64_t>;
  std::priority_queue<Item> heap;
  for (NodeId v = 0; v < n; ++v) heap.push({gain(v), -static_cast<std::int64_t>(v)});
  std::vector<NodeId> chosen;
  while (remaining > 0 && !heap.empty()) {
    auto [g, neg] = heap.top();
    heap.pop();
    auto v = static_cast<NodeId>(-neg);
    const std::size_t fresh = gain(v);
    if (fresh != g) {
      if (fresh > 0) heap.push({fresh, neg});
      continue;
    }
    chosen.push_back(v);
    auto mark = [&](NodeId u) {
      if (!covered[u]) {
        covered[u] = true;
        --remaining;
      }
    };
    mark(v);
    for (NodeId u : graph.neighbors(v)) mark(u);
  }
  return chosen;
}

NodeId highest_degree_node(const Graph& graph) {
  NodeId best = 0;
  for (NodeId v = 1; v < graph.node_count(); ++v) {
    if (graph.degree(v) > graph.degree(best)) best = v;
  }
  return best;
}

struct Selection {
  LandmarkAssignment assignment;
  ClusterMap clusters;
};

Selection select_with_clusters(const Graph& graph, const LandmarkConfig& config, std::uint64_t seed) {
  const std::size_t n = graph.node_count();
  if (n == 0) throw BuildError("landmark-selection", "empty graph");
  if (!is_connected(graph)) throw BuildError("landmark-selection", "graph is disconnected");

  std::vector<NodeId> set;
  switch (config.mode) {
    case LandmarkMode::kExplicit:
      set = config.explicit_set;
      break;
    case LandmarkMode::kCowenDominating:
      set = greedy_dominating_set(graph);
      break;
    case LandmarkMode::kTzRandom: {
      Rng rng(seed);
      const double p = sample_probability(n, config.sample_scale);
      for (NodeId v = 0; v < n; ++v) {
        if (rng.bernoulli(p)) set.push_back(v);
      }
      if (set.empty()) set.push_back(highest_degree_node(graph));
      break;
    }
  }

  Selection s{assign_landmarks(graph, set), {}};
  s.clusters = compute_clusters(graph, s.assignment);
  if (config.mode != LandmarkMode::kTzRandom) return s;

  const double cap = cluster_cap(n, config.cluster_factor);
  for (std::size_t round = 0;; ++round) {
    std::vector<NodeId> oversized;
    for (NodeId v = 0; v < n; ++v) {
      if (static_cast<double>(s.clusters.members[v].size()) > cap) oversized.push_back(v);
    }
    if (oversized.empty()) {
      s.assignment.promotion_rounds = round;
      return s;
    }
    if (round >= config.max_promotion_rounds) {
      throw BuildError("landmark-selection", "clusters still oversized after " +
                                                 std::to_string(round) + " promotion rounds");
    }
    set = s.assignment.landmarks;
    set.insert(set.end(), oversized.begin(), oversized.end());
    s.assignment = assign_landmarks(graph, set);
    s.clusters = compute_clusters(graph, s.assignment);
  }
}

}  // namespace

LandmarkAssignment select_landmarks(const Graph& graph, const LandmarkConfig& config, std::uint64_t seed) {
  return select_with_clusters(graph, config, seed).assignment;
}

LandmarkScheme::LandmarkScheme(const Graph& graph, LandmarkAssignment assignment,
                               const ClusterMap& clusters, SchemeKind kind)
    : RoutingScheme(graph), kind_(kind), assignment_(std::move(assignment)) {
  const std::size_t n = graph.node_count();
  const std::size_t k = assignment_.landmarks.size();
  tables_.reserve(n);
  labels_.reserve(n);
  for (NodeId v = 0; v < n; ++v) {
    std::vector<PortMap::Entry> entries;
    entries.reserve(k + clusters.members[v].size());
    for (std::size_t i = 0; i < k; ++i) {
      if (assignment_.toward[i][v] == kNoPort) {
        throw BuildError("landmark-build", "node " + std::to_string(v) + " has no route to landmark " +
                                               std::to_string(assignment_.landmarks[i]));
      }
      entries.push_back({assignment_.landmarks[i], assignment_.toward[i][v]});
    }
    entries.insert(entries.end(), clusters.members[v].begin(), clusters.members[v].end());
    tables_.emplace_back(std::move(entries));

    const NodeId home = assignment_.nearest[v];
    const std::size_t idx = assignment_.index_of(home);
    TzLabel l{v, home, home == v ? kNoPort : assignment_.first_hop[idx][v]};
    labels_.push_back({kind_, l, label_bits(l, widths())});
  }
}

Step LandmarkScheme::forward_to(NodeId current, const TzLabel& dst) const {
  touch(current, kTagLandmark);
  if (current == dst.node) return Step::deliver();
  const PortMap& table = tables_[current];
  if (auto p = table.find(dst.node)) return Step::to(*p);
  if (current == dst.landmark) return Step::to(dst.landmark_port);
  if (auto p = table.find(dst.landmark)) return Step::to(*p);
  return Step::fault();
}

Step LandmarkScheme::forward(NodeId current, PacketHeader& header) const {
  return forward_to(current, std::get<TzLabel>(header.label->payload));
}

TableSize LandmarkScheme::table_size(NodeId node) const {
  const std::uint64_t entries = tables_[node].size();
  return {entries, table_bits(entries, widths(), labels_[node].bit_length)};
}

std::unique_ptr<LandmarkScheme> build_landmark_scheme(const Graph& graph, const LandmarkConfig& config,
                                                      std::uint64_t seed) {
  Selection s = select_with_clusters(graph, config, seed);
  const SchemeKind kind = config.mode == LandmarkMode::kCowenDominating ? SchemeKind::kCowen : SchemeKind::kTz;
  return std::make_unique<LandmarkScheme>(graph, std::move(s.assignment), s.clusters, kind);
}

}  // namespace croute
