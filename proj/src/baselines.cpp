#include "croute/baselines.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "croute/generators.hpp"

namespace croute {

PackedArray::PackedArray(std::size_t size, std::uint32_t width)
    : size_(size), width_(std::max<std::uint32_t>(width, 1)),
      words_((size * width_ + 63) / 64, 0) {}

std::uint32_t PackedArray::get(std::size_t i) const {
  const std::size_t bit = i * width_;
  const std::size_t word = bit / 64;
  const std::size_t shift = bit % 64;
  const std::uint64_t mask = (std::uint64_t{1} << width_) - 1;
  std::uint64_t v = words_[word] >> shift;
  if (shift + width_ > 64) v |= words_[word + 1] << (64 - shift);
  return static_cast<std::uint32_t>(v & mask);
}

void PackedArray::set(std::size_t i, std::uint32_t value) {
  const std::size_t bit = i * width_;
  const std::size_t word = bit / 64;
  const std::size_t shift = bit % 64;
  const std::uint64_t mask = (std::uint64_t{1} << width_) - 1;
  const std::uint64_t v = value & mask;
  words_[word] = (words_[word] & ~(mask << shift)) | (v << shift);
  if (shift + width_ > 64) {
    const std::size_t spill = 64 - shift;
    words_[word + 1] = (words_[word + 1] & ~(mask >> spill)) | (v >> spill);
  }
}

// ---------------------------------------------------------------------------

TrivialScheme::TrivialScheme(const Graph& graph) : RoutingScheme(graph) {
  const std::size_t n = graph.node_count();
  if (!is_connected(graph)) throw BuildError("trivial", "graph is disconnected");
  const auto width = static_cast<std::uint32_t>(std::bit_width(graph.max_degree()));
  tables_.reserve(n);
  for (NodeId u = 0; u < n; ++u) tables_.emplace_back(n, width);

  std::vector<std::uint32_t> dist;
  std::vector<NodeId> queue;
  for (NodeId w = 0; w < n; ++w) {
    bfs_distances(graph, w, dist, queue);
    tables_[w].set(w, static_cast<std::uint32_t>(graph.degree(w)));
    for (NodeId u : queue) {
      if (u == w) continue;
      auto nbrs = graph.neighbors(u);
      for (Port p = 0; p < nbrs.size(); ++p) {
        if (dist[nbrs[p]] + 1 == dist[u]) {
          tables_[u].set(w, p);
          break;
        }
      }
    }
  }
  flat_.scheme = SchemeKind::kTrivial;
}

Port TrivialScheme::next_hop(NodeId node, NodeId dst) const {
  std::uint32_t v = tables_[node].get(dst);
  return v == graph().degree(node) ? kDeliverPort : v;
}

Step TrivialScheme::forward(NodeId current, PacketHeader& header) const {
  touch(current);
  Port p = next_hop(current, header.dst);
  return p == kDeliverPort ? Step::deliver() : Step::to(p);
}

TableSize TrivialScheme::table_size(NodeId) const {
  const std::uint64_t entries = graph().node_count() - 1;
  return {entries, table_bits(entries, widths(), 0)};
}

// ---------------------------------------------------------------------------

namespace {

Tree tree_of(const Graph& graph, NodeId root) {
  if (graph.node_count() == 0 || root >= graph.node_count()) {
    throw BuildError("tree", "root outside graph");
  }
  if (graph.edge_count() + 1 != graph.node_count() || !is_connected(graph)) {
    throw BuildError("tree", "input graph is not a tree (n=" + std::to_string(graph.node_count()) +
                                 ", m=" + std::to_string(graph.edge_count()) + ")");
  }
  return shortest_path_tree(graph, root);
}

}  // namespace

TreeScheme::TreeScheme(const Graph& graph, NodeId root)
    : RoutingScheme(graph), routing_(graph, tree_of(graph, root)) {
  labels_.reserve(graph.node_count());
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    const TreeLabel& l = routing_.label(v);
    labels_.push_back({SchemeKind::kTree, l, label_bits(l, widths())});
  }
}

Step TreeScheme::forward(NodeId current, PacketHeader& header) const {
  touch(current);
  const auto& dst = std::get<TreeLabel>(header.label->payload);
  return TreeRouting::forward(routing_.table(current), dst);
}

TableSize TreeScheme::table_size(NodeId node) const {
  const std::uint64_t entries = routing_.table(node).entries();
  return {entries, table_bits(entries, widths(), labels_[node].bit_length)};
}

// ---------------------------------------------------------------------------

GridCoord GridScheme::coord_of(NodeId id, std::span<const std::size_t> dims) {
  GridCoord c;
  for (std::size_t d : dims) {
    c.coord.push_back(static_cast<std::uint32_t>(id % d));
    id = static_cast<NodeId>(id / d);
  }
  return c;
}

GridScheme::GridScheme(const Graph& graph, std::vector<std::size_t> dims)
    : RoutingScheme(graph), dims_(std::move(dims)) {
  if (dims_.empty() || !(gen_grid(dims_) == graph)) {
    throw BuildError("grid", "graph does not match the declared grid dimensions");
  }
  std::uint64_t coord_bits = 0;
  for (std::size_t d : dims_) coord_bits += ceil_log2(d);

  const std::size_t n = graph.node_count();
  tables_.resize(n);
  labels_.resize(n);
  for (NodeId v = 0; v < n; ++v) {
    Table& t = tables_[v];
    t.own = coord_of(v, dims_);
    t.down.assign(dims_.size(), kNoPort);
    t.up.assign(dims_.size(), kNoPort);
    std::size_t stride = 1;
    for (std::size_t axis = 0; axis < dims_.size(); ++axis) {
      if (t.own.coord[axis] > 0) t.down[axis] = *graph.port_to(v, static_cast<NodeId>(v - stride));
      if (t.own.coord[axis] + 1 < dims_[axis]) {
        t.up[axis] = *graph.port_to(v, static_cast<NodeId>(v + stride));
      }
      stride *= dims_[axis];
    }
    labels_[v] = {SchemeKind::kGrid, t.own, coord_bits};
  }
}

Step GridScheme::forward(NodeId current, PacketHeader& header) const {
  touch(current);
  const Table& t = tables_[current];
  const auto& dst = std::get<GridCoord>(header.label->payload);
  for (std::size_t axis = 0; axis < dims_.size(); ++axis) {
    if (dst.coord[axis] < t.own.coord[axis]) return Step::to(t.down[axis]);
    if (dst.coord[axis] > t.own.coord[axis]) return Step::to(t.up[axis]);
  }
  return Step::deliver();
}

TableSize GridScheme::table_size(NodeId node) const {
  const Table& t = tables_[node];
  std::uint64_t entries = 1;
  for (std::size_t axis = 0; axis < dims_.size(); ++axis) {
    entries += (t.down[axis] != kNoPort) + (t.up[axis] != kNoPort);
  }
  return {entries, table_bits(entries, widths(), labels_[node].bit_length)};
}

// ---------------------------------------------------------------------------

namespace {

using UnitGraph = std::vector<std::vector<std::uint32_t>>;  // sorted adjacency

// Greedy BFS-ball partition of a unit graph. Seeds go by (degree desc, id
// asc); a ball stops at `target` units or when it runs out of unclaimed
// neighbors. Stranded singletons then join their smallest adjacent cluster,
// so with two or more units every cluster holds at least two.
std::vector<std::uint32_t> partition_units(const UnitGraph& units, std::size_t target,
                                           std::size_t& cluster_count) {
  const std::size_t count = units.size();
  constexpr std::uint32_t kFree = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return units[a].size() > units[b].size();
  });

  std::vector<std::uint32_t> cluster(count, kFree);
  std::vector<std::size_t> size;
  std::vector<std::uint32_t> queue;
  for (std::uint32_t seed : order) {
    if (cluster[seed] != kFree) continue;
    const auto id = static_cast<std::uint32_t>(size.size());
    size.push_back(1);
    cluster[seed] = id;
    queue.assign(1, seed);
    for (std::size_t head = 0; head < queue.size() && size[id] < target; ++head) {
      for (std::uint32_t v : units[queue[head]]) {
        if (cluster[v] != kFree) continue;
        cluster[v] = id;
        queue.push_back(v);
        if (++size[id] >= target) break;
      }
    }
  }

  if (count > 1) {
    // Group units per cluster to find singletons in creation order.
    std::vector<std::uint32_t> single_unit(size.size(), kFree);
    for (std::uint32_t u = 0; u < count; ++u) {
      if (size[cluster[u]] == 1) single_unit[cluster[u]] = u;
    }
    std::vector<std::uint32_t> redirect(size.size());
    std::iota(redirect.begin(), redirect.end(), 0);
    for (std::uint32_t c = 0; c < size.size(); ++c) {
      if (single_unit[c] == kFree) continue;
      const std::uint32_t u = single_unit[c];
      std::uint32_t best = kFree;
      for (std::uint32_t v : units[u]) {
        const std::uint32_t other = redirect[cluster[v]];
        if (other == c) continue;
        if (best == kFree || size[other] < size[best] || (size[other] == size[best] && other < best)) {
          best = other;
        }
      }
      if (best == kFree) continue;  // isolated unit; only happens on disconnected input
      redirect[c] = best;
      ++size[best];
      size[c] = 0;
    }
    std::vector<std::uint32_t> dense(size.size(), kFree);
    std::uint32_t next = 0;
    for (std::uint32_t c = 0; c < size.size(); ++c) {
      if (redirect[c] == c) dense[c] = next++;
    }
    for (std::uint32_t u = 0; u < count; ++u) cluster[u] = dense[redirect[cluster[u]]];
    cluster_count = next;
  } else {
    cluster_count = size.size();
  }
  return cluster;
}

UnitGraph quotient(const UnitGraph& units, const std::vector<std::uint32_t>& cluster,
                   std::size_t cluster_count) {
  UnitGraph out(cluster_count);
  for (std::uint32_t u = 0; u < units.size(); ++u) {
    for (std::uint32_t v : units[u]) {
      if (cluster[u] != cluster[v]) out[cluster[u]].push_back(cluster[v]);
    }
  }
  for (auto& adj : out) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  return out;
}

}  // namespace

HierScheme::HierScheme(const Graph& graph, std::size_t cluster_target) : RoutingScheme(graph) {
  if (cluster_target < 2) throw BuildError("hier", "cluster_target must be >= 2");
  if (!is_connected(graph)) throw BuildError("hier", "graph is disconnected");
  const std::size_t n = graph.node_count();

  UnitGraph units(n);
  for (NodeId v = 0; v < n; ++v) units[v].assign(graph.neighbors(v).begin(), graph.neighbors(v).end());
  std::vector<std::uint32_t> unit_of(n);
  std::iota(unit_of.begin(), unit_of.end(), 0);

  for (;;) {
    std::size_t count = 0;
    auto cluster = partition_units(units, cluster_target, count);
    std::vector<std::uint32_t> level(n);
    for (NodeId v = 0; v < n; ++v) {
      unit_of[v] = cluster[unit_of[v]];
      level[v] = unit_of[v];
    }
    cluster_of_.push_back(std::move(level));
    cluster_count_.push_back(count);
    if (count <= 1) break;
    units = quotient(units, cluster, count);
  }

  const std::size_t levels = cluster_of_.size();
  std::vector<std::vector<std::vector<PortMap::Entry>>> raw(n, std::vector<std::vector<PortMap::Entry>>(levels));

  // Members of each cluster per level.
  std::vector<std::uint32_t> dist(n, kUnreachable);
  std::vector<NodeId> queue;
  auto restricted_bfs = [&](std::size_t lvl, std::uint32_t zone, std::span<const NodeId> sources) {
    for (NodeId v : queue) dist[v] = kUnreachable;
    queue.clear();
    for (NodeId s : sources) {
      dist[s] = 0;
      queue.push_back(s);
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      NodeId u = queue[head];
      for (NodeId v : graph.neighbors(u)) {
        if (dist[v] == kUnreachable && cluster_of_[lvl][v] == zone) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
  };
  auto port_down = [&](NodeId u, std::size_t lvl, std::uint32_t zone) {
    auto nbrs = graph.neighbors(u);
    for (Port p = 0; p < nbrs.size(); ++p) {
      NodeId x = nbrs[p];
      if (cluster_of_[lvl][x] == zone && dist[x] + 1 == dist[u]) return p;
    }
    return kNoPort;
  };

  for (std::size_t lvl = 0; lvl < levels; ++lvl) {
    std::vector<std::vector<NodeId>> members(cluster_count_[lvl]);
    for (NodeId v = 0; v < n; ++v) members[cluster_of_[lvl][v]].push_back(v);
    for (std::uint32_t zone = 0; zone < members.size(); ++zone) {
      const auto& zone_nodes = members[zone];
      if (lvl == 0) {
        for (NodeId w : zone_nodes) {
          restricted_bfs(0, zone, std::span<const NodeId>(&w, 1));
          for (NodeId u : zone_nodes) {
            if (u != w) raw[u][0].push_back({w, port_down(u, 0, zone)});
          }
        }
        continue;
      }
      std::vector<std::vector<NodeId>> children;
      std::vector<std::uint32_t> child_ids;
      for (NodeId v : zone_nodes) {
        const std::uint32_t child = cluster_of_[lvl - 1][v];
        auto it = std::find(child_ids.begin(), child_ids.end(), child);
        if (it == child_ids.end()) {
          child_ids.push_back(child);
          children.push_back({v});
        } else {
          children[it - child_ids.begin()].push_back(v);
        }
      }
      for (std::size_t c = 0; c < children.size(); ++c) {
        restricted_bfs(lvl, zone, children[c]);
        for (NodeId u : zone_nodes) {
          if (cluster_of_[lvl - 1][u] != child_ids[c]) {
            raw[u][lvl].push_back({child_ids[c], port_down(u, lvl, zone)});
          }
        }
      }
    }
  }

  tables_.resize(n);
  labels_.resize(n);
  std::uint64_t address_bits = 0;
  for (std::size_t lvl = 0; lvl < levels; ++lvl) address_bits += ceil_log2(cluster_count_[lvl]);
  for (NodeId v = 0; v < n; ++v) {
    tables_[v].reserve(levels);
    HierAddress addr;
    for (std::size_t lvl = 0; lvl < levels; ++lvl) {
      tables_[v].emplace_back(std::move(raw[v][lvl]));
      addr.clusters.push_back(cluster_of_[lvl][v]);
    }
    labels_[v] = {SchemeKind::kHier, std::move(addr), address_bits};
  }
}

Step HierScheme::forward(NodeId current, PacketHeader& header) const {
  touch(current);
  if (current == header.dst) return Step::deliver();
  const auto& dst = std::get<HierAddress>(header.label->payload).clusters;
  const auto& own = std::get<HierAddress>(labels_[current].payload).clusters;
  std::size_t lvl = 0;
  while (lvl < own.size() && own[lvl] != dst[lvl]) ++lvl;
  if (lvl == own.size()) return Step::fault();
  auto port = lvl == 0 ? tables_[current][0].find(header.dst) : tables_[current][lvl].find(dst[lvl - 1]);
  return port ? Step::to(*port) : Step::fault();
}

TableSize HierScheme::table_size(NodeId node) const {
  std::uint64_t entries = 0;
  for (const PortMap& m : tables_[node]) entries += m.size();
  return {entries, table_bits(entries, widths(), labels_[node].bit_length)};
}

}  // namespace croute
