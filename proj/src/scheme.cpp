#include "croute/scheme.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace croute {

std::uint32_t ceil_log2(std::uint64_t x) {
  if (x <= 1) return 0;
  return static_cast<std::uint32_t>(std::bit_width(x - 1));
}

BitWidths BitWidths::of(const Graph& graph) {
  return {ceil_log2(graph.node_count()), ceil_log2(graph.max_degree())};
}

std::uint64_t label_bits(const TreeLabel& label, BitWidths w) {
  return 3ULL * w.id + label.light.size() * (3ULL * w.id + w.port);
}

std::uint64_t label_bits(const TzLabel&, BitWidths w) { return w.id + w.port; }

std::uint64_t label_bits(const CoverLabel& label, BitWidths w) {
  std::uint64_t bits = 0;
  for (const TreeLabel& t : label.trees) bits += label_bits(t, w);
  return bits;
}

std::uint64_t table_bits(std::uint64_t entries, BitWidths w, std::uint64_t label_bits,
                         std::uint64_t aux_bits) {
  return entries * w.entry() + label_bits + aux_bits;
}

PortMap::PortMap(std::vector<Entry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.key < b.key; });
}

std::optional<Port> PortMap::find(std::uint32_t key) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const Entry& e, std::uint32_t k) { return e.key < k; });
  if (it == entries_.end() || it->key != key) return std::nullopt;
  return it->port;
}

std::string_view scheme_name(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kTrivial: return "trivial";
    case SchemeKind::kTree: return "tree";
    case SchemeKind::kGrid: return "grid";
    case SchemeKind::kHier: return "hier";
    case SchemeKind::kTz: return "tz";
    case SchemeKind::kCowen: return "cowen";
    case SchemeKind::kBc: return "bc";
    case SchemeKind::kHybrid: return "hybrid";
    case SchemeKind::kNameIndependent: return "ni";
  }
  return "unknown";
}

RoutingScheme::RoutingScheme(const Graph& graph)
    : graph_(&graph), widths_(BitWidths::of(graph)) {
  const double avg = estimate_average_distance(graph);
  hop_budget_ = std::max<std::uint32_t>(64, 8 * static_cast<std::uint32_t>(std::ceil(avg)));
}

PacketHeader RoutingScheme::make_header(NodeId dst) const {
  PacketHeader h;
  h.dst = dst;
  if (!name_independent()) h.label = label(dst);
  h.hop_budget = hop_budget_;
  return h;
}

void RoutingScheme::begin(NodeId, PacketHeader&) const {}

namespace {

bool seen_in_phase(const std::vector<std::pair<NodeId, Phase>>& visited, NodeId node, Phase phase) {
  return std::find(visited.begin(), visited.end(), std::pair{node, phase}) != visited.end();
}

}  // namespace

RouteResult route(const RoutingScheme& scheme, NodeId src, NodeId dst, std::uint32_t shortest) {
  const Graph& g = scheme.graph();
  RouteResult r;
  r.shortest = shortest;
  r.path.push_back(src);

  AccessLog* log = scheme.access_log();
  PacketHeader header = scheme.make_header(dst);
  if (log != nullptr) log->begin_step(src);
  scheme.begin(src, header);

  // A node may reappear only after the header changed phase (name resolution).
  std::vector<std::pair<NodeId, Phase>> visited{{src, header.scratch.phase}};
  NodeId current = src;
  for (;;) {
    if (log != nullptr) log->begin_step(current);
    const Phase before = header.scratch.phase;
    Step step = scheme.forward(current, header);
    if (header.scratch.phase != before) visited.emplace_back(current, header.scratch.phase);
    if (step.kind == Step::Kind::kDeliver) {
      r.delivered = current == dst;
      if (!r.delivered) r.fault = RouteFault::kRouting;
      break;
    }
    if (step.kind == Step::Kind::kFault || step.port >= g.degree(current)) {
      r.fault = RouteFault::kRouting;
      break;
    }
    if (header.hop_budget == 0) {
      r.fault = RouteFault::kLoop;
      break;
    }
    --header.hop_budget;
    current = g.neighbor(current, step.port);
    r.path.push_back(current);
    ++r.hops;
    if (seen_in_phase(visited, current, header.scratch.phase)) {
      r.fault = RouteFault::kLoop;
      break;
    }
    visited.emplace_back(current, header.scratch.phase);
  }
  return r;
}

RouteResult route(const RoutingScheme& scheme, NodeId src, NodeId dst) {
  return route(scheme, src, dst, bfs(scheme.graph(), src).dist[dst]);
}

std::uint32_t route_hops(const RoutingScheme& scheme, NodeId src, NodeId dst) {
  const Graph& g = scheme.graph();
  PacketHeader header = scheme.make_header(dst);
  scheme.begin(src, header);
  NodeId current = src;
  std::uint32_t hops = 0;
  for (;;) {
    Step step = scheme.forward(current, header);
    if (step.kind == Step::Kind::kDeliver) return current == dst ? hops : kUnreachable;
    if (step.kind == Step::Kind::kFault || step.port >= g.degree(current) || header.hop_budget == 0) {
      return kUnreachable;
    }
    --header.hop_budget;
    current = g.neighbor(current, step.port);
    ++hops;
  }
}

std::uint32_t ShortestPathOracle::distance(NodeId src, NodeId dst) {
  std::shared_ptr<const std::vector<std::uint32_t>> row;
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(src);
    if (it != cache_.end()) row = it->second;
  }
  if (!row) {
    auto fresh = std::make_shared<std::vector<std::uint32_t>>();
    std::vector<NodeId> queue;
    bfs_distances(*graph_, src, *fresh, queue);
    std::lock_guard lock(mutex_);
    row = cache_.try_emplace(src, std::move(fresh)).first->second;
  }
  return (*row)[dst];
}

}  // namespace croute
