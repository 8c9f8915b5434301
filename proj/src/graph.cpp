#include "croute/graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace croute {

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

Graph Graph::from_edges(std::size_t node_count, std::span<const Edge> edges) {
  std::vector<Edge> arcs;
  arcs.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    if (e.u >= node_count || e.v >= node_count) {
      throw Error("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                  ") references a node outside 0.." + std::to_string(node_count));
    }
    if (e.u == e.v) continue;
    arcs.push_back({e.u, e.v});
    arcs.push_back({e.v, e.u});
  }
  std::sort(arcs.begin(), arcs.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  Graph g;
  g.offsets_.assign(node_count + 1, 0);
  g.targets_.reserve(arcs.size());
  for (const Edge& a : arcs) {
    ++g.offsets_[a.u + 1];
    g.targets_.push_back(a.v);
  }
  for (std::size_t i = 0; i < node_count; ++i) {
    g.max_degree_ = std::max(g.max_degree_, g.offsets_[i + 1]);
    g.offsets_[i + 1] += g.offsets_[i];
  }
  return g;
}

std::optional<Port> Graph::port_to(NodeId u, NodeId v) const {
  auto nbrs = neighbors(u);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
  if (it == nbrs.end() || *it != v) return std::nullopt;
  return static_cast<Port>(it - nbrs.begin());
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.push_back({u, v});
    }
  }
  return out;
}

NamedGraph parse_edge_list(std::istream& in) {
  NamedGraph out;
  std::unordered_map<std::string, NodeId> ids;
  std::vector<Edge> edges;
  auto intern = [&](const std::string& token) {
    auto [it, inserted] = ids.try_emplace(token, static_cast<NodeId>(out.names.size()));
    if (inserted) out.names.push_back(token);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw ParseError(line_no, "expected two node tokens, got '" + line + "'");
    }
    NodeId u = intern(a);
    NodeId v = intern(b);
    edges.push_back({u, v});
  }
  if (out.names.empty()) throw ParseError(line_no, "edge list is empty");
  out.graph = Graph::from_edges(out.names.size(), edges);
  return out;
}

NamedGraph parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_edge_list(in);
}

void bfs_distances(const Graph& graph, NodeId source, std::vector<std::uint32_t>& dist,
                   std::vector<NodeId>& queue) {
  dist.assign(graph.node_count(), kUnreachable);
  queue.clear();
  queue.reserve(graph.node_count());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    NodeId u = queue[head];
    std::uint32_t next = dist[u] + 1;
    for (NodeId v : graph.neighbors(u)) {
      if (dist[v] == kUnreachable) {
        dist[v] = next;
        queue.push_back(v);
      }
    }
  }
}

DistanceVector bfs(const Graph& graph, NodeId source) {
  DistanceVector out;
  out.source = source;
  std::vector<NodeId> queue;
  bfs_distances(graph, source, out.dist, queue);
  out.parent_port.assign(graph.node_count(), kNoPort);
  for (NodeId v : queue) {
    if (v == source) continue;
    auto nbrs = graph.neighbors(v);
    for (Port p = 0; p < nbrs.size(); ++p) {
      if (out.dist[nbrs[p]] + 1 == out.dist[v]) {
        out.parent_port[v] = p;
        break;
      }
    }
  }
  return out;
}

Tree shortest_path_tree(const Graph& graph, NodeId root) {
  const std::size_t n = graph.node_count();
  Tree t;
  t.root = root;
  t.parent.assign(n, kNoNode);
  t.parent_port.assign(n, kNoPort);
  t.children.assign(n, {});
  t.depth.assign(n, kUnreachable);

  std::vector<NodeId> queue;
  bfs_distances(graph, root, t.depth, queue);
  t.order = queue;
  for (NodeId v : queue) {
    if (v == root) continue;
    auto nbrs = graph.neighbors(v);
    for (Port p = 0; p < nbrs.size(); ++p) {
      if (t.depth[nbrs[p]] + 1 == t.depth[v]) {
        t.parent[v] = nbrs[p];
        t.parent_port[v] = p;
        break;
      }
    }
  }
  // Visiting v in ascending id keeps every child list sorted.
  for (NodeId v = 0; v < n; ++v) {
    if (t.parent[v] != kNoNode) t.children[t.parent[v]].push_back(v);
  }
  return t;
}

namespace {

std::vector<NodeId> component_labels(const Graph& graph, std::size_t& count) {
  const std::size_t n = graph.node_count();
  std::vector<NodeId> comp(n, kNoNode);
  std::vector<NodeId> stack;
  count = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] != kNoNode) continue;
    comp[s] = static_cast<NodeId>(count);
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : graph.neighbors(u)) {
        if (comp[v] == kNoNode) {
          comp[v] = static_cast<NodeId>(count);
          stack.push_back(v);
        }
      }
    }
    ++count;
  }
  return comp;
}

}  // namespace

bool is_connected(const Graph& graph) {
  std::size_t count = 0;
  component_labels(graph, count);
  return count <= 1;
}

Subgraph largest_connected_component(const Graph& graph) {
  std::size_t count = 0;
  auto comp = component_labels(graph, count);
  std::vector<std::size_t> sizes(count, 0);
  for (NodeId c : comp) ++sizes[c];
  // Components are numbered by their smallest member, so max_element's
  // first-wins rule implements the tie-break.
  const NodeId best =
      count == 0 ? 0 : static_cast<NodeId>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

  Subgraph out;
  std::vector<NodeId> remap(graph.node_count(), kNoNode);
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (comp[v] == best) {
      remap[v] = static_cast<NodeId>(out.original_id.size());
      out.original_id.push_back(v);
    }
  }
  std::vector<Edge> edges;
  for (const Edge& e : graph.edges()) {
    if (comp[e.u] == best) edges.push_back({remap[e.u], remap[e.v]});
  }
  out.graph = Graph::from_edges(out.original_id.size(), edges);
  return out;
}

double estimate_average_distance(const Graph& graph, std::size_t sources) {
  const std::size_t n = graph.node_count();
  if (n < 2) return 0.0;
  sources = std::min(sources, n);
  std::vector<std::uint32_t> dist;
  std::vector<NodeId> queue;
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < sources; ++i) {
    auto s = static_cast<NodeId>(i * n / sources);
    bfs_distances(graph, s, dist, queue);
    for (std::uint32_t d : dist) {
      if (d != kUnreachable && d > 0) {
        total += d;
        ++pairs;
      }
    }
  }
  return pairs == 0 ? 0.0 : total / static_cast<double>(pairs);
}

std::uint64_t graph_hash(const Graph& graph) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(graph.node_count());
  for (const Edge& e : graph.edges()) {
    mix((static_cast<std::uint64_t>(e.u) << 32) | e.v);
  }
  return h;
}

}  // namespace croute
