#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace croute {

using NodeId = std::uint32_t;
using Port = std::uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr Port kNoPort = std::numeric_limits<Port>::max();
inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Edge {
  NodeId u;
  NodeId v;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Immutable undirected simple graph in CSR form. The ports of a node are its
// neighbors in ascending id order, so port p of u is neighbors(u)[p].
class Graph {
 public:
  Graph() = default;

  // Self-loops are dropped and parallel edges collapsed.
  static Graph from_edges(std::size_t node_count, std::span<const Edge> edges);

  std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return targets_.size() / 2; }
  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
  std::size_t max_degree() const { return max_degree_; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {targets_.data() + offsets_[u], degree(u)};
  }
  NodeId neighbor(NodeId u, Port port) const { return targets_[offsets_[u] + port]; }
  std::optional<Port> port_to(NodeId u, NodeId v) const;
  bool has_edge(NodeId u, NodeId v) const { return port_to(u, v).has_value(); }

  // Canonical edge list: u < v, lexicographically sorted.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::size_t max_degree_ = 0;
};

// A graph whose ids came from external tokens (AS numbers, etc.).
struct NamedGraph {
  Graph graph;
  std::vector<std::string> names;  // names[id] = original token
};

// Lines hold "tokenA tokenB"; '#' starts a comment line. Ids are assigned in
// order of first appearance.
NamedGraph parse_edge_list(std::istream& in);
NamedGraph parse_edge_list(std::string_view text);

struct DistanceVector {
  NodeId source = kNoNode;
  std::vector<std::uint32_t> dist;
  // Port at v leading one hop closer to source; smallest such port wins.
  std::vector<Port> parent_port;
};

DistanceVector bfs(const Graph& graph, NodeId source);

// Distances only; reuses the caller's buffers. Used on hot paths.
void bfs_distances(const Graph& graph, NodeId source, std::vector<std::uint32_t>& dist,
                   std::vector<NodeId>& queue);

struct Tree {
  NodeId root = kNoNode;
  std::vector<NodeId> parent;      // kNoNode at root and outside the component
  std::vector<Port> parent_port;   // port at v toward parent
  std::vector<std::vector<NodeId>> children;  // ascending id
  std::vector<std::uint32_t> depth;            // kUnreachable outside the component
  std::vector<NodeId> order;       // BFS order, root first

  std::size_t size() const { return order.size(); }
};

Tree shortest_path_tree(const Graph& graph, NodeId root);

struct Subgraph {
  Graph graph;
  std::vector<NodeId> original_id;  // new id -> id in the source graph
};

bool is_connected(const Graph& graph);

// Ties between equal-size components go to the one holding the smallest id.
Subgraph largest_connected_component(const Graph& graph);

// Mean hop distance estimated from BFS at up to `sources` evenly spaced nodes.
double estimate_average_distance(const Graph& graph, std::size_t sources = 16);

// 64-bit FNV-1a over the canonical edge list; used as a provenance tag.
std::uint64_t graph_hash(const Graph& graph);

}  // namespace croute
