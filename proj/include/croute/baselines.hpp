#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "croute/scheme.hpp"
#include "croute/tree_routing.hpp"

namespace croute {

// Fixed-width bit-packed array of small unsigned values.
class PackedArray {
 public:
  PackedArray() = default;
  PackedArray(std::size_t size, std::uint32_t width);

  std::uint32_t get(std::size_t i) const;
  void set(std::size_t i, std::uint32_t value);
  std::size_t size() const { return size_; }
  std::uint32_t width() const { return width_; }

 private:
  std::size_t size_ = 0;
  std::uint32_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

// Shortest-path next hop to every destination at every node.
class TrivialScheme final : public RoutingScheme {
 public:
  explicit TrivialScheme(const Graph& graph);
  explicit TrivialScheme(Graph&&) = delete;

  SchemeKind kind() const override { return SchemeKind::kTrivial; }
  const NodeLabel& label(NodeId) const override { return flat_; }
  Step forward(NodeId current, PacketHeader& header) const override;
  TableSize table_size(NodeId node) const override;

  // Next-hop port at `node` toward `dst`, or kDeliverPort for dst == node.
  Port next_hop(NodeId node, NodeId dst) const;

 private:
  std::vector<PackedArray> tables_;  // tables_[u].get(dst) = port; degree(u) encodes "self"
  NodeLabel flat_;
};

class TreeScheme final : public RoutingScheme {
 public:
  // Throws BuildError unless the graph is a tree.
  explicit TreeScheme(const Graph& graph, NodeId root = 0);
  explicit TreeScheme(Graph&&, NodeId = 0) = delete;

  SchemeKind kind() const override { return SchemeKind::kTree; }
  const NodeLabel& label(NodeId node) const override { return labels_[node]; }
  Step forward(NodeId current, PacketHeader& header) const override;
  TableSize table_size(NodeId node) const override;

  const TreeRouting& routing() const { return routing_; }

 private:
  TreeRouting routing_;
  std::vector<NodeLabel> labels_;
};

// Coordinate routing on a graph produced by gen_grid(dims).
class GridScheme final : public RoutingScheme {
 public:
  GridScheme(const Graph& graph, std::vector<std::size_t> dims);
  GridScheme(Graph&&, std::vector<std::size_t>) = delete;

  SchemeKind kind() const override { return SchemeKind::kGrid; }
  const NodeLabel& label(NodeId node) const override { return labels_[node]; }
  Step forward(NodeId current, PacketHeader& header) const override;
  TableSize table_size(NodeId node) const override;

  static GridCoord coord_of(NodeId id, std::span<const std::size_t> dims);

 private:
  struct Table {
    GridCoord own;
    std::vector<Port> down;  // per axis, toward coordinate - 1
    std::vector<Port> up;    // per axis, toward coordinate + 1
  };
  std::vector<std::size_t> dims_;
  std::vector<Table> tables_;
  std::vector<NodeLabel> labels_;
};

// Nested clusters built bottom-up by greedy BFS-ball growth. A node keeps
// next hops to every node of its level-0 cluster and one gateway port per
// sibling cluster at each higher level.
class HierScheme final : public RoutingScheme {
 public:
  HierScheme(const Graph& graph, std::size_t cluster_target);
  HierScheme(Graph&&, std::size_t) = delete;

  SchemeKind kind() const override { return SchemeKind::kHier; }
  const NodeLabel& label(NodeId node) const override { return labels_[node]; }
  Step forward(NodeId current, PacketHeader& header) const override;
  TableSize table_size(NodeId node) const override;

  std::size_t levels() const { return cluster_of_.size(); }
  // Cluster id of `node` at `level`.
  std::uint32_t cluster(std::size_t level, NodeId node) const { return cluster_of_[level][node]; }
  std::size_t cluster_count(std::size_t level) const { return cluster_count_[level]; }

 private:
  std::vector<std::vector<std::uint32_t>> cluster_of_;
  std::vector<std::size_t> cluster_count_;
  // tables_[u][level]: level 0 keyed by node id, higher levels by child-cluster id.
  std::vector<std::vector<PortMap>> tables_;
  std::vector<NodeLabel> labels_;
};

}  // namespace croute
