#pragma once

#include <cstdint>
#include <vector>

#include "croute/graph.hpp"
#include "croute/labels.hpp"
#include "croute/scheme.hpp"

namespace croute {

// Per-node state for routing on one tree: own DFS interval and depth, the
// port to the parent and the heavy child's interval and port.
struct TreeTable {
  std::uint32_t pre = 0;
  std::uint32_t post = 0;
  std::uint32_t depth = 0;
  Port parent_port = kNoPort;
  std::uint32_t heavy_pre = 0;
  std::uint32_t heavy_post = 0;
  Port heavy_port = kNoPort;

  // Own interval, plus parent and heavy child when present.
  std::uint32_t entries() const {
    return 1 + (parent_port != kNoPort ? 1 : 0) + (heavy_port != kNoPort ? 1 : 0);
  }
};

// Heavy-path labelled routing on a spanning tree. DFS preorder visits
// children in ascending id; the heavy child is the one with the largest
// subtree (ties to the smaller id). A label lists the light edges on its
// root path, at most floor(log2 n) of them.
class TreeRouting {
 public:
  TreeRouting(const Graph& graph, const Tree& tree);

  NodeId root() const { return root_; }
  const TreeLabel& label(NodeId v) const { return labels_[v]; }
  const TreeTable& table(NodeId v) const { return tables_[v]; }
  std::size_t max_light_edges() const;

  static Step forward(const TreeTable& here, const TreeLabel& dst);

  // Exact tree distance from two labels alone.
  static std::uint32_t distance(const TreeLabel& a, const TreeLabel& b);
  static std::uint32_t lca_depth(const TreeLabel& a, const TreeLabel& b);

 private:
  NodeId root_;
  std::vector<TreeLabel> labels_;
  std::vector<TreeTable> tables_;
};

}  // namespace croute
