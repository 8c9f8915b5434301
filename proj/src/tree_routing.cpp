#include "croute/tree_routing.hpp"

#include <algorithm>

namespace croute {

TreeRouting::TreeRouting(const Graph& graph, const Tree& tree) : root_(tree.root) {
  const std::size_t n = graph.node_count();
  if (tree.size() != n) {
    throw BuildError("tree-routing", "tree spans " + std::to_string(tree.size()) + " of " +
                                         std::to_string(n) + " nodes");
  }
  labels_.assign(n, {});
  tables_.assign(n, {});

  // Subtree sizes bottom-up over the BFS order.
  std::vector<std::uint32_t> size(n, 1);
  for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
    if (tree.parent[*it] != kNoNode) size[tree.parent[*it]] += size[*it];
  }
  std::vector<NodeId> heavy(n, kNoNode);
  for (NodeId v : tree.order) {
    for (NodeId c : tree.children[v]) {
      if (heavy[v] == kNoNode || size[c] > size[heavy[v]]) heavy[v] = c;
    }
  }

  // Iterative preorder; children pushed in reverse so the smallest id is visited first.
  std::uint32_t counter = 0;
  std::vector<NodeId> stack{root_};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    TreeLabel& lab = labels_[v];
    lab.pre = counter++;
    lab.post = lab.pre + size[v] - 1;
    lab.depth = tree.depth[v];
    const auto& kids = tree.children[v];
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }

  // Light-edge lists top-down: a child inherits its parent's list and adds
  // the edge it hangs from when that edge is light.
  for (NodeId v : tree.order) {
    for (NodeId c : tree.children[v]) {
      labels_[c].light = labels_[v].light;
      if (c != heavy[v]) {
        auto port = graph.port_to(v, c);
        labels_[c].light.push_back({labels_[v].pre, labels_[v].post, labels_[v].depth, *port});
      }
    }
  }

  for (NodeId v = 0; v < n; ++v) {
    TreeTable& t = tables_[v];
    t.pre = labels_[v].pre;
    t.post = labels_[v].post;
    t.depth = labels_[v].depth;
    t.parent_port = tree.parent_port[v];
    if (heavy[v] != kNoNode) {
      t.heavy_pre = labels_[heavy[v]].pre;
      t.heavy_post = labels_[heavy[v]].post;
      t.heavy_port = *graph.port_to(v, heavy[v]);
    }
  }
}

std::size_t TreeRouting::max_light_edges() const {
  std::size_t best = 0;
  for (const TreeLabel& l : labels_) best = std::max(best, l.light.size());
  return best;
}

Step TreeRouting::forward(const TreeTable& here, const TreeLabel& dst) {
  if (dst.pre == here.pre) return Step::deliver();
  if (dst.pre < here.pre || dst.pre > here.post) {
    return here.parent_port == kNoPort ? Step::fault() : Step::to(here.parent_port);
  }
  if (here.heavy_port != kNoPort && dst.pre >= here.heavy_pre && dst.pre <= here.heavy_post) {
    return Step::to(here.heavy_port);
  }
  for (const LightEdge& e : dst.light) {
    if (e.pre == here.pre) return Step::to(e.port);
  }
  return Step::fault();
}

std::uint32_t TreeRouting::lca_depth(const TreeLabel& a, const TreeLabel& b) {
  // Past the shared prefix of light edges both root paths run down the same
  // heavy path; each leaves it at its next light edge or ends on it. The
  // shallower exit point is the LCA.
  std::size_t k = 0;
  while (k < a.light.size() && k < b.light.size() && a.light[k] == b.light[k]) ++k;
  const std::uint32_t exit_a = k < a.light.size() ? a.light[k].depth : a.depth;
  const std::uint32_t exit_b = k < b.light.size() ? b.light[k].depth : b.depth;
  return std::min(exit_a, exit_b);
}

std::uint32_t TreeRouting::distance(const TreeLabel& a, const TreeLabel& b) {
  return a.depth + b.depth - 2 * lca_depth(a, b);
}

}  // namespace croute
