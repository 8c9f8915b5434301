#include "croute/generators.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "croute/random.hpp"

namespace croute {

Graph gen_power_law(std::size_t n, std::size_t m, std::uint64_t seed, double p_triangle) {
  if (m < 1 || n < m + 1) {
    throw Error("gen_power_law: need n >= m+1 >= 2 (n=" + std::to_string(n) +
                ", m=" + std::to_string(m) + ")");
  }
  if (p_triangle < 0.0 || p_triangle > 1.0) throw Error("gen_power_law: p_triangle outside [0,1]");

  Rng rng(seed);
  std::vector<std::vector<NodeId>> adj(n);
  std::vector<Edge> edges;
  // Every edge contributes both endpoints; a uniform draw is degree-proportional.
  std::vector<NodeId> endpoints;
  auto connect = [&](NodeId a, NodeId b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
    edges.push_back({a, b});
    endpoints.push_back(a);
    endpoints.push_back(b);
  };
  auto adjacent = [&](NodeId a, NodeId b) {
    const auto& shorter = adj[a].size() < adj[b].size() ? adj[a] : adj[b];
    NodeId other = adj[a].size() < adj[b].size() ? b : a;
    return std::find(shorter.begin(), shorter.end(), other) != shorter.end();
  };

  for (NodeId a = 0; a <= m; ++a) {
    for (NodeId b = a + 1; b <= m; ++b) connect(a, b);
  }

  std::vector<NodeId> targets;
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (auto v = static_cast<NodeId>(m + 1); v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      NodeId t = endpoints[rng.below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) connect(v, t);

    if (m >= 2 && rng.bernoulli(p_triangle)) {
      pairs.clear();
      for (std::size_t i = 0; i < targets.size(); ++i) {
        for (std::size_t j = i + 1; j < targets.size(); ++j) pairs.emplace_back(targets[i], targets[j]);
      }
      // Fisher-Yates with the portable draw.
      for (std::size_t i = pairs.size(); i > 1; --i) std::swap(pairs[i - 1], pairs[rng.below(i)]);
      for (auto [a, b] : pairs) {
        if (!adjacent(a, b)) {
          connect(a, b);
          break;
        }
      }
    }
  }
  return Graph::from_edges(n, edges);
}

Graph gen_grid(std::span<const std::size_t> dims) {
  if (dims.empty()) throw Error("gen_grid: no dimensions");
  std::size_t n = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw Error("gen_grid: zero-length dimension");
    n *= d;
  }
  std::vector<Edge> edges;
  std::size_t stride = 1;
  for (std::size_t d : dims) {
    for (std::size_t id = 0; id < n; ++id) {
      if ((id / stride) % d + 1 < d) {
        edges.push_back({static_cast<NodeId>(id), static_cast<NodeId>(id + stride)});
      }
    }
    stride *= d;
  }
  return Graph::from_edges(n, edges);
}

Graph gen_tree(std::size_t n, std::size_t max_arity, std::uint64_t seed) {
  if (n == 0) throw Error("gen_tree: n must be positive");
  if (max_arity == 0 && n > 1) throw Error("gen_tree: max_arity must be positive");
  Rng rng(seed);
  std::vector<Edge> edges;
  std::vector<NodeId> open{0};
  std::vector<std::size_t> kids(n, 0);
  for (NodeId v = 1; v < n; ++v) {
    std::size_t slot = rng.below(open.size());
    NodeId parent = open[slot];
    edges.push_back({parent, v});
    if (++kids[parent] == max_arity) {
      open[slot] = open.back();
      open.pop_back();
    }
    open.push_back(v);
  }
  return Graph::from_edges(n, edges);
}

Graph gen_star(std::size_t n) {
  if (n == 0) throw Error("gen_star: n must be positive");
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) edges.push_back({0, v});
  return Graph::from_edges(n, edges);
}

Graph gen_full_mesh(std::size_t n) {
  if (n == 0) throw Error("gen_full_mesh: n must be positive");
  std::vector<Edge> edges;
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) edges.push_back({a, b});
  }
  return Graph::from_edges(n, edges);
}

Graph gen_er(std::size_t n, double p, std::uint64_t seed) {
  if (n == 0) throw Error("gen_er: n must be positive");
  if (p < 0.0 || p > 1.0) throw Error("gen_er: p outside [0,1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      if (rng.bernoulli(p)) edges.push_back({a, b});
    }
  }
  return Graph::from_edges(n, edges);
}

}  // namespace croute
