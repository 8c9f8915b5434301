#pragma once

#include <cstdint>
#include <span>

#include "croute/graph.hpp"

namespace croute {

// Preferential attachment with triangle closure. Starts from a clique on m+1
// nodes; each later node attaches to m distinct targets chosen with
// probability proportional to degree, then with probability p_triangle links
// one not-yet-adjacent pair of those targets. Requires n >= m+1 >= 2.
Graph gen_power_law(std::size_t n, std::size_t m, std::uint64_t seed, double p_triangle = 0.5);

// Node id = c0 + d0*(c1 + d1*(c2 + ...)); axis 0 varies fastest.
Graph gen_grid(std::span<const std::size_t> dims);

// Node i > 0 picks its parent uniformly among earlier nodes that still have
// fewer than max_arity children. Node 0 is the root.
Graph gen_tree(std::size_t n, std::size_t max_arity, std::uint64_t seed);

// Node 0 is the center.
Graph gen_star(std::size_t n);

Graph gen_full_mesh(std::size_t n);

// G(n, p), not necessarily connected.
Graph gen_er(std::size_t n, double p, std::uint64_t seed);

}  // namespace croute
