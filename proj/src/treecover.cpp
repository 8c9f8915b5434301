#include "croute/treecover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "croute/generators.hpp"

namespace croute {

std::vector<std::uint64_t> TreeCoverScheme::fringe_scores(const Graph& graph, const Tree& base) {
  const std::size_t n = graph.node_count();
  std::vector<std::uint64_t> score(n, 0);
  std::vector<std::uint32_t> stamp(n, 0);
  std::vector<NodeId> ball;
  std::uint32_t epoch = 0;
  auto tree_edge = [&](NodeId x, NodeId y) { return base.parent[x] == y || base.parent[y] == x; };
  for (NodeId r = 0; r < n; ++r) {
    ++epoch;
    ball.assign(1, r);
    stamp[r] = epoch;
    for (NodeId x : graph.neighbors(r)) {
      stamp[x] = epoch;
      ball.push_back(x);
    }
    const std::size_t first_ring = ball.size();
    for (std::size_t i = 1; i < first_ring; ++i) {
      for (NodeId y : graph.neighbors(ball[i])) {
        if (stamp[y] != epoch) {
          stamp[y] = epoch;
          ball.push_back(y);
        }
      }
    }
    std::uint64_t count = 0;
    for (NodeId x : ball) {
      for (NodeId y : graph.neighbors(x)) {
        if (y > x && stamp[y] == epoch && !tree_edge(x, y)) ++count;
      }
    }
    score[r] = count;
  }
  return score;
}

TreeCoverScheme::TreeCoverScheme(const Graph& graph, std::size_t extra_trees) : RoutingScheme(graph) {
  const std::size_t n = graph.node_count();
  if (n == 0) throw BuildError("tree-cover", "empty graph");
  if (!is_connected(graph)) throw BuildError("tree-cover", "graph is disconnected");

  NodeId hub = 0;
  for (NodeId v = 1; v < n; ++v) {
    if (graph.degree(v) > graph.degree(hub)) hub = v;
  }
  if (extra_trees > n - 1) {
    warning_ = "extra tree count " + std::to_string(extra_trees) + " clamped to " + std::to_string(n - 1);
    extra_trees = n - 1;
  }

  Tree base = shortest_path_tree(graph, hub);
  roots_.push_back(hub);
  if (extra_trees > 0) {
    auto score = fringe_scores(graph, base);
    std::vector<NodeId> candidates;
    for (NodeId v = 0; v < n; ++v) {
      if (v != hub) candidates.push_back(v);
    }
    std::sort(candidates.begin(), candidates.end(), [&](NodeId a, NodeId b) {
      if (score[a] != score[b]) return score[a] > score[b];
      if (graph.degree(a) != graph.degree(b)) return graph.degree(a) > graph.degree(b);
      return a < b;
    });
    roots_.insert(roots_.end(), candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(extra_trees));
  }

  trees_.push_back(std::make_unique<TreeRouting>(graph, base));
  for (std::size_t i = 1; i < roots_.size(); ++i) {
    trees_.push_back(std::make_unique<TreeRouting>(graph, shortest_path_tree(graph, roots_[i])));
  }

  labels_.reserve(n);
  for (NodeId v = 0; v < n; ++v) {
    CoverLabel cover;
    cover.trees.reserve(trees_.size());
    for (const auto& t : trees_) cover.trees.push_back(t->label(v));
    const std::uint64_t bits = label_bits(cover, widths());
    labels_.push_back({SchemeKind::kBc, std::move(cover), bits});
  }
}

std::pair<int, std::uint32_t> TreeCoverScheme::choose_tree(const CoverLabel& src, const CoverLabel& dst) const {
  int best = 0;
  std::uint32_t best_dist = kUnreachable;
  for (std::size_t i = 0; i < src.trees.size(); ++i) {
    const std::uint32_t d = TreeRouting::distance(src.trees[i], dst.trees[i]);
    if (d < best_dist) {
      best_dist = d;
      best = static_cast<int>(i);
    }
  }
  return {best, best_dist};
}

Step TreeCoverScheme::forward_in(NodeId current, const CoverLabel& dst, int& tree) const {
  if (tree < 0) {
    touch(current, kTagTreeChoice);
    tree = choose_tree(std::get<CoverLabel>(labels_[current].payload), dst).first;
  }
  touch(current, tree);
  return TreeRouting::forward(trees_[static_cast<std::size_t>(tree)]->table(current),
                              dst.trees[static_cast<std::size_t>(tree)]);
}

Step TreeCoverScheme::forward(NodeId current, PacketHeader& header) const {
  return forward_in(current, std::get<CoverLabel>(header.label->payload), header.scratch.tree);
}

TableSize TreeCoverScheme::table_size(NodeId node) const {
  std::uint64_t entries = 0;
  for (const auto& t : trees_) entries += t->table(node).entries();
  return {entries, table_bits(entries, widths(), labels_[node].bit_length)};
}

// ---------------------------------------------------------------------------

HybridScheme::HybridScheme(const Graph& graph, const LandmarkConfig& landmark_config,
                           std::size_t extra_trees, std::uint64_t seed)
    : RoutingScheme(graph),
      landmark_(build_landmark_scheme(graph, landmark_config, seed)),
      cover_(std::make_unique<TreeCoverScheme>(graph, extra_trees)) {
  labels_.reserve(graph.node_count());
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    const NodeLabel& a = landmark_->label(v);
    const NodeLabel& b = cover_->label(v);
    HybridLabel l{std::get<TzLabel>(a.payload), std::get<CoverLabel>(b.payload)};
    labels_.push_back({SchemeKind::kHybrid, std::move(l), a.bit_length + b.bit_length});
  }
}

namespace {

template <class Forward>
std::uint32_t dry_run(const Graph& graph, NodeId start, std::uint32_t budget, Forward&& forward) {
  NodeId current = start;
  for (std::uint32_t hops = 0;; ++hops) {
    Step step = forward(current);
    if (step.kind == Step::Kind::kDeliver) return hops;
    if (step.kind == Step::Kind::kFault || step.port >= graph.degree(current) || hops == budget) {
      return kUnreachable;
    }
    current = graph.neighbor(current, step.port);
  }
}

}  // namespace

void HybridScheme::begin(NodeId at, PacketHeader& header) const {
  const auto& dst = std::get<HybridLabel>(header.label->payload);
  AccessLog* log = access_log();
  if (log != nullptr) {
    log->suspend();
    log->count_dry_run();
  }
  const std::uint32_t via_landmark = dry_run(graph(), at, header.hop_budget, [&](NodeId c) {
    return landmark_->forward_to(c, dst.tz);
  });
  int tree = -1;
  const std::uint32_t via_cover = dry_run(graph(), at, header.hop_budget, [&](NodeId c) {
    return cover_->forward_in(c, dst.cover, tree);
  });
  if (log != nullptr) log->resume();
  header.scratch.sub_scheme = via_cover < via_landmark ? 1 : 0;
}

Step HybridScheme::forward(NodeId current, PacketHeader& header) const {
  const auto& dst = std::get<HybridLabel>(header.label->payload);
  switch (header.scratch.sub_scheme) {
    case 0:
      return landmark_->forward_to(current, dst.tz);
    case 1:
      return cover_->forward_in(current, dst.cover, header.scratch.tree);
    default:
      return Step::fault();
  }
}

TableSize HybridScheme::table_size(NodeId node) const {
  const TableSize a = landmark_->table_size(node);
  const TableSize b = cover_->table_size(node);
  return {a.entries + b.entries, a.bits + b.bits};
}

void HybridScheme::attach_access_log(AccessLog* log) const {
  RoutingScheme::attach_access_log(log);
  landmark_->attach_access_log(log);
  cover_->attach_access_log(log);
}

// ---------------------------------------------------------------------------

BoundCheckReport bc_table_bound_check(const std::vector<std::size_t>& sizes, std::size_t seeds,
                                      std::size_t extra_trees, std::size_t m, std::uint64_t first_seed) {
  BoundCheckReport report;
  report.sizes = sizes;
  for (std::size_t n : sizes) {
    double sum = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) {
      const std::uint64_t seed = first_seed + s;
      Graph g = gen_power_law(n, m, seed);
      TreeCoverScheme bc(g, extra_trees);
      BoundCheckRow row{n, seed, 0, 0, 0.0};
      for (NodeId v = 0; v < n; ++v) {
        TableSize t = bc.table_size(v);
        row.max_entries = std::max(row.max_entries, t.entries);
        row.max_bits = std::max(row.max_bits, t.bits);
      }
      const double lg = std::log2(static_cast<double>(n));
      row.bits_ratio = static_cast<double>(row.max_bits) / (lg * lg);
      sum += row.bits_ratio;
      report.rows.push_back(row);
    }
    report.mean_ratio.push_back(seeds == 0 ? 0.0 : sum / static_cast<double>(seeds));
  }
  report.bounded = !report.mean_ratio.empty();
  for (double r : report.mean_ratio) {
    if (r > 2.0 * report.mean_ratio.front()) report.bounded = false;
  }
  return report;
}

}  // namespace croute
