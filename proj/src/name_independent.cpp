#include "croute/name_independent.hpp"

#include <algorithm>
#include <cmath>

#include "croute/random.hpp"
#include "croute/treecover.hpp"

namespace croute {

ColorAssignment::ColorAssignment(std::size_t n, std::uint64_t salt)
    : colors_(static_cast<std::uint32_t>(std::max<double>(1.0, std::ceil(std::sqrt(static_cast<double>(n)))))),
      salt_hash_(mix64(salt)),
      class_sizes_(colors_, 0) {
  for (NodeId id = 0; id < n; ++id) ++class_sizes_[color(id)];
}

std::uint32_t ColorAssignment::color(NodeId id) const {
  return static_cast<std::uint32_t>(mix64(id ^ salt_hash_) % colors_);
}

std::size_t ColorAssignment::max_class_size() const {
  return *std::max_element(class_sizes_.begin(), class_sizes_.end());
}

std::unique_ptr<RoutingScheme> build_underlay(const Graph& graph, Underlay underlay,
                                              const LandmarkConfig& landmark, std::size_t extra_trees,
                                              std::uint64_t seed) {
  switch (underlay) {
    case Underlay::kTz:
      return build_landmark_scheme(graph, landmark, seed);
    case Underlay::kBc:
      return std::make_unique<TreeCoverScheme>(graph, extra_trees);
    case Underlay::kHybrid:
      return std::make_unique<HybridScheme>(graph, landmark, extra_trees, seed);
  }
  throw BuildError("ni-underlay", "unknown underlay");
}

namespace {

// Level-synchronous BFS that yields nodes in (distance, id) order without
// sorting whole levels.
class VicinityWalker {
 public:
  VicinityWalker(const Graph& graph, const ColorAssignment& colors)
      : graph_(graph), colors_(colors), dist_(graph.node_count(), kUnreachable),
        first_(graph.node_count(), kNoNode), color_min_(colors.color_count(), kNoNode) {}

  // Smallest prefix of the (distance, id) order from v that contains every
  // non-empty color.
  std::size_t cover_rank(NodeId v) {
    std::size_t wanted = 0;
    for (std::uint32_t c = 0; c < colors_.color_count(); ++c) wanted += colors_.class_size(c) > 0;
    seen_.assign(colors_.color_count(), false);
    std::size_t have = 0;
    std::size_t rank = 0;
    start(v);
    level_ = {v};
    while (!level_.empty()) {
      // Per missing color, the smallest id on this level.
      std::vector<std::uint32_t> touched;
      for (NodeId x : level_) {
        const std::uint32_t c = colors_.color(x);
        if (seen_[c]) continue;
        if (color_min_[c] == kNoNode) touched.push_back(c);
        color_min_[c] = std::min(color_min_[c], x);
      }
      if (have + touched.size() == wanted) {
        NodeId threshold = 0;
        for (std::uint32_t c : touched) threshold = std::max(threshold, color_min_[c]);
        rank += static_cast<std::size_t>(
            std::count_if(level_.begin(), level_.end(), [&](NodeId x) { return x <= threshold; }));
        for (std::uint32_t c : touched) color_min_[c] = kNoNode;
        finish();
        return rank;
      }
      for (std::uint32_t c : touched) {
        seen_[c] = true;
        color_min_[c] = kNoNode;
      }
      have += touched.size();
      rank += level_.size();
      advance();
    }
    finish();
    return rank;
  }

  struct Ball {
    std::vector<PortMap::Entry> routes;
    std::vector<NodeId> nearest;  // per color, kNoNode when absent
  };

  Ball ball(NodeId v, std::size_t size) {
    Ball out;
    out.nearest.assign(colors_.color_count(), kNoNode);
    start(v);
    level_ = {v};
    out.routes.push_back({v, kDeliverPort});
    out.nearest[colors_.color(v)] = v;
    std::uint32_t depth = 0;
    while (out.routes.size() < size) {
      advance();
      ++depth;
      if (level_.empty()) break;
      const std::size_t room = size - out.routes.size();
      std::vector<NodeId> taken = level_;
      if (taken.size() > room) {
        std::nth_element(taken.begin(), taken.begin() + static_cast<std::ptrdiff_t>(room), taken.end());
        taken.resize(room);
      }
      for (NodeId x : taken) {
        auto nbrs = graph_.neighbors(x);
        for (NodeId p : nbrs) {
          if (dist_[p] + 1 == depth) {
            first_[x] = depth == 1 ? x : first_[p];
            break;
          }
        }
        out.routes.push_back({x, *graph_.port_to(v, first_[x])});
        NodeId& best = out.nearest[colors_.color(x)];
        if (best == kNoNode || dist_[best] == depth) best = std::min(best, x);
      }
    }
    finish();
    return out;
  }

 private:
  void start(NodeId v) {
    dist_[v] = 0;
    visited_.assign(1, v);
  }

  void advance() {
    std::vector<NodeId> next;
    for (NodeId u : level_) {
      for (NodeId x : graph_.neighbors(u)) {
        if (dist_[x] == kUnreachable) {
          dist_[x] = dist_[u] + 1;
          next.push_back(x);
          visited_.push_back(x);
        }
      }
    }
    level_ = std::move(next);
  }

  void finish() {
    for (NodeId x : visited_) {
      dist_[x] = kUnreachable;
      first_[x] = kNoNode;
    }
    visited_.clear();
  }

  const Graph& graph_;
  const ColorAssignment& colors_;
  std::vector<std::uint32_t> dist_;
  std::vector<NodeId> first_;
  std::vector<NodeId> color_min_;
  std::vector<bool> seen_;
  std::vector<NodeId> level_;
  std::vector<NodeId> visited_;
};

}  // namespace

NameIndependentScheme::NameIndependentScheme(const Graph& graph, const NameIndependentConfig& config,
                                             std::uint64_t seed)
    : RoutingScheme(graph),
      underlay_(build_underlay(graph, config.underlay, config.landmark, config.extra_trees, seed)),
      colors_(graph.node_count(), seed) {
  const std::size_t n = graph.node_count();
  if (config.ball_scale <= 0.0) throw BuildError("ni-build", "ball scale must be positive");
  if (!is_connected(graph)) throw BuildError("ni-build", "graph is disconnected");
  flat_.scheme = SchemeKind::kNameIndependent;

  const double nd = static_cast<double>(n);
  const double base = n < 2 ? 1.0 : std::sqrt(nd * std::log(nd));
  auto size_for = [&](double c) {
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(c * base)), 1, n);
  };

  VicinityWalker walker(graph, colors_);
  std::vector<std::size_t> ranks(n);
  std::size_t worst = 0;
  for (NodeId v = 0; v < n; ++v) {
    ranks[v] = walker.cover_rank(v);
    worst = std::max(worst, ranks[v]);
  }

  // Same outcome as rebuilding with c doubled until every ball is covered.
  ball_scale_ = config.ball_scale;
  while (size_for(ball_scale_) < worst) {
    if (escalations_ == config.max_escalations) {
      std::string detail;
      const std::size_t cap = size_for(ball_scale_);
      std::size_t listed = 0;
      for (NodeId v = 0; v < n && listed < 8; ++v) {
        if (ranks[v] <= cap) continue;
        auto b = walker.ball(v, cap);
        for (std::uint32_t c = 0; c < colors_.color_count() && listed < 8; ++c) {
          if (colors_.class_size(c) > 0 && b.nearest[c] == kNoNode) {
            detail += " (" + std::to_string(v) + "," + std::to_string(c) + ")";
            ++listed;
          }
        }
      }
      throw BuildError("ni-build", "vicinity balls miss colors after " + std::to_string(escalations_) +
                                       " escalations; uncovered (node,color):" + detail);
    }
    ball_scale_ *= 2.0;
    ++escalations_;
  }
  ball_size_ = size_for(ball_scale_);

  ball_routes_.reserve(n);
  nearest_of_color_.reserve(n);
  for (NodeId v = 0; v < n; ++v) {
    auto b = walker.ball(v, ball_size_);
    ball_routes_.emplace_back(std::move(b.routes));
    nearest_of_color_.push_back(std::move(b.nearest));
  }

  class_dictionary_.resize(colors_.color_count());
  class_locator_bits_.assign(colors_.color_count(), 0);
  for (NodeId id = 0; id < n; ++id) {
    const std::uint32_t c = colors_.color(id);
    const NodeLabel& loc = underlay_->label(id);
    class_dictionary_[c].push_back({id, loc});
    class_locator_bits_[c] += loc.bit_length;
  }
}

std::size_t NameIndependentScheme::dictionary_size(NodeId node) const {
  return class_dictionary_[colors_.color(node)].size();
}

std::uint64_t NameIndependentScheme::dictionary_locator_bits(NodeId node) const {
  return class_locator_bits_[colors_.color(node)];
}

void NameIndependentScheme::begin(NodeId at, PacketHeader& header) const {
  if (header.scratch.phase != Phase::kNone) return;
  touch(at, kTagVicinity);
  header.scratch.phase = Phase::kResolving;
  header.scratch.resolver = nearest_of_color_[at][colors_.color(header.dst)];
}

Step NameIndependentScheme::forward(NodeId current, PacketHeader& header) const {
  if (header.scratch.phase == Phase::kResolving) {
    touch(current, kTagVicinity);
    const std::uint32_t c = colors_.color(current);
    if (c != colors_.color(header.dst)) {
      auto port = ball_routes_[current].find(header.scratch.resolver);
      return port ? Step::to(*port) : Step::fault();
    }
    const auto& dict = class_dictionary_[c];
    auto it = std::lower_bound(dict.begin(), dict.end(), header.dst,
                               [](const DictEntry& e, NodeId id) { return e.id < id; });
    if (it == dict.end() || it->id != header.dst) return Step::fault();
    header.label = it->locator;
    header.scratch.phase = Phase::kResolved;
    underlay_->begin(current, header);
  }
  if (header.scratch.phase == Phase::kResolved) return underlay_->forward(current, header);
  return Step::fault();
}

TableSize NameIndependentScheme::table_size(NodeId node) const {
  const TableSize under = underlay_->table_size(node);
  const std::uint64_t own = ball_routes_[node].size() + dictionary_size(node);
  const std::uint64_t aux = static_cast<std::uint64_t>(colors_.color_count()) * widths().id;
  return {under.entries + own,
          under.bits + table_bits(own, widths(), dictionary_locator_bits(node), aux)};
}

void NameIndependentScheme::attach_access_log(AccessLog* log) const {
  RoutingScheme::attach_access_log(log);
  underlay_->attach_access_log(log);
}

}  // namespace croute
