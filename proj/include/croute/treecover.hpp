#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "croute/landmark.hpp"
#include "croute/scheme.hpp"
#include "croute/tree_routing.hpp"

namespace croute {

// Tree-cover routing for scale-free graphs. T0 is the shortest-path tree of
// a maximum-degree node; up to `extra_trees` more shortest-path trees are
// rooted at the nodes with the highest fringe score (non-T0 edges with both
// endpoints within two hops). The source picks the tree with the smallest
// label-derived distance and stamps it into the header.
class TreeCoverScheme final : public RoutingScheme {
 public:
  TreeCoverScheme(const Graph& graph, std::size_t extra_trees);
  TreeCoverScheme(Graph&&, std::size_t) = delete;

  SchemeKind kind() const override { return SchemeKind::kBc; }
  const NodeLabel& label(NodeId node) const override { return labels_[node]; }
  Step forward(NodeId current, PacketHeader& header) const override;
  TableSize table_size(NodeId node) const override;

  Step forward_in(NodeId current, const CoverLabel& dst, int& tree) const;

  // Tree index the source would pick, with its tree distance.
  std::pair<int, std::uint32_t> choose_tree(const CoverLabel& src, const CoverLabel& dst) const;

  std::size_t tree_count() const { return trees_.size(); }
  const TreeRouting& tree(std::size_t i) const { return *trees_[i]; }
  const std::vector<NodeId>& roots() const { return roots_; }
  // Non-empty when extra_trees had to be clamped.
  const std::string& warning() const { return warning_; }

  static std::vector<std::uint64_t> fringe_scores(const Graph& graph, const Tree& base);

 private:
  std::vector<NodeId> roots_;
  std::vector<std::unique_ptr<TreeRouting>> trees_;
  std::vector<NodeLabel> labels_;
  std::string warning_;
};

// Runs the landmark and tree-cover schemes side by side. At the source a dry
// run of both picks the shorter route and the choice is stamped into the
// header; forwarding then delegates to that sub-scheme only.
class HybridScheme final : public RoutingScheme {
 public:
  HybridScheme(const Graph& graph, const LandmarkConfig& landmark_config, std::size_t extra_trees,
               std::uint64_t seed);
  HybridScheme(Graph&&, const LandmarkConfig&, std::size_t, std::uint64_t) = delete;

  SchemeKind kind() const override { return SchemeKind::kHybrid; }
  const NodeLabel& label(NodeId node) const override { return labels_[node]; }
  void begin(NodeId at, PacketHeader& header) const override;
  Step forward(NodeId current, PacketHeader& header) const override;
  TableSize table_size(NodeId node) const override;
  void attach_access_log(AccessLog* log) const override;

  const LandmarkScheme& landmark() const { return *landmark_; }
  const TreeCoverScheme& cover() const { return *cover_; }

 private:
  std::unique_ptr<LandmarkScheme> landmark_;
  std::unique_ptr<TreeCoverScheme> cover_;
  std::vector<NodeLabel> labels_;
};

struct BoundCheckRow {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t max_entries = 0;
  std::uint64_t max_bits = 0;
  double bits_ratio = 0.0;  // max_bits / log2(n)^2
};

struct BoundCheckReport {
  std::vector<BoundCheckRow> rows;
  std::vector<std::size_t> sizes;
  std::vector<double> mean_ratio;  // per size, averaged over seeds
  bool bounded = false;            // mean ratio at every size <= 2x the smallest size's
};

// Builds the tree cover on power-law graphs (m edges per node) over a sweep
// of sizes and seeds and checks that max bits / log2(n)^2 stays bounded.
BoundCheckReport bc_table_bound_check(const std::vector<std::size_t>& sizes, std::size_t seeds,
                                      std::size_t extra_trees, std::size_t m = 2,
                                      std::uint64_t first_seed = 1);

}  // namespace croute
