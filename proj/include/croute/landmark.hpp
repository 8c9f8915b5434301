#pragma once

#include <cstdint>
#include <vector>

#include "croute/scheme.hpp"

namespace croute {

enum class LandmarkMode { kTzRandom, kCowenDominating, kExplicit };

struct LandmarkConfig {
  LandmarkMode mode = LandmarkMode::kTzRandom;
  std::vector<NodeId> explicit_set;  // kExplicit only
  // Per-node sampling probability for kTzRandom is
  // min(1, sample_scale * sqrt(ln n / n)); see sample_probability().
  double sample_scale = 1.0;
  // A node whose cluster exceeds cluster_factor * sqrt(n ln n) is promoted.
  double cluster_factor = 4.0;
  std::size_t max_promotion_rounds = 50;
};

double sample_probability(std::size_t n, double scale);
double cluster_cap(std::size_t n, double factor);

struct LandmarkAssignment {
  std::vector<NodeId> landmarks;           // sorted ascending
  std::vector<NodeId> nearest;             // L(v); ties to the smaller landmark id
  std::vector<std::uint32_t> nearest_dist; // d(v, L(v))
  // Per landmark index i: port at v toward landmarks[i] (kDeliverPort at the landmark).
  std::vector<std::vector<Port>> toward;
  // Per landmark index i: port at landmarks[i] on its shortest-path tree toward v.
  std::vector<std::vector<Port>> first_hop;
  std::size_t promotion_rounds = 0;

  std::size_t index_of(NodeId landmark) const;
};

// C(v) = { w != v : d(w, v) < d(w, L(w)) }, each with the port at v toward w.
struct ClusterMap {
  std::vector<std::vector<PortMap::Entry>> members;  // sorted by member id

  std::size_t max_size() const;
  bool contains(NodeId v, NodeId w) const;
};

// Exact landmark distances and ports for a given landmark set.
LandmarkAssignment assign_landmarks(const Graph& graph, std::vector<NodeId> landmarks);

LandmarkAssignment select_landmarks(const Graph& graph, const LandmarkConfig& config,
                                    std::uint64_t seed);

// One truncated BFS per node w, to radius d(w, L(w)) - 1.
ClusterMap compute_clusters(const Graph& graph, const LandmarkAssignment& assignment);

// Stretch-3 landmark routing. Tables hold next hops to all landmarks and to
// the node's cluster; labels are (id, L(v), port at L(v) toward v).
class LandmarkScheme final : public RoutingScheme {
 public:
  LandmarkScheme(const Graph& graph, LandmarkAssignment assignment, const ClusterMap& clusters,
                 SchemeKind kind = SchemeKind::kTz);

  SchemeKind kind() const override { return kind_; }
  const NodeLabel& label(NodeId node) const override { return labels_[node]; }
  Step forward(NodeId current, PacketHeader& header) const override;
  TableSize table_size(NodeId node) const override;

  Step forward_to(NodeId current, const TzLabel& dst) const;
  const LandmarkAssignment& assignment() const { return assignment_; }
  const PortMap& table(NodeId node) const { return tables_[node]; }

 private:
  SchemeKind kind_;
  LandmarkAssignment assignment_;
  std::vector<PortMap> tables_;
  std::vector<NodeLabel> labels_;
};

// Full build: select, cluster, assemble.
std::unique_ptr<LandmarkScheme> build_landmark_scheme(const Graph& graph, const LandmarkConfig& config,
                                                      std::uint64_t seed);
std::unique_ptr<LandmarkScheme> build_landmark_scheme(Graph&&, const LandmarkConfig&, std::uint64_t) = delete;

}  // namespace croute
