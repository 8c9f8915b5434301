#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "croute/landmark.hpp"
#include "croute/scheme.hpp"

namespace croute {

enum class Underlay { kTz, kBc, kHybrid };

struct NameIndependentConfig {
  Underlay underlay = Underlay::kHybrid;
  double ball_scale = 1.0;  // c: ball size is ceil(c * sqrt(n ln n))
  std::size_t max_escalations = 4;
  LandmarkConfig landmark;
  std::size_t extra_trees = 5;
};

// Identifier colors: color(id) = mix64(id ^ mix64(salt)) mod K, K = ceil(sqrt n).
class ColorAssignment {
 public:
  ColorAssignment(std::size_t n, std::uint64_t salt);

  std::uint32_t color_count() const { return colors_; }
  std::uint32_t color(NodeId id) const;
  std::size_t class_size(std::uint32_t c) const { return class_sizes_[c]; }
  std::size_t max_class_size() const;

 private:
  std::uint32_t colors_;
  std::uint64_t salt_hash_;
  std::vector<std::size_t> class_sizes_;
};

// Name-independent routing over a name-dependent underlay. Each node keeps
// routes to its vicinity ball B(v), the nearest ball member of every color,
// and a dictionary mapping every identifier of its own color to that
// identifier's underlay locator. A packet carries only the flat id: the
// source picks the nearest same-color node in its ball as resolver, the
// resolver writes the locator into the header, and the underlay finishes.
class NameIndependentScheme final : public RoutingScheme {
 public:
  NameIndependentScheme(const Graph& graph, const NameIndependentConfig& config, std::uint64_t seed);
  NameIndependentScheme(Graph&&, const NameIndependentConfig&, std::uint64_t) = delete;

  SchemeKind kind() const override { return SchemeKind::kNameIndependent; }
  bool name_independent() const override { return true; }
  const NodeLabel& label(NodeId) const override { return flat_; }
  void begin(NodeId at, PacketHeader& header) const override;
  Step forward(NodeId current, PacketHeader& header) const override;
  TableSize table_size(NodeId node) const override;
  void attach_access_log(AccessLog* log) const override;

  const RoutingScheme& underlay() const { return *underlay_; }
  const ColorAssignment& colors() const { return colors_; }
  double ball_scale() const { return ball_scale_; }
  std::size_t ball_size() const { return ball_size_; }
  std::size_t escalations() const { return escalations_; }

  // Routes to every member of B(node), keyed by member id.
  const PortMap& ball_routes(NodeId node) const { return ball_routes_[node]; }
  std::size_t dictionary_size(NodeId node) const;
  std::uint64_t dictionary_locator_bits(NodeId node) const;
  // Nearest member of color c in B(node).
  NodeId resolver_for(NodeId node, std::uint32_t c) const { return nearest_of_color_[node][c]; }

 private:
  struct DictEntry {
    NodeId id;
    NodeLabel locator;
  };

  std::unique_ptr<RoutingScheme> underlay_;
  ColorAssignment colors_;
  double ball_scale_ = 1.0;
  std::size_t ball_size_ = 0;
  std::size_t escalations_ = 0;
  std::vector<PortMap> ball_routes_;
  std::vector<std::vector<NodeId>> nearest_of_color_;
  // Every node of color c holds the full dictionary for class c; storage is
  // shared per class, accounting is per node.
  std::vector<std::vector<DictEntry>> class_dictionary_;
  std::vector<std::uint64_t> class_locator_bits_;
  NodeLabel flat_;
};

std::unique_ptr<RoutingScheme> build_underlay(const Graph& graph, Underlay underlay,
                                              const LandmarkConfig& landmark, std::size_t extra_trees,
                                              std::uint64_t seed);

}  // namespace croute
