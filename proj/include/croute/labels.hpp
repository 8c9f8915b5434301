#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "croute/graph.hpp"

namespace croute {

// Field widths of the declared table encoding: a node id takes ceil(log2 n)
// bits and a port ceil(log2 max_degree) bits.
struct BitWidths {
  std::uint32_t id = 0;
  std::uint32_t port = 0;

  static BitWidths of(const Graph& graph);
  std::uint64_t entry() const { return id + port; }
};

std::uint32_t ceil_log2(std::uint64_t x);

// One light edge on the root-to-node path: the ancestor it leaves from
// (interval and depth) and the port at that ancestor.
struct LightEdge {
  std::uint32_t pre = 0;
  std::uint32_t post = 0;
  std::uint32_t depth = 0;
  Port port = kNoPort;
  friend bool operator==(const LightEdge&, const LightEdge&) = default;
};

struct TreeLabel {
  std::uint32_t pre = 0;
  std::uint32_t post = 0;
  std::uint32_t depth = 0;
  std::vector<LightEdge> light;
  friend bool operator==(const TreeLabel&, const TreeLabel&) = default;
};

struct GridCoord {
  std::vector<std::uint32_t> coord;
  friend bool operator==(const GridCoord&, const GridCoord&) = default;
};

// Cluster id at each level, level 0 (finest) first.
struct HierAddress {
  std::vector<std::uint32_t> clusters;
  friend bool operator==(const HierAddress&, const HierAddress&) = default;
};

struct TzLabel {
  NodeId node = kNoNode;
  NodeId landmark = kNoNode;
  Port landmark_port = kNoPort;  // at landmark, toward node; kNoPort if node is the landmark
  friend bool operator==(const TzLabel&, const TzLabel&) = default;
};

struct CoverLabel {
  std::vector<TreeLabel> trees;
  friend bool operator==(const CoverLabel&, const CoverLabel&) = default;
};

struct HybridLabel {
  TzLabel tz;
  CoverLabel cover;
  friend bool operator==(const HybridLabel&, const HybridLabel&) = default;
};

using LabelPayload =
    std::variant<std::monostate, TreeLabel, GridCoord, HierAddress, TzLabel, CoverLabel, HybridLabel>;

enum class SchemeKind { kTrivial, kTree, kGrid, kHier, kTz, kCowen, kBc, kHybrid, kNameIndependent };

// bit_length counts the topology-dependent payload only. Every node knows its
// own flat id and every header carries the destination's, so flat labels
// cost zero bits.
struct NodeLabel {
  SchemeKind scheme = SchemeKind::kTrivial;
  LabelPayload payload;
  std::uint64_t bit_length = 0;
  friend bool operator==(const NodeLabel&, const NodeLabel&) = default;
};

std::uint64_t label_bits(const TreeLabel& label, BitWidths w);
std::uint64_t label_bits(const TzLabel& label, BitWidths w);
std::uint64_t label_bits(const CoverLabel& label, BitWidths w);

}  // namespace croute
