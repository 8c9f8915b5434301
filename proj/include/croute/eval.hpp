#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "croute/scheme.hpp"

namespace croute {

using NodePair = std::pair<NodeId, NodeId>;

// Source/destination pairs to evaluate; src == dst is never produced.
class PairSampler {
 public:
  enum class Mode { kAllPairs, kUniform };

  static PairSampler all_pairs() { return PairSampler(Mode::kAllPairs, 0, 0); }
  // Draws `count` distinct ordered pairs, or every pair when count >= n(n-1).
  static PairSampler uniform(std::uint64_t count, std::uint64_t seed) {
    return PairSampler(Mode::kUniform, count, seed);
  }

  Mode mode() const { return mode_; }
  std::uint64_t count() const { return count_; }
  std::uint64_t seed() const { return seed_; }

  // Sorted by (src, dst).
  std::vector<NodePair> pairs(std::size_t n) const;
  std::string describe() const;

 private:
  PairSampler(Mode mode, std::uint64_t count, std::uint64_t seed) : mode_(mode), count_(count), seed_(seed) {}

  Mode mode_;
  std::uint64_t count_;
  std::uint64_t seed_;
};

// Bin i counts values in [lo(i), hi(i)).
struct Histogram {
  std::vector<std::uint64_t> counts;
  std::uint64_t total() const;
};

inline constexpr double kStretchBinWidth = 0.05;

// Stretch bin of hops/shortest: [1 + 0.05 i, 1 + 0.05 (i+1)). Exact integer arithmetic.
std::size_t stretch_bin(std::uint32_t hops, std::uint32_t shortest);
// Table-size bin: 0 for 0 or 1 entries, otherwise floor(log2 entries), i.e. [2^i, 2^(i+1)).
std::size_t entries_bin(std::uint64_t entries);

struct NeighborReport {
  std::uint64_t checked = 0;     // ordered neighbor pairs routed
  std::uint64_t direct = 0;      // delivered in exactly one hop
  std::vector<NodePair> violations;
  double fraction() const { return checked == 0 ? 1.0 : static_cast<double>(direct) / checked; }
};

struct EvalOptions {
  unsigned threads = 0;               // 0: hardware concurrency
  bool keep_hops = false;             // fill EvalReport::hops
  bool neighbor_check = true;
  std::uint64_t neighbor_sample = 0;  // 0: every ordered neighbor pair
  std::uint64_t neighbor_seed = 1;
};

struct EvalReport {
  std::string scheme;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::uint64_t pairs = 0;
  std::uint64_t delivered = 0;
  std::uint64_t routing_faults = 0;
  std::uint64_t loop_faults = 0;
  double avg_stretch = 0.0;  // over delivered pairs
  double max_stretch = 0.0;
  double avg_distance = 0.0;  // mean BFS distance over the sampled pairs
  Histogram stretch_hist;     // one count per delivered pair
  double mean_entries = 0.0;
  std::uint64_t max_entries = 0;
  double mean_bits = 0.0;
  std::uint64_t max_bits = 0;
  Histogram entries_hist;  // one count per node
  std::optional<NeighborReport> neighbor;
  std::vector<NodePair> pair_list;       // with keep_hops
  std::vector<std::uint32_t> hops;       // with keep_hops; kUnreachable on fault
  std::vector<std::uint32_t> shortest;   // with keep_hops

  double delivery() const { return pairs == 0 ? 1.0 : static_cast<double>(delivered) / pairs; }
  bool clean() const { return delivered == pairs; }
};

EvalReport evaluate(const RoutingScheme& scheme, const PairSampler& sampler, const EvalOptions& options = {});

// Routes ordered neighbor pairs (all of them, or `sample` drawn uniformly)
// and counts how many arrive in one hop.
NeighborReport neighbor_check(const RoutingScheme& scheme, std::uint64_t sample = 0, std::uint64_t seed = 1,
                              unsigned threads = 0);

}  // namespace croute
