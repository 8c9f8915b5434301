#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "croute/eval.hpp"
#include "croute/landmark.hpp"
#include "croute/name_independent.hpp"
#include "croute/scheme.hpp"

namespace croute {

// Everything needed to build one scheme by name.
struct SchemeConfig {
  std::string name;         // trivial | tree | grid | hier | tz | cowen | bc | hybrid | ni
  LandmarkConfig landmark;  // tz, hybrid, ni underlays; cowen forces the dominating-set mode
  std::size_t bc_trees = 5;
  std::size_t hier_target = 16;
  std::vector<std::size_t> grid_dims;
  NodeId tree_root = 0;
  Underlay ni_underlay = Underlay::kHybrid;
  double ni_ball_scale = 1.0;

  // One-line "key=value" description of the settings that matter for `name`.
  std::string describe() const;
};

const std::vector<std::string>& scheme_names();
bool is_scheme_name(std::string_view name);
Underlay parse_underlay(std::string_view text);
std::string_view underlay_name(Underlay u);

// Throws BuildError on unknown names or construction failure.
std::unique_ptr<RoutingScheme> build_scheme(const Graph& graph, const SchemeConfig& config, std::uint64_t seed);
std::unique_ptr<RoutingScheme> build_scheme(Graph&&, const SchemeConfig&, std::uint64_t) = delete;

struct SweepConfig {
  SchemeConfig scheme;
  std::vector<std::size_t> sizes;
  std::size_t seeds = 1;
  std::uint64_t first_seed = 1;
  std::size_t m = 2;            // power-law edges per new node
  std::uint64_t pairs = 1000;   // sampled pairs per run for avg stretch; 0 skips routing
  unsigned threads = 0;
};

struct SweepRow {
  std::string scheme;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t edges = 0;
  double mean_entries = 0.0;
  std::uint64_t max_entries = 0;
  double mean_bits = 0.0;
  std::uint64_t max_bits = 0;
  double avg_stretch = 0.0;
  double delivery = 1.0;
  double entries_ratio = 0.0;  // max_entries / sqrt(n ln n)
  double bits_ratio = 0.0;     // max_bits / log2(n)^2
};

// One row per (size, seed) on gen_power_law(n, m, seed); the scheme seed equals the graph seed.
std::vector<SweepRow> scaling_sweep(const SweepConfig& config);

// CSV output. Fields never contain commas except `note`, which is quoted.
struct SummaryRow {
  std::string scheme;
  std::optional<EvalReport> report;  // absent when the build failed
  double build_s = 0.0;
  double eval_s = 0.0;
  std::string note;
};

inline constexpr std::string_view kSummaryHeader =
    "scheme,n,edges,pairs,delivery,avg_stretch,max_stretch,mean_entries,max_entries,mean_bits,max_bits,"
    "neighbor_direct,build_s,eval_s,note";
inline constexpr std::string_view kHistogramHeader = "scheme,metric,bin_lo,bin_hi,count";
inline constexpr std::string_view kSweepHeader =
    "scheme,n,seed,edges,mean_entries,max_entries,mean_bits,max_bits,avg_stretch,delivery,"
    "entries_per_sqrt_nlogn,bits_per_log2n_sq";
inline constexpr std::string_view kBitsFormula =
    "bits = entries*(ceil(log2 n)+ceil(log2 max_degree)) + own label bits + auxiliary bits";

// Writes each line prefixed with "# ".
void write_metadata(std::ostream& out, const std::vector<std::string>& lines);
// Timing columns are left empty unless `timings` is set, so reruns are byte-identical.
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows, bool timings);
// metric "stretch": bins [1+0.05i, 1+0.05(i+1)); metric "rt_entries": bins [2^i, 2^(i+1)), bin 0 = [0, 2).
void write_histogram_csv(std::ostream& out, const std::string& scheme, std::string_view metric,
                         const Histogram& hist);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// Shortest round-trip decimal formatting used by every CSV writer.
std::string format_double(double value);

}  // namespace croute
