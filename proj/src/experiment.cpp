#include "croute/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "croute/baselines.hpp"
#include "croute/generators.hpp"
#include "croute/treecover.hpp"

namespace croute {

const std::vector<std::string>& scheme_names() {
  static const std::vector<std::string> names{"trivial", "tree", "grid",   "hier", "tz",
                                              "cowen",   "bc",   "hybrid", "ni"};
  return names;
}

bool is_scheme_name(std::string_view name) {
  const auto& names = scheme_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

Underlay parse_underlay(std::string_view text) {
  if (text == "tz") return Underlay::kTz;
  if (text == "bc") return Underlay::kBc;
  if (text == "hybrid") return Underlay::kHybrid;
  throw Error("unknown underlay '" + std::string(text) + "' (expected tz, bc or hybrid)");
}

std::string_view underlay_name(Underlay u) {
  switch (u) {
    case Underlay::kTz: return "tz";
    case Underlay::kBc: return "bc";
    case Underlay::kHybrid: return "hybrid";
  }
  return "unknown";
}

namespace {

std::string landmark_description(const LandmarkConfig& c) {
  std::string s;
  switch (c.mode) {
    case LandmarkMode::kTzRandom:
      s = "landmarks=random sample_scale=" + format_double(c.sample_scale);
      break;
    case LandmarkMode::kCowenDominating:
      s = "landmarks=dominating";
      break;
    case LandmarkMode::kExplicit:
      s = "landmarks=explicit count=" + std::to_string(c.explicit_set.size());
      break;
  }
  return s + " cluster_factor=" + format_double(c.cluster_factor) +
         " max_promotion_rounds=" + std::to_string(c.max_promotion_rounds);
}

}  // namespace

std::string SchemeConfig::describe() const {
  std::string s = "scheme=" + name;
  if (name == "tree") s += " root=" + std::to_string(tree_root);
  if (name == "grid") {
    s += " dims=";
    for (std::size_t i = 0; i < grid_dims.size(); ++i) s += (i ? "x" : "") + std::to_string(grid_dims[i]);
  }
  if (name == "hier") s += " cluster_target=" + std::to_string(hier_target);
  if (name == "tz" || name == "hybrid" || name == "ni") s += " " + landmark_description(landmark);
  if (name == "bc" || name == "hybrid" || name == "ni") s += " bc_trees=" + std::to_string(bc_trees);
  if (name == "ni") {
    s += " ni_underlay=" + std::string(underlay_name(ni_underlay)) + " ni_c=" + format_double(ni_ball_scale);
  }
  return s;
}

std::unique_ptr<RoutingScheme> build_scheme(const Graph& graph, const SchemeConfig& config, std::uint64_t seed) {
  const std::string& name = config.name;
  if (name != "tree" && name != "grid" && !is_connected(graph)) {
    throw BuildError(name.empty() ? "build" : name, "graph is disconnected");
  }
  if (name == "trivial") return std::make_unique<TrivialScheme>(graph);
  if (name == "tree") return std::make_unique<TreeScheme>(graph, config.tree_root);
  if (name == "grid") {
    if (config.grid_dims.empty()) throw BuildError("grid", "grid dimensions required");
    return std::make_unique<GridScheme>(graph, config.grid_dims);
  }
  if (name == "hier") return std::make_unique<HierScheme>(graph, config.hier_target);
  if (name == "tz") return build_landmark_scheme(graph, config.landmark, seed);
  if (name == "cowen") {
    LandmarkConfig c = config.landmark;
    c.mode = LandmarkMode::kCowenDominating;
    return build_landmark_scheme(graph, c, seed);
  }
  if (name == "bc") return std::make_unique<TreeCoverScheme>(graph, config.bc_trees);
  if (name == "hybrid") return std::make_unique<HybridScheme>(graph, config.landmark, config.bc_trees, seed);
  if (name == "ni") {
    NameIndependentConfig c;
    c.underlay = config.ni_underlay;
    c.ball_scale = config.ni_ball_scale;
    c.landmark = config.landmark;
    c.extra_trees = config.bc_trees;
    return std::make_unique<NameIndependentScheme>(graph, c, seed);
  }
  throw BuildError("build", "unknown scheme '" + name + "'");
}

std::vector<SweepRow> scaling_sweep(const SweepConfig& config) {
  std::vector<SweepRow> rows;
  std::vector<std::size_t> sizes = config.sizes;
  std::sort(sizes.begin(), sizes.end());
  for (std::size_t n : sizes) {
    for (std::size_t s = 0; s < config.seeds; ++s) {
      const std::uint64_t seed = config.first_seed + s;
      const Graph g = gen_power_law(n, config.m, seed);
      auto scheme = build_scheme(g, config.scheme, seed);

      SweepRow row;
      row.scheme = config.scheme.name;
      row.n = n;
      row.seed = seed;
      row.edges = g.edge_count();
      std::uint64_t entries = 0;
      std::uint64_t bits = 0;
      for (NodeId v = 0; v < n; ++v) {
        const TableSize t = scheme->table_size(v);
        entries += t.entries;
        bits += t.bits;
        row.max_entries = std::max(row.max_entries, t.entries);
        row.max_bits = std::max(row.max_bits, t.bits);
      }
      row.mean_entries = static_cast<double>(entries) / static_cast<double>(n);
      row.mean_bits = static_cast<double>(bits) / static_cast<double>(n);
      if (config.pairs > 0) {
        EvalOptions opt;
        opt.threads = config.threads;
        opt.neighbor_check = false;
        const EvalReport r = evaluate(*scheme, PairSampler::uniform(config.pairs, seed), opt);
        row.avg_stretch = r.avg_stretch;
        row.delivery = r.delivery();
      }
      const double nd = static_cast<double>(n);
      const double lg = std::log2(nd);
      row.entries_ratio = static_cast<double>(row.max_entries) / std::sqrt(nd * std::log(nd));
      row.bits_ratio = static_cast<double>(row.max_bits) / (lg * lg);
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_metadata(std::ostream& out, const std::vector<std::string>& lines) {
  for (const auto& l : lines) out << "# " << l << '\n';
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

}  // namespace

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows, bool timings) {
  out << kSummaryHeader << '\n';
  for (const auto& row : rows) {
    out << row.scheme << ',';
    if (row.report) {
      const EvalReport& r = *row.report;
      out << r.nodes << ',' << r.edges << ',' << r.pairs << ',' << format_double(r.delivery()) << ','
          << format_double(r.avg_stretch) << ',' << format_double(r.max_stretch) << ','
          << format_double(r.mean_entries) << ',' << r.max_entries << ',' << format_double(r.mean_bits) << ','
          << r.max_bits << ',' << (r.neighbor ? format_double(r.neighbor->fraction()) : "") << ',';
    } else {
      out << ",,,,,,,,,,,";
    }
    if (timings) {
      out << format_double(row.build_s) << ',' << format_double(row.eval_s) << ',';
    } else {
      out << ",,";
    }
    out << quote(row.note) << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const std::string& scheme, std::string_view metric,
                         const Histogram& hist) {
  out << kHistogramHeader << '\n';
  const bool stretch = metric == "stretch";
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    std::string lo;
    std::string hi;
    if (stretch) {
      // (20 + i) / 20 is correctly rounded, so edges print as short decimals.
      lo = format_double(static_cast<double>(20 + i) / 20.0);
      hi = format_double(static_cast<double>(21 + i) / 20.0);
    } else {
      lo = i == 0 ? "0" : std::to_string(std::uint64_t{1} << i);
      hi = std::to_string(std::uint64_t{1} << (i + 1));
    }
    out << scheme << ',' << metric << ',' << lo << ',' << hi << ',' << hist.counts[i] << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    out << r.scheme << ',' << r.n << ',' << r.seed << ',' << r.edges << ',' << format_double(r.mean_entries) << ','
        << r.max_entries << ',' << format_double(r.mean_bits) << ',' << r.max_bits << ','
        << format_double(r.avg_stretch) << ',' << format_double(r.delivery) << ','
        << format_double(r.entries_ratio) << ',' << format_double(r.bits_ratio) << '\n';
  }
}

}  // namespace croute
