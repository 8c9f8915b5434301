// croute: generate graphs, evaluate routing schemes, run scaling sweeps.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "croute/experiment.hpp"
#include "croute/generators.hpp"
#include "croute/treecover.hpp"

namespace fs = std::filesystem;
using namespace croute;

namespace {

struct GenOptions {
  std::string kind;
  std::size_t n = 0;
  std::size_t m = 2;
  std::vector<std::size_t> dims;
  std::size_t arity = 2;
  double p = 0.1;
  double p_triangle = 0.5;
  std::uint64_t seed = 1;
};

void add_gen_options(CLI::App* app, GenOptions& opts) {
  app->add_option("--n", opts.n, "node count");
  app->add_option("--m", opts.m, "power-law: edges per new node")->capture_default_str();
  app->add_option("--dims", opts.dims, "grid: comma-separated side lengths")->delimiter(',');
  app->add_option("--arity", opts.arity, "tree: maximum children per node")->capture_default_str();
  app->add_option("--p", opts.p, "er: edge probability")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  app->add_option("--p-triangle", opts.p_triangle, "power-law: triangle closure probability")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
}

Graph generate(const GenOptions& s) {
  if (s.kind == "grid") {
    if (s.dims.empty()) throw Error("--dims is required for grid");
    return gen_grid(s.dims);
  }
  if (s.n == 0) throw Error("--n must be positive");
  if (s.kind == "power-law") return gen_power_law(s.n, s.m, s.seed, s.p_triangle);
  if (s.kind == "tree") return gen_tree(s.n, s.arity, s.seed);
  if (s.kind == "star") return gen_star(s.n);
  if (s.kind == "mesh") return gen_full_mesh(s.n);
  if (s.kind == "er") return gen_er(s.n, s.p, s.seed);
  throw Error("unknown generator '" + s.kind + "'");
}

std::string describe(const GenOptions& s) {
  std::ostringstream out;
  out << "generator=" << s.kind;
  if (s.kind == "grid") {
    out << " dims=";
    for (std::size_t i = 0; i < s.dims.size(); ++i) out << (i ? "x" : "") << s.dims[i];
    return out.str();
  }
  out << " n=" << s.n;
  if (s.kind == "power-law") out << " m=" << s.m << " p_triangle=" << format_double(s.p_triangle);
  if (s.kind == "tree") out << " arity=" << s.arity;
  if (s.kind == "er") out << " p=" << format_double(s.p);
  if (s.kind == "power-law" || s.kind == "tree" || s.kind == "er") out << " seed=" << s.seed;
  return out.str();
}

const std::vector<std::string> kGenKinds{"power-law", "grid", "tree", "star", "mesh", "er"};

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path.string() + "' for writing");
  return f;
}

int cmd_gen(const GenOptions& opts, const std::string& out_path) {
  const Graph g = generate(opts);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (out_path != "-") {
    file = open_out(out_path);
    out = &file;
  }
  write_metadata(*out, {describe(opts), "nodes=" + std::to_string(g.node_count()) +
                                            " edges=" + std::to_string(g.edge_count())});
  for (const Edge& e : g.edges()) *out << e.u << ' ' << e.v << '\n';
  if (!*out) throw Error("write failed for '" + out_path + "'");
  return 0;
}

struct EvalArgs {
  std::string graph_path;
  GenOptions gen;
  std::vector<std::string> schemes;
  std::uint64_t pairs = 100000;
  bool all_pairs = false;
  std::uint64_t seed = 1;
  std::string out_dir;
  SchemeConfig scheme;
  std::string ni_underlay = "hybrid";
  std::string landmark_file;
  unsigned threads = 0;
  bool timings = false;
  std::uint64_t neighbor_sample = 0;
};

std::vector<NodeId> read_landmarks(const std::string& path, const std::vector<std::string>& names,
                                   const Subgraph& lcc) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open landmark file '" + path + "'");
  std::map<std::string, NodeId> by_name;
  for (NodeId i = 0; i < names.size(); ++i) by_name.emplace(names[i], i);
  std::vector<NodeId> to_lcc(names.size(), kNoNode);
  for (NodeId i = 0; i < lcc.original_id.size(); ++i) to_lcc[lcc.original_id[i]] = i;
  std::vector<NodeId> out;
  std::string token;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    if (!(ls >> token) || token[0] == '#') continue;
    auto it = by_name.find(token);
    if (it == by_name.end() || to_lcc[it->second] == kNoNode) {
      throw Error(path + ":" + std::to_string(line_no) + ": landmark '" + token + "' not in the graph");
    }
    out.push_back(to_lcc[it->second]);
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

int cmd_eval(EvalArgs& a) {
  NamedGraph loaded;
  std::vector<std::string> meta{"croute eval"};
  if (!a.graph_path.empty()) {
    std::ifstream in(a.graph_path, std::ios::binary);
    if (!in) throw Error("cannot open graph '" + a.graph_path + "'");
    loaded = parse_edge_list(in);
    meta.push_back("graph=file path=" + fs::path(a.graph_path).filename().string());
  } else {
    if (a.gen.kind.empty()) throw Error("either --graph or --gen is required");
    loaded.graph = generate(a.gen);
    for (NodeId i = 0; i < loaded.graph.node_count(); ++i) loaded.names.push_back(std::to_string(i));
    meta.push_back("graph=synthetic stand-in " + describe(a.gen));
    if (a.gen.kind == "grid" && a.scheme.grid_dims.empty()) a.scheme.grid_dims = a.gen.dims;
  }

  Subgraph lcc = largest_connected_component(loaded.graph);
  const Graph& g = lcc.graph;
  meta.push_back("input_nodes=" + std::to_string(loaded.graph.node_count()) + " lcc_nodes=" +
                 std::to_string(g.node_count()) + " lcc_edges=" + std::to_string(g.edge_count()) +
                 " max_degree=" + std::to_string(g.max_degree()));
  std::ostringstream hash;
  hash << "graph_hash=0x" << std::hex << graph_hash(g);
  meta.push_back(hash.str());

  if (!a.landmark_file.empty()) {
    a.scheme.landmark.mode = LandmarkMode::kExplicit;
    a.scheme.landmark.explicit_set = read_landmarks(a.landmark_file, loaded.names, lcc);
  }
  a.scheme.ni_underlay = parse_underlay(a.ni_underlay);

  const PairSampler sampler = a.all_pairs ? PairSampler::all_pairs() : PairSampler::uniform(a.pairs, a.seed);
  meta.push_back("seed=" + std::to_string(a.seed) + " pairs=" + sampler.describe());
  meta.push_back(std::string(kBitsFormula));

  std::vector<SummaryRow> rows;
  std::optional<double> avg_distance;
  bool ok = true;
  fs::create_directories(a.out_dir);
  for (const std::string& name : a.schemes) {
    SchemeConfig cfg = a.scheme;
    cfg.name = name;
    meta.push_back(cfg.describe());
    SummaryRow row;
    row.scheme = name;
    auto t0 = std::chrono::steady_clock::now();
    std::unique_ptr<RoutingScheme> scheme;
    try {
      scheme = build_scheme(g, cfg, a.seed);
    } catch (const Error& e) {
      row.build_s = seconds_since(t0);
      row.note = std::string("build failed: ") + e.what();
      std::cerr << "croute eval: " << name << ": " << e.what() << '\n';
      rows.push_back(std::move(row));
      ok = false;
      continue;
    }
    row.build_s = seconds_since(t0);
    if (const auto* bc = dynamic_cast<const TreeCoverScheme*>(scheme.get()); bc && !bc->warning().empty()) {
      row.note = bc->warning();
    }

    EvalOptions opt;
    opt.threads = a.threads;
    opt.neighbor_sample = a.neighbor_sample;
    opt.neighbor_seed = a.seed;
    t0 = std::chrono::steady_clock::now();
    EvalReport r = evaluate(*scheme, sampler, opt);
    row.eval_s = seconds_since(t0);
    avg_distance = r.avg_distance;

    auto add_note = [&](const std::string& s) { row.note += (row.note.empty() ? "" : "; ") + s; };
    if (r.neighbor) add_note("neighbor_violations=" + std::to_string(r.neighbor->violations.size()));
    if (!r.clean()) {
      add_note("FAULTS routing=" + std::to_string(r.routing_faults) + " loop=" + std::to_string(r.loop_faults));
      std::cerr << "croute eval: " << name << ": " << (r.pairs - r.delivered) << " of " << r.pairs
                << " pairs not delivered\n";
      ok = false;
    }
    if (const auto* ni = dynamic_cast<const NameIndependentScheme*>(scheme.get())) {
      add_note("ni_c=" + format_double(ni->ball_scale()) + " escalations=" + std::to_string(ni->escalations()));
    }
    if (const auto* lm = dynamic_cast<const LandmarkScheme*>(scheme.get())) {
      add_note("landmarks=" + std::to_string(lm->assignment().landmarks.size()));
    }

    auto sf = open_out(fs::path(a.out_dir) / (name + "_stretch_hist.csv"));
    write_histogram_csv(sf, name, "stretch", r.stretch_hist);
    auto rf = open_out(fs::path(a.out_dir) / (name + "_rt_hist.csv"));
    write_histogram_csv(rf, name, "rt_entries", r.entries_hist);
    row.report = std::move(r);
    rows.push_back(std::move(row));
  }
  if (avg_distance) meta.push_back("avg_distance=" + format_double(*avg_distance));

  auto out = open_out(fs::path(a.out_dir) / "summary.csv");
  write_metadata(out, meta);
  write_summary_csv(out, rows, a.timings);
  if (!out) throw Error("write failed in '" + a.out_dir + "'");
  return ok ? 0 : 1;
}

int cmd_sweep(SweepConfig& cfg, const std::string& ni_underlay, const std::string& out_path) {
  cfg.scheme.ni_underlay = parse_underlay(ni_underlay);
  const auto rows = scaling_sweep(cfg);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (out_path != "-") {
    file = open_out(out_path);
    out = &file;
  }
  write_metadata(*out, {"croute sweep", "generator=power-law m=" + std::to_string(cfg.m) + " seeds=" +
                                             std::to_string(cfg.first_seed) + ".." +
                                             std::to_string(cfg.first_seed + cfg.seeds - 1),
                        cfg.scheme.describe(), std::string(kBitsFormula)});
  write_sweep_csv(*out, rows);
  bool clean = true;
  for (const auto& r : rows) clean = clean && r.delivery == 1.0;
  return clean ? 0 : 1;
}

void add_scheme_options(CLI::App* app, SchemeConfig& s, std::string& ni_underlay) {
  app->add_option("--bc-trees", s.bc_trees, "extra tree-cover trees")->capture_default_str();
  app->add_option("--hier-target", s.hier_target, "hierarchical cluster size target")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
  app->add_option("--tz-sample-scale", s.landmark.sample_scale, "landmark sampling probability multiplier")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--ni-underlay", ni_underlay, "name-independent underlay")
      ->capture_default_str()
      ->check(CLI::IsMember({"tz", "bc", "hybrid"}));
  app->add_option("--ni-c", s.ni_ball_scale, "vicinity ball constant c")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--grid-dims", s.grid_dims, "grid dimensions for the grid scheme")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compact routing laboratory"};
  app.require_subcommand(1);

  GenOptions gen_opts;
  std::string gen_out = "-";
  auto* gen = app.add_subcommand("gen", "write a generated graph as an edge list");
  gen->add_option("--kind", gen_opts.kind, "generator")->required()->check(CLI::IsMember(kGenKinds));
  add_gen_options(gen, gen_opts);
  gen->add_option("--seed", gen_opts.seed, "random seed")->capture_default_str();
  gen->add_option("--out", gen_out, "output path, - for stdout")->capture_default_str();

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "build schemes on one graph and write summary/histogram CSVs");
  auto* graph_opt = eval->add_option("--graph", ea.graph_path, "edge-list file")->check(CLI::ExistingFile);
  eval->add_option("--gen", ea.gen.kind, "generate the graph instead (same flags as gen)")
      ->check(CLI::IsMember(kGenKinds))
      ->excludes(graph_opt);
  add_gen_options(eval, ea.gen);
  eval->add_option("--schemes", ea.schemes, "comma-separated scheme names")
      ->required()
      ->delimiter(',')
      ->check(CLI::IsMember(scheme_names()));
  eval->add_option("--pairs", ea.pairs, "sampled source-destination pairs")->capture_default_str();
  eval->add_flag("--all-pairs", ea.all_pairs, "evaluate every ordered pair");
  eval->add_option("--seed", ea.seed, "master seed (graph, schemes, pair sample)")->capture_default_str();
  eval->add_option("--out-dir", ea.out_dir, "output directory")->required();
  eval->add_option("--landmark-file", ea.landmark_file, "explicit landmarks, one node token per line")
      ->check(CLI::ExistingFile);
  eval->add_option("--threads", ea.threads, "worker threads, 0 = all cores")->capture_default_str();
  eval->add_flag("--timings", ea.timings, "fill build_s/eval_s (output no longer byte-reproducible)");
  eval->add_option("--neighbor-sample", ea.neighbor_sample, "ordered neighbor pairs to check, 0 = all")
      ->capture_default_str();
  add_scheme_options(eval, ea.scheme, ea.ni_underlay);

  SweepConfig sw;
  sw.sizes = {1000, 4000, 16000};
  std::string sweep_out = "-";
  std::string sweep_underlay = "hybrid";
  auto* sweep = app.add_subcommand("sweep", "table-size scaling sweep on power-law graphs");
  sweep->add_option("--scheme", sw.scheme.name, "scheme name")->required()->check(CLI::IsMember(scheme_names()));
  sweep->add_option("--sizes", sw.sizes, "comma-separated node counts")->delimiter(',')->capture_default_str();
  sweep->add_option("--seeds", sw.seeds, "seeds per size")->capture_default_str();
  sweep->add_option("--first-seed", sw.first_seed, "first seed")->capture_default_str();
  sweep->add_option("--m", sw.m, "power-law edges per new node")->capture_default_str();
  sweep->add_option("--pairs", sw.pairs, "sampled pairs per run, 0 skips routing")->capture_default_str();
  sweep->add_option("--threads", sw.threads, "worker threads, 0 = all cores")->capture_default_str();
  sweep->add_option("--out", sweep_out, "output path, - for stdout")->capture_default_str();
  add_scheme_options(sweep, sw.scheme, sweep_underlay);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(gen_opts, gen_out);
    if (*eval) {
      ea.gen.seed = ea.seed;
      return cmd_eval(ea);
    }
    if (*sweep) return cmd_sweep(sw, sweep_underlay, sweep_out);
  } catch (const Error& e) {
    std::cerr << "croute: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "croute: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
