#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "croute/baselines.hpp"
#include "croute/experiment.hpp"
#include "croute/generators.hpp"
#include "croute/landmark.hpp"
#include "oracle.hpp"

using namespace croute;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::size_t field_count(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

}  // namespace

TEST_CASE("pair sampling") {
  SUBCASE("all pairs") {
    auto p = PairSampler::all_pairs().pairs(5);
    CHECK(p.size() == 20);
    CHECK(std::is_sorted(p.begin(), p.end()));
    for (auto [s, t] : p) CHECK(s != t);
  }
  SUBCASE("uniform draws distinct ordered pairs") {
    auto p = PairSampler::uniform(500, 7).pairs(40);
    CHECK(p.size() == 500);
    CHECK(std::is_sorted(p.begin(), p.end()));
    CHECK(std::set<NodePair>(p.begin(), p.end()).size() == 500);
    for (auto [s, t] : p) {
      CHECK(s != t);
      CHECK(s < 40);
      CHECK(t < 40);
    }
    CHECK(PairSampler::uniform(500, 7).pairs(40) == p);
    CHECK(PairSampler::uniform(500, 8).pairs(40) != p);
  }
  SUBCASE("oversized requests return every pair") {
    CHECK(PairSampler::uniform(1000, 1).pairs(6) == PairSampler::all_pairs().pairs(6));
  }
  SUBCASE("describe") {
    CHECK(PairSampler::all_pairs().describe() == "all_pairs");
    CHECK(PairSampler::uniform(10, 3).describe() == "uniform count=10 seed=3");
  }
}

TEST_CASE("histogram bins") {
  CHECK(stretch_bin(4, 4) == 0);
  CHECK(stretch_bin(21, 20) == 1);
  CHECK(stretch_bin(2, 1) == 20);
  CHECK(stretch_bin(3, 2) == 10);
  CHECK(stretch_bin(7, 5) == 8);
  CHECK(entries_bin(0) == 0);
  CHECK(entries_bin(1) == 0);
  CHECK(entries_bin(2) == 1);
  CHECK(entries_bin(3) == 1);
  CHECK(entries_bin(1024) == 10);
  CHECK(Histogram{{1, 2, 3}}.total() == 6);
}

TEST_CASE("evaluate") {
  SUBCASE("trivial: stretch one, n-1 entries, all neighbors direct") {
    Graph g = gen_power_law(150, 2, 1);
    TrivialScheme s(g);
    EvalReport r = evaluate(s, PairSampler::all_pairs(), {});
    CHECK(r.pairs == 150u * 149u);
    CHECK(r.clean());
    CHECK(r.avg_stretch == 1.0);
    CHECK(r.max_stretch == 1.0);
    CHECK(r.stretch_hist.total() == r.delivered);
    CHECK(r.stretch_hist.counts.size() == 1);
    CHECK(r.max_entries == 149);
    CHECK(r.mean_entries == 149.0);
    CHECK(r.entries_hist.total() == 150);
    REQUIRE(r.neighbor.has_value());
    CHECK(r.neighbor->checked == 2 * g.edge_count());
    CHECK(r.neighbor->fraction() == 1.0);
  }
  SUBCASE("stretch and distance averages agree with the oracle") {
    Graph g = largest_connected_component(gen_er(60, 0.08, 3)).graph;
    oracle::Apsp d(g);
    auto s = build_landmark_scheme(g, LandmarkConfig{}, 3);
    EvalOptions opt;
    opt.keep_hops = true;
    EvalReport r = evaluate(*s, PairSampler::uniform(800, 2), opt);
    REQUIRE(r.pair_list.size() == r.pairs);
    double stretch = 0.0;
    double dist = 0.0;
    double worst = 0.0;
    std::vector<std::uint64_t> bins(r.stretch_hist.counts.size(), 0);
    for (std::size_t i = 0; i < r.pair_list.size(); ++i) {
      auto [a, b] = r.pair_list[i];
      REQUIRE(r.shortest[i] == d(a, b));
      REQUIRE(r.hops[i] == route(*s, a, b, d(a, b)).hops);
      const double x = static_cast<double>(r.hops[i]) / d(a, b);
      stretch += x;
      dist += d(a, b);
      worst = std::max(worst, x);
      const std::size_t bin = static_cast<std::size_t>(std::floor((x - 1.0) / kStretchBinWidth + 1e-9));
      REQUIRE(bin < bins.size());
      ++bins[bin];
    }
    CHECK(r.avg_stretch == doctest::Approx(stretch / r.pairs));
    CHECK(r.avg_distance == doctest::Approx(dist / r.pairs));
    CHECK(r.max_stretch == worst);
    CHECK(r.stretch_hist.counts == bins);
  }
  SUBCASE("neighbor pairs detour under a single distant landmark") {
    Graph k = gen_full_mesh(32);
    LandmarkConfig c;
    c.mode = LandmarkMode::kExplicit;
    c.explicit_set = {0};
    auto s = build_landmark_scheme(k, c, 0);
    NeighborReport nr = neighbor_check(*s);
    CHECK(nr.checked == 32u * 31u);
    CHECK(nr.fraction() < 1.0);
    CHECK_FALSE(nr.violations.empty());
    Graph tree = gen_tree(100, 3, 2);
    TreeScheme t(tree);
    CHECK(neighbor_check(t).fraction() == 1.0);
    const std::vector<std::size_t> dims{5, 4};
    Graph gg = gen_grid(dims);
    GridScheme grid(gg, dims);
    CHECK(neighbor_check(grid).fraction() == 1.0);
    CHECK(neighbor_check(grid, 10, 3).checked == 10);
  }
  SUBCASE("results do not depend on the thread count") {
    Graph g = gen_power_law(400, 2, 5);
    auto s = build_scheme(g, SchemeConfig{"hybrid"}, 5);
    EvalOptions one;
    one.threads = 1;
    one.keep_hops = true;
    EvalOptions many = one;
    many.threads = 7;
    EvalReport a = evaluate(*s, PairSampler::uniform(3000, 9), one);
    EvalReport b = evaluate(*s, PairSampler::uniform(3000, 9), many);
    CHECK(a.hops == b.hops);
    CHECK(a.avg_stretch == b.avg_stretch);
    CHECK(a.mean_bits == b.mean_bits);
    CHECK(a.stretch_hist.counts == b.stretch_hist.counts);
    CHECK(a.neighbor->direct == b.neighbor->direct);
  }
}

TEST_CASE("CSV output") {
  SUBCASE("format_double is shortest round-trip") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(1.25) == "1.25");
    CHECK(format_double(0.1) == "0.1");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  }
  SUBCASE("summary") {
    Graph g = gen_power_law(80, 2, 1);
    TrivialScheme s(g);
    std::vector<SummaryRow> rows{{"trivial", evaluate(s, PairSampler::all_pairs()), 0.5, 0.25, "ok"},
                                 {"tz", std::nullopt, 0.0, 0.0, "build failed: a, b"}};
    std::ostringstream plain;
    write_summary_csv(plain, rows, false);
    auto lines = lines_of(plain.str());
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] ==
          "scheme,n,edges,pairs,delivery,avg_stretch,max_stretch,mean_entries,max_entries,mean_bits,max_bits,"
          "neighbor_direct,build_s,eval_s,note");
    CHECK(lines[1].rfind("trivial,80," + std::to_string(g.edge_count()) + ",6320,1,1,1,79,79,", 0) == 0);
    CHECK(lines[1].find(",,,ok") != std::string::npos);
    CHECK(field_count(lines[1]) == 15);
    CHECK(lines[2] == "tz,,,,,,,,,,,,,,\"build failed: a, b\"");
    std::ostringstream timed;
    write_summary_csv(timed, rows, true);
    CHECK(lines_of(timed.str())[1].find(",0.5,0.25,ok") != std::string::npos);
    std::ostringstream again;
    write_summary_csv(again, rows, false);
    CHECK(again.str() == plain.str());
  }
  SUBCASE("histograms") {
    std::ostringstream out;
    write_histogram_csv(out, "tz", "stretch", Histogram{{5, 0, 2, 0, 0, 0, 0, 0}});
    auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 9);
    CHECK(lines[0] == "scheme,metric,bin_lo,bin_hi,count");
    CHECK(lines[1] == "tz,stretch,1,1.05,5");
    CHECK(lines[3] == "tz,stretch,1.1,1.15,2");
    CHECK(lines[8] == "tz,stretch,1.35,1.4,0");
    std::ostringstream rt;
    write_histogram_csv(rt, "bc", "rt_entries", Histogram{{1, 0, 3}});
    lines = lines_of(rt.str());
    CHECK(lines[1] == "bc,rt_entries,0,2,1");
    CHECK(lines[3] == "bc,rt_entries,4,8,3");
  }
  SUBCASE("metadata") {
    std::ostringstream out;
    write_metadata(out, {"seed=1", "pairs=10"});
    CHECK(out.str() == "# seed=1\n# pairs=10\n");
  }
}

TEST_CASE("scaling sweep") {
  SweepConfig c;
  c.scheme.name = "trivial";
  c.sizes = {100, 200};
  c.seeds = 2;
  c.first_seed = 3;
  c.pairs = 200;
  auto rows = scaling_sweep(c);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].n == 100);
  CHECK(rows[0].seed == 3);
  CHECK(rows[1].seed == 4);
  CHECK(rows[3].n == 200);
  for (const auto& r : rows) {
    CHECK(r.max_entries == r.n - 1);
    CHECK(r.avg_stretch == 1.0);
    CHECK(r.delivery == 1.0);
    const double n = static_cast<double>(r.n);
    CHECK(r.entries_ratio == doctest::Approx(r.max_entries / std::sqrt(n * std::log(n))));
    CHECK(r.bits_ratio == doctest::Approx(r.max_bits / (std::log2(n) * std::log2(n))));
  }
  std::ostringstream out;
  write_sweep_csv(out, rows);
  auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] ==
        "scheme,n,seed,edges,mean_entries,max_entries,mean_bits,max_bits,avg_stretch,delivery,"
        "entries_per_sqrt_nlogn,bits_per_log2n_sq");
  CHECK(lines[1].rfind("trivial,100,3,", 0) == 0);
  for (std::size_t i = 1; i < lines.size(); ++i) CHECK(field_count(lines[i]) == 12);
}
