#include <cmath>

#include "doctest.h"
#include "croute/generators.hpp"
#include "croute/treecover.hpp"
#include "oracle.hpp"

using namespace croute;

namespace {

Graph connected_er(std::uint64_t seed) { return largest_connected_component(gen_er(64, 0.1, seed)).graph; }

}  // namespace

TEST_CASE("tree cover construction") {
  SUBCASE("roots follow the degree and fringe-score rules") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      Graph g = gen_power_law(150, 2, seed);
      oracle::Apsp d(g);
      TreeCoverScheme bc(g, 5);
      auto cover = oracle::tree_cover(g, d, 5);
      REQUIRE(bc.tree_count() == cover.trees.size());
      for (std::size_t i = 0; i < cover.trees.size(); ++i) CHECK(bc.roots()[i] == cover.trees[i].root);
      for (NodeId v = 0; v < 150; ++v) CHECK(g.degree(v) <= g.degree(bc.roots()[0]));
    }
  }
  SUBCASE("clamps the extra-tree count with a warning") {
    Graph k4 = gen_full_mesh(4);
    TreeCoverScheme bc(k4, 10);
    CHECK(bc.tree_count() == 4);
    CHECK_FALSE(bc.warning().empty());
    TreeCoverScheme ok(k4, 1);
    CHECK(ok.warning().empty());
  }
  SUBCASE("tables are constant per tree") {
    Graph g = gen_power_law(1024, 2, 1);
    TreeCoverScheme bc(g, 5);
    for (NodeId v = 0; v < 1024; ++v) CHECK(bc.table_size(v).entries <= 4 * 6 + 6);
  }
  SUBCASE("star leaves keep O(1) entries") {
    Graph star = gen_star(100);
    TreeCoverScheme one(star, 1);
    TreeCoverScheme five(star, 5);
    for (NodeId v = 1; v < 100; ++v) {
      CHECK(one.table_size(v).entries <= 8);
      CHECK(five.table_size(v).entries <= 2 * 6);
    }
  }
  SUBCASE("label bits are the sum over trees") {
    Graph g = gen_power_law(300, 2, 2);
    TreeCoverScheme bc(g, 3);
    for (NodeId v = 0; v < 300; ++v) {
      const auto& cover = std::get<CoverLabel>(bc.label(v).payload);
      REQUIRE(cover.trees.size() == 4);
      std::uint64_t bits = 0;
      for (const auto& t : cover.trees) bits += label_bits(t, bc.widths());
      CHECK(bc.label(v).bit_length == bits);
    }
  }
}

TEST_CASE("tree cover routing") {
  SUBCASE("trees route with stretch one whatever d is") {
    Graph g = gen_tree(200, 3, 4);
    for (std::size_t d : {0u, 2u, 7u}) {
      TreeCoverScheme bc(g, d);
      for (NodeId a = 0; a < 200; a += 7) {
        auto dv = bfs(g, a);
        for (NodeId b = 0; b < 200; ++b) {
          RouteResult r = route(bc, a, b, dv.dist[b]);
          REQUIRE(r.delivered);
          CHECK(r.hops == dv.dist[b]);
        }
      }
    }
  }
  SUBCASE("K4 with one extra tree: stretch at most two") {
    Graph k4 = gen_full_mesh(4);
    TreeCoverScheme bc(k4, 1);
    for (NodeId a = 0; a < 4; ++a) {
      for (NodeId b = 0; b < 4; ++b) {
        if (a == b) continue;
        RouteResult r = route(bc, a, b, 1);
        REQUIRE(r.delivered);
        CHECK(r.hops <= 2);
      }
    }
  }
  SUBCASE("chosen tree is the label-distance minimum and the path realizes it") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      Graph g = connected_er(seed);
      oracle::Apsp d(g);
      TreeCoverScheme bc(g, 3);
      auto cover = oracle::tree_cover(g, d, 3);
      for (NodeId a = 0; a < g.node_count(); ++a) {
        const auto& src = std::get<CoverLabel>(bc.label(a).payload);
        for (NodeId b = 0; b < g.node_count(); ++b) {
          const auto& dst = std::get<CoverLabel>(bc.label(b).payload);
          auto [tree, dist] = bc.choose_tree(src, dst);
          std::size_t best = oracle::kInf;
          int best_tree = -1;
          for (std::size_t i = 0; i < cover.trees.size(); ++i) {
            const std::size_t len = oracle::tree_path(cover.trees[i], a, b).size() - 1;
            if (len < best) {
              best = len;
              best_tree = static_cast<int>(i);
            }
          }
          REQUIRE(tree == best_tree);
          REQUIRE(dist == best);
          RouteResult r = route(bc, a, b, d(a, b));
          REQUIRE(r.delivered);
          CHECK(r.hops == dist);
        }
      }
    }
  }
  SUBCASE("every step reads only the current node and the stamped tree") {
    Graph g = gen_power_law(300, 2, 3);
    TreeCoverScheme bc(g, 5);
    AccessLog log;
    bc.attach_access_log(&log);
    for (NodeId a = 0; a < 300; a += 11) {
      for (NodeId b = 1; b < 300; b += 13) {
        log.clear();
        PacketHeader h = bc.make_header(b);
        RouteResult r = route(bc, a, b);
        REQUIRE(r.delivered);
        const auto& src = std::get<CoverLabel>(bc.label(a).payload);
        const int stamped = bc.choose_tree(src, std::get<CoverLabel>(h.label->payload)).first;
        for (const auto& acc : log.accesses()) {
          CHECK(acc.at == acc.node);
          CHECK((acc.tag == stamped || (acc.tag == kTagTreeChoice && acc.at == a)));
        }
      }
    }
    bc.attach_access_log(nullptr);
  }
}

TEST_CASE("table bound check on small sweeps") {
  auto report = bc_table_bound_check({250, 1000}, 2, 5);
  REQUIRE(report.rows.size() == 4);
  REQUIRE(report.mean_ratio.size() == 2);
  for (const auto& row : report.rows) {
    const double lg = std::log2(static_cast<double>(row.n));
    CHECK(row.bits_ratio == doctest::Approx(row.max_bits / (lg * lg)));
    CHECK(row.max_entries <= 4 * 6 + 6);
  }
  CHECK(report.bounded);
}

TEST_CASE("hybrid scheme") {
  SUBCASE("per-pair hops are the minimum of both sub-schemes; tables add") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      Graph g = connected_er(seed);
      HybridScheme hy(g, LandmarkConfig{}, 5, seed);
      for (NodeId v = 0; v < g.node_count(); ++v) {
        const TableSize a = hy.landmark().table_size(v);
        const TableSize b = hy.cover().table_size(v);
        CHECK(hy.table_size(v).entries == a.entries + b.entries);
        CHECK(hy.table_size(v).bits == a.bits + b.bits);
      }
      for (NodeId a = 0; a < g.node_count(); ++a) {
        auto dv = bfs(g, a);
        for (NodeId b = 0; b < g.node_count(); ++b) {
          const std::uint32_t tz = route(hy.landmark(), a, b, dv.dist[b]).hops;
          const std::uint32_t bc = route(hy.cover(), a, b, dv.dist[b]).hops;
          RouteResult r = route(hy, a, b, dv.dist[b]);
          REQUIRE(r.delivered);
          REQUIRE(r.hops == std::min(tz, bc));
        }
      }
    }
  }
  SUBCASE("forwarding stays in the stamped sub-scheme; dry runs are not logged") {
    Graph g = gen_power_law(300, 2, 5);
    HybridScheme hy(g, LandmarkConfig{}, 5, 5);
    AccessLog log;
    hy.attach_access_log(&log);
    std::size_t routes = 0;
    for (NodeId a = 0; a < 300; a += 7) {
      for (NodeId b = 3; b < 300; b += 17) {
        if (a == b) continue;
        log.clear();
        PacketHeader h = hy.make_header(b);
        hy.begin(a, h);
        const int stamp = h.scratch.sub_scheme;
        REQUIRE((stamp == 0 || stamp == 1));
        CHECK(log.accesses().empty());
        CHECK(log.dry_runs() == 1);
        log.clear();
        RouteResult r = route(hy, a, b);
        REQUIRE(r.delivered);
        ++routes;
        for (const auto& acc : log.accesses()) {
          CHECK(acc.at == acc.node);
          if (stamp == 0) {
            CHECK(acc.tag == kTagLandmark);
          } else {
            CHECK(acc.tag != kTagLandmark);
          }
        }
      }
    }
    CHECK(routes > 0);
    hy.attach_access_log(nullptr);
  }
}
