#include <cmath>

#include "doctest.h"
#include "croute/generators.hpp"
#include "croute/name_independent.hpp"
#include "croute/random.hpp"
#include "croute/treecover.hpp"
#include "oracle.hpp"

using namespace croute;

namespace {

Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph::from_edges(n, e);
}

NameIndependentConfig with_underlay(Underlay u) {
  NameIndependentConfig c;
  c.underlay = u;
  return c;
}

}  // namespace

TEST_CASE("mix64 is the SplitMix64 output function") {
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(mix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("color assignment") {
  for (std::size_t n : {10u, 100u, 1000u, 9204u}) {
    ColorAssignment c(n, 1);
    const auto k = static_cast<std::uint32_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    CHECK(c.color_count() == k);
    std::size_t total = 0;
    for (std::uint32_t x = 0; x < k; ++x) total += c.class_size(x);
    CHECK(total == n);
    CHECK(static_cast<double>(c.max_class_size()) <= 3.0 * n / k);
    ColorAssignment again(n, 1);
    for (NodeId id = 0; id < n; ++id) REQUIRE(c.color(id) == again.color(id));
  }
}

TEST_CASE("vicinity balls, resolvers and dictionaries match the oracle") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    Graph g = seed % 2 ? gen_power_law(90, 2, seed) : largest_connected_component(gen_er(80, 0.06, seed)).graph;
    const std::size_t n = g.node_count();
    oracle::Apsp d(g);
    NameIndependentScheme ni(g, with_underlay(Underlay::kTz), seed);
    auto want = oracle::NameIndependent::build(d, seed);
    REQUIRE(want.has_value());
    CHECK(ni.ball_scale() == want->c);
    CHECK(ni.ball_size() == want->ball);
    for (NodeId v = 0; v < n; ++v) {
      const PortMap& routes = ni.ball_routes(v);
      REQUIRE(routes.size() == want->ball);
      CHECK(routes.find(v) == kDeliverPort);
      for (std::size_t i = 1; i < want->ball; ++i) {
        const NodeId x = want->order[v][i];
        auto port = routes.find(x);
        REQUIRE(port.has_value());
        CHECK(g.neighbor(v, *port) == oracle::spt_first_hop(g, d, v, x));
      }
      for (NodeId t = 0; t < n; ++t) CHECK(ni.resolver_for(v, ni.colors().color(t)) == want->resolver(v, t));
      CHECK(ni.dictionary_size(v) == ni.colors().class_size(ni.colors().color(v)));
    }
  }
}

TEST_CASE("dictionary placement totals") {
  Graph g = gen_power_law(400, 2, 3);
  NameIndependentScheme ni(g, with_underlay(Underlay::kBc), 3);
  std::uint64_t total = 0;
  std::uint64_t want = 0;
  for (NodeId v = 0; v < 400; ++v) total += ni.dictionary_size(v);
  for (std::uint32_t c = 0; c < ni.colors().color_count(); ++c) want += ni.colors().class_size(c) * ni.colors().class_size(c);
  CHECK(total == want);
  for (NodeId v = 0; v < 400; ++v) {
    const TableSize t = ni.table_size(v);
    CHECK(t.entries == ni.underlay().table_size(v).entries + ni.ball_size() + ni.dictionary_size(v));
    CHECK(t.bits > ni.underlay().table_size(v).bits);
  }
}

TEST_CASE("name-independent routing") {
  SUBCASE("headers carry the flat id only") {
    Graph k8 = gen_full_mesh(8);
    NameIndependentScheme ni(k8, with_underlay(Underlay::kTz), 1);
    PacketHeader h = ni.make_header(5);
    CHECK(h.dst == 5);
    CHECK_FALSE(h.label.has_value());
  }
  SUBCASE("K8 resolves within one hop") {
    Graph k8 = gen_full_mesh(8);
    NameIndependentScheme ni(k8, with_underlay(Underlay::kHybrid), 2);
    for (NodeId s = 0; s < 8; ++s) {
      for (NodeId t = 0; t < 8; ++t) {
        const NodeId r = ni.resolver_for(s, ni.colors().color(t));
        CHECK((r == s || k8.has_edge(s, r)));
        REQUIRE(route(ni, s, t).delivered);
      }
    }
  }
  SUBCASE("the resolver writes the destination's true underlay label") {
    Graph g = gen_power_law(200, 2, 4);
    NameIndependentScheme ni(g, with_underlay(Underlay::kHybrid), 4);
    for (NodeId s = 0; s < 200; s += 9) {
      for (NodeId t = 0; t < 200; t += 7) {
        PacketHeader h = ni.make_header(t);
        ni.begin(s, h);
        NodeId cur = s;
        for (int step = 0; step < 64 && h.scratch.phase == Phase::kResolving; ++step) {
          Step st = ni.forward(cur, h);
          if (h.scratch.phase == Phase::kResolved) break;
          REQUIRE(st.kind == Step::Kind::kForward);
          cur = g.neighbor(cur, st.port);
        }
        REQUIRE(h.scratch.phase == Phase::kResolved);
        CHECK(ni.colors().color(cur) == ni.colors().color(t));
        REQUIRE(h.label.has_value());
        CHECK(*h.label == ni.underlay().label(t));
      }
    }
  }
  SUBCASE("source of the destination's color resolves without a detour") {
    Graph g = gen_power_law(300, 2, 6);
    oracle::Apsp d(g);
    NameIndependentScheme ni(g, with_underlay(Underlay::kTz), 6);
    std::size_t checked = 0;
    for (NodeId s = 0; s < 300; ++s) {
      for (NodeId t = 0; t < 300; t += 3) {
        if (s == t || ni.colors().color(s) != ni.colors().color(t)) continue;
        CHECK(route(ni, s, t, d(s, t)).hops == route(ni.underlay(), s, t, d(s, t)).hops);
        ++checked;
      }
    }
    CHECK(checked > 0);
  }
  SUBCASE("P3 off-path resolver adds its distance") {
    Graph p3 = path_graph(3);
    std::uint64_t seed = 0;
    for (std::uint64_t s = 1; s < 200 && seed == 0; ++s) {
      ColorAssignment c(3, s);
      if (c.color(0) == c.color(2) && c.color(1) != c.color(2)) seed = s;
    }
    REQUIRE(seed != 0);
    NameIndependentScheme ni(p3, with_underlay(Underlay::kTz), seed);
    CHECK(ni.resolver_for(1, ni.colors().color(2)) == 0);
    RouteResult r = route(ni, 1, 2, 1);
    REQUIRE(r.delivered);
    CHECK(r.path == std::vector<NodeId>{1, 0, 1, 2});
    CHECK(r.hops == 1 + route(ni.underlay(), 0, 2, 2).hops);
  }
  SUBCASE("hops are the resolution detour plus the underlay leg") {
    for (Underlay u : {Underlay::kTz, Underlay::kBc, Underlay::kHybrid}) {
      Graph g = gen_power_law(250, 2, 7);
      NameIndependentScheme ni(g, with_underlay(u), 7);
      for (NodeId s = 0; s < 250; s += 5) {
        auto dv = bfs(g, s);
        for (NodeId t = 0; t < 250; t += 3) {
          RouteResult a = route(ni, s, t, dv.dist[t]);
          REQUIRE(a.delivered);
          std::size_t i = 0;
          while (ni.colors().color(a.path[i]) != ni.colors().color(t)) ++i;
          const NodeId at = a.path[i];
          CHECK(i == dv.dist[at]);
          CHECK(a.hops == i + route(ni.underlay(), at, t, 0).hops);
          CHECK(a.hops >= dv.dist[t]);
        }
      }
    }
  }
  SUBCASE("star: tables must reach every color") {
    Graph star = gen_star(100);
    NameIndependentScheme ni(star, with_underlay(Underlay::kHybrid), 1);
    std::uint64_t max_entries = 0;
    for (NodeId v = 0; v < 100; ++v) max_entries = std::max(max_entries, ni.table_size(v).entries);
    CHECK(max_entries >= 10);
    for (NodeId s = 0; s < 100; s += 3) {
      for (NodeId t = 0; t < 100; t += 5) CHECK(route(ni, s, t).delivered);
    }
  }
  SUBCASE("resolving steps read only the current node's vicinity tables") {
    Graph g = gen_power_law(200, 2, 8);
    NameIndependentScheme ni(g, with_underlay(Underlay::kHybrid), 8);
    AccessLog log;
    ni.attach_access_log(&log);
    for (NodeId s = 0; s < 200; s += 13) {
      for (NodeId t = 1; t < 200; t += 11) {
        log.clear();
        RouteResult r = route(ni, s, t);
        REQUIRE(r.delivered);
        for (const auto& acc : log.accesses()) CHECK(acc.at == acc.node);
      }
    }
    ni.attach_access_log(nullptr);
  }
}

TEST_CASE("coverage escalation") {
  SUBCASE("doubling c until every ball sees every color") {
    Graph g = gen_power_law(300, 2, 2);
    NameIndependentConfig c = with_underlay(Underlay::kTz);
    c.ball_scale = 0.125;
    c.max_escalations = 8;
    NameIndependentScheme ni(g, c, 3);
    CHECK(ni.escalations() > 0);
    CHECK(ni.ball_scale() == doctest::Approx(0.125 * std::pow(2.0, static_cast<double>(ni.escalations()))));
    oracle::Apsp d(g);
    auto want = oracle::NameIndependent::build(d, 3, 0.125, 8);
    REQUIRE(want.has_value());
    CHECK(ni.ball_scale() == want->c);
  }
  SUBCASE("cap reached reports uncovered pairs") {
    Graph g = path_graph(60);
    NameIndependentConfig c = with_underlay(Underlay::kTz);
    c.ball_scale = 0.01;
    c.max_escalations = 1;
    try {
      NameIndependentScheme ni(g, c, 3);
      FAIL("expected BuildError");
    } catch (const BuildError& e) {
      CHECK(e.stage() == "ni-build");
      CHECK(std::string(e.what()).find("uncovered (node,color)") != std::string::npos);
    }
  }
}
