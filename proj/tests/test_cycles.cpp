#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>
#include <set>

#include "cyclesparse/cycles.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cyclesparse;
using namespace testsupport;

TEST_CASE("naive_cycle_decomposition") {
  SUBCASE("empty graph") {
    auto g = WeightedMultigraph::from_edges(4, {});
    auto cd = naive_cycle_decomposition(g);
    CHECK(cd.cycles.empty());
    CHECK(cd.extras.empty());
    CHECK(validate_cycle_decomposition(g, cd).ok);
  }
  SUBCASE("triangle peels entirely into extras") {
    auto g = complete_graph(3);
    auto cd = naive_cycle_decomposition(g);
    CHECK(cd.cycles.empty());
    CHECK(cd.extras.size() == 3);
    CHECK(validate_cycle_decomposition(g, cd).ok);
  }
  SUBCASE("parallel pair forms a 2-cycle") {
    auto g = load_undirected("0 1 1\n0 1 1\n");
    auto cd = naive_cycle_decomposition(g);
    REQUIRE(cd.cycles.size() == 1);
    CHECK(cd.cycles[0].size() == 2);
    CHECK(cd.extras.empty());
    CHECK(validate_cycle_decomposition(g, cd).ok);
  }
  SUBCASE("K5 satisfies the validator and the stated bounds") {
    auto g = complete_graph(5);
    auto cd = naive_cycle_decomposition(g);
    auto v = validate_cycle_decomposition(g, cd);
    CHECK(v.ok);
    CHECK(cd.extras_bound == 10);
    for (const auto& c : cd.cycles) CHECK(c.size() <= 4);  // 2 ceil(log2 5) = 6, measured <= 4
    long long covered = cd.extras.size();
    for (const auto& c : cd.cycles) covered += static_cast<long long>(c.size());
    CHECK(covered == 10);
  }
  SUBCASE("non-uniform weights are rejected") {
    auto g = load_undirected("0 1 1\n1 2 2\n");
    CHECK_THROWS_AS(naive_cycle_decomposition(g), GraphError);
  }
  SUBCASE("random graphs: validator and theorem bounds") {
    Prng rng(1234);
    for (int t = 0; t < 20; ++t) {
      int n = 8 + static_cast<int>(rng.below(120));
      int m = n / 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(3 * n)));
      auto g = random_multigraph(n, m, rng);
      auto cd = naive_cycle_decomposition(g);
      auto v = validate_cycle_decomposition(g, cd);
      CHECK_MESSAGE(v.ok, v.message);
      int lb = 2;
      while ((1 << (lb / 2)) < n) lb += 2;
      for (const auto& c : cd.cycles) {
        CHECK(static_cast<int>(c.size()) <= lb);
      }
      CHECK(static_cast<long long>(cd.extras.size()) <= 2LL * n);
    }
  }
  SUBCASE("determinism: same input gives identical output") {
    Prng rng(9);
    auto g = random_multigraph(40, 100, rng);
    auto a = naive_cycle_decomposition(g);
    auto b = naive_cycle_decomposition(g);
    CHECK(a.cycles == b.cycles);
    CHECK(a.extras == b.extras);
  }
}

TEST_CASE("cycle decomposition JSON") {
  auto g = load_undirected("0 1 1\n0 1 1\n1 2 1\n");
  auto cd = naive_cycle_decomposition(g);
  auto js = cycle_decomposition_to_json(cd);
  CHECK(js.find("\"cycles\"") != std::string::npos);
  CHECK(js.find("\"mhat\"") != std::string::npos);
}

TEST_CASE("extract_bounded_degree") {
  SUBCASE("regular graph is returned unchanged up to ids") {
    Prng rng(3);
    auto g = random_regular(24, 4, rng);
    auto bdg = extract_bounded_degree(g, 4);
    CHECK(bdg.h.vertex_count() == 24);
    CHECK(bdg.h.edge_count() == g.edge_count());
    for (int v = 0; v < 24; ++v) CHECK(bdg.vertex_map[static_cast<std::size_t>(v)] == v);
  }
  SUBCASE("star center splits into three degree-3 copies") {
    auto g = star_graph(9);
    auto bdg = extract_bounded_degree(g, 3, /*enforce_min_degree=*/false);
    // Center had degree 9 > 2*3 -> three copies of degree 3 each.
    int center_copies = 0;
    auto degs = bdg.h.weighted_degrees();
    for (int v = 0; v < bdg.h.vertex_count(); ++v) {
      if (bdg.vertex_map[static_cast<std::size_t>(v)] == 0) {
        ++center_copies;
        CHECK(degs[static_cast<std::size_t>(v)] == 3);
      }
    }
    CHECK(center_copies == 3);
  }
  SUBCASE("min-degree precondition enforced by default") {
    auto g = star_graph(9);
    CHECK_THROWS_AS(extract_bounded_degree(g, 3), GraphError);
  }
  SUBCASE("degree range and edge bijection on random graphs after peel") {
    Prng rng(8);
    auto g = random_regular(60, 12, rng);
    int delta = 6;
    auto bdg = extract_bounded_degree(g, delta);
    CHECK(bdg.h.vertex_count() <= 2 * g.vertex_count());
    auto degs = bdg.h.weighted_degrees();
    for (Weight d : degs) {
      CHECK(d >= delta);
      CHECK(d <= 2 * delta);
    }
    // Edge map is injective into g's ids.
    std::set<EdgeId> ids(bdg.edge_map.begin(), bdg.edge_map.end());
    CHECK(ids.size() == bdg.edge_map.size());
    // Each h edge connects copies of its g endpoints.
    for (const Edge& e : bdg.h.edges()) {
      const Edge& ge = g.edge(bdg.edge_map[static_cast<std::size_t>(e.id)]);
      Vertex mu = bdg.vertex_map[static_cast<std::size_t>(e.u)];
      Vertex mv = bdg.vertex_map[static_cast<std::size_t>(e.v)];
      CHECK(((mu == ge.u && mv == ge.v) || (mu == ge.v && mv == ge.u)));
    }
  }
}

TEST_CASE("move_edges_expander") {
  SUBCASE("parallel pairs become 2-cycles before walking") {
    std::vector<std::tuple<Vertex, Vertex, Weight>> es;
    // Expanderish core plus three parallel pairs.
    for (int i = 0; i < 8; ++i) {
      for (int j = i + 1; j < 8; ++j) es.emplace_back(i, j, 1);
    }
    es.emplace_back(0, 1, 1);
    es.emplace_back(2, 3, 1);
    es.emplace_back(4, 5, 1);
    auto g = WeightedMultigraph::from_edges(8, es);
    Prng rng(5);
    auto res = move_edges_expander(g, 0.4, 2, rng);
    int two_cycles = 0;
    for (const auto& c : res.partial.cycles) {
      if (c.closed && c.edges.size() == 2) ++two_cycles;
    }
    CHECK(two_cycles >= 3);
  }
  SUBCASE("cycles are edge-disjoint and congestion is bounded") {
    Prng gen(21);
    auto g = random_regular(96, 16, gen);
    Prng rng(22);
    MoveEdgesOptions opts;
    auto res = move_edges_expander(g, 0.3, 4, rng, opts);
    std::set<EdgeId> used;
    for (const auto& c : res.partial.cycles) {
      for (EdgeId id : c.edges) {
        CHECK(used.insert(id).second);
      }
      // Open cycles: path between two distinct S vertices.
      if (!c.closed) {
        CHECK(c.s1 != c.s2);
      }
      CHECK(static_cast<int>(c.edges.size()) <= res.partial.length_bound);
    }
    // Congestion bound 4 k L from the walk lemma.
    double logn = std::log2(96);
    long long walk_len = static_cast<long long>(
        std::ceil(opts.walk_len_mult * logn / (0.3 * 0.3)));
    CHECK(res.diag.max_edge_congestion <=
          4LL * opts.walks_per_endpoint * 4 * walk_len);
    CHECK(res.targets.size() == static_cast<std::size_t>((96 + 3) / 4));
  }
  SUBCASE("soft precondition violations are reported, not fatal") {
    Prng gen(31);
    auto g = random_regular(64, 8, gen);
    Prng rng(32);
    auto res = move_edges_expander(g, 0.3, 4, rng);
    bool warned = false;
    for (const auto& w : res.diag.warnings) {
      if (w.find("k below") != std::string::npos) warned = true;
    }
    CHECK(warned);  // k = 4 < 10 log2(64)
  }
}

TEST_CASE("move_edges") {
  SUBCASE("single expander component delegates to the walk mover") {
    Prng gen(41);
    auto g = random_regular(64, 16, gen);
    Prng rng(42);
    auto res = move_edges(g, 4, rng);
    CHECK(res.diag.found_cycles > 0);
    CHECK(!res.targets.empty());
    std::set<EdgeId> used;
    for (const auto& c : res.partial.cycles) {
      for (EdgeId id : c.edges) CHECK(used.insert(id).second);
    }
  }
  SUBCASE("forest input yields no cycles") {
    auto g = path_graph(32);
    Prng rng(43);
    auto res = move_edges(g, 4, rng);
    CHECK(res.partial.cycles.empty());
  }
  SUBCASE("dumbbell: both sides decomposed, bridge untouched") {
    std::vector<std::tuple<Vertex, Vertex, Weight>> es;
    for (int i = 0; i < 12; ++i) {
      for (int j = i + 1; j < 12; ++j) {
        es.emplace_back(i, j, 1);
        es.emplace_back(12 + i, 12 + j, 1);
      }
    }
    es.emplace_back(0, 12, 1);
    auto g = WeightedMultigraph::from_edges(24, es);
    EdgeId bridge_id = static_cast<EdgeId>(g.edge_count() - 1);
    Prng rng(44);
    auto res = move_edges(g, 3, rng);
    CHECK(res.diag.found_cycles > 0);
    for (const auto& c : res.partial.cycles) {
      for (EdgeId id : c.edges) CHECK(id != bridge_id);
    }
  }
}

TEST_CASE("extend_partial") {
  SUBCASE("closed partial cycles pass through unchanged") {
    auto g = cycle_graph(6);
    PartialCycleDecomposition partial;
    partial.targets = {0};
    // No open cycles: aux graph is empty, nothing to extend.
    auto aux = build_aux_graph(g, partial);
    CHECK(aux.gs.edge_count() == 0);
    auto out = extend_partial(g, partial.targets, partial, aux, {});
    CHECK(out.empty());
  }
  SUBCASE("hand-built instance: paths splice into a closed circuit") {
    // Graph: two S vertices {0, 1}; two disjoint paths 0-2-1 and 0-3-1.
    auto g = WeightedMultigraph::from_edges(
        4, {{0, 2, 1}, {2, 1, 1}, {0, 3, 1}, {3, 1, 1}});
    PartialCycleDecomposition partial;
    partial.targets = {0, 1};
    PartialCycle c1;
    c1.edges = {0, 1};
    c1.s1 = 0;
    c1.s2 = 1;
    PartialCycle c2;
    c2.edges = {2, 3};
    c2.s1 = 0;
    c2.s2 = 1;
    partial.cycles = {c1, c2};
    auto aux = build_aux_graph(g, partial);
    REQUIRE(aux.gs.edge_count() == 2);
    // The aux graph is a 2-cycle; its decomposition is one parallel pair.
    auto cd = naive_cycle_decomposition(aux.gs);
    REQUIRE(cd.cycles.size() == 1);
    auto out = extend_partial(g, partial.targets, partial, aux, cd.cycles);
    REQUIRE(out.size() == 1);
    CHECK(out[0].size() == 4);
    CHECK(is_closed_walk(g, out[0]));
    // Length bound: l * lhat with l = 2 aux edges, lhat = 2 path edges.
    CHECK(out[0].size() <= 4);
  }
}

TEST_CASE("short_cycle_decomposition") {
  SUBCASE("l = 0 falls back to the peel-and-BFS routine exactly") {
    Prng rng(51);
    auto g = random_multigraph(40, 90, rng);
    Prng r1(7), r2(7);
    auto a = short_cycle_decomposition(g, 0, 8, r1);
    auto b = naive_cycle_decomposition(g);
    CHECK(a.cycles == b.cycles);
    CHECK(a.extras == b.extras);
    CHECK(a.length_bound == b.length_bound);
    CHECK(a.extras_bound == b.extras_bound);
  }
  SUBCASE("n below k falls back too") {
    auto g = complete_graph(6);
    Prng rng(8);
    auto a = short_cycle_decomposition(g, 2, 10, rng);
    auto b = naive_cycle_decomposition(g);
    CHECK(a.cycles == b.cycles);
  }
  SUBCASE("regular graph, one recursion level: validator passes") {
    Prng gen(61);
    auto g = random_regular(128, 16, gen);
    Prng rng(62);
    auto cd = short_cycle_decomposition(g, 1, 8, rng);
    auto v = validate_cycle_decomposition(g, cd);
    CHECK_MESSAGE(v.ok, v.message);
    CHECK(static_cast<long long>(cd.extras.size()) <= cd.extras_bound);
  }
  SUBCASE("determinism: identical seeds give identical outputs") {
    Prng gen(71);
    auto g = random_regular(96, 12, gen);
    Prng r1(99), r2(99);
    auto a = short_cycle_decomposition(g, 1, 8, r1);
    auto b = short_cycle_decomposition(g, 1, 8, r2);
    CHECK(a.cycles == b.cycles);
    CHECK(a.extras == b.extras);
  }
}

TEST_CASE("validator rejects malformed decompositions") {
  auto g = cycle_graph(4);
  CycleDecomposition cd;
  cd.length_bound = 8;
  cd.extras_bound = 8;
  SUBCASE("missing edge") {
    cd.cycles = {{0, 1, 2, 3}};
    cd.cycles[0].pop_back();
    CHECK_FALSE(validate_cycle_decomposition(g, cd).ok);
  }
  SUBCASE("duplicate edge") {
    cd.cycles = {{0, 1, 2, 3}};
    cd.extras = {3};
    CHECK_FALSE(validate_cycle_decomposition(g, cd).ok);
  }
  SUBCASE("not a closed walk") {
    cd.cycles = {{0, 1}};
    cd.extras = {2, 3};
    CHECK_FALSE(validate_cycle_decomposition(g, cd).ok);
  }
  SUBCASE("well-formed passes") {
    cd.cycles = {{0, 1, 2, 3}};
    cd.extras = {};
    CHECK(validate_cycle_decomposition(g, cd).ok);
  }
}
