#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>

#include "cyclesparse/expander.hpp"
#include "cyclesparse/linalg.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cyclesparse;
using namespace testsupport;

namespace {

WeightedMultigraph two_cliques(int k) {
  std::vector<std::tuple<Vertex, Vertex, Weight>> es;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      es.emplace_back(i, j, 1);
      es.emplace_back(k + i, k + j, 1);
    }
  }
  return WeightedMultigraph::from_edges(2 * k, es);
}

WeightedMultigraph dumbbell_cliques(int k) {
  auto g = two_cliques(k);
  std::vector<std::tuple<Vertex, Vertex, Weight>> es;
  for (const Edge& e : g.edges()) es.emplace_back(e.u, e.v, e.w);
  es.emplace_back(0, k, 1);
  return WeightedMultigraph::from_edges(2 * k, es);
}

}  // namespace

TEST_CASE("conductance by subset enumeration") {
  SUBCASE("path a-b-c with S = {a, b}") {
    auto g = path_graph(3);
    auto r = conductance(g, {0, 1});
    CHECK(r.exact);
    // {a}: cut 1 / vol 1; {b}: cut 2 / vol 2 -> min is 1.
    CHECK(r.value == doctest::Approx(1.0));
  }
  SUBCASE("K4 full set") {
    auto g = complete_graph(4);
    auto r = conductance(g, {0, 1, 2, 3});
    CHECK(r.exact);
    // Singleton: 3/3; pair: 4/6 -> 2/3.
    CHECK(r.value == doctest::Approx(2.0 / 3.0));
  }
  SUBCASE("disconnected subset has conductance zero") {
    auto g = WeightedMultigraph::from_edges(4, {{0, 1, 1}, {2, 3, 1}});
    auto r = conductance(g, {0, 1, 2, 3});
    CHECK(r.value == doctest::Approx(0.0));
  }
  SUBCASE("sweep bound above 20 vertices is flagged and valid") {
    Prng rng(2);
    auto g = random_graph(30, 0.3, rng, true);
    std::vector<Vertex> all(30);
    std::iota(all.begin(), all.end(), 0);
    auto r = conductance(g, all);
    CHECK_FALSE(r.exact);
    CHECK(r.value >= 0.0);
    // Upper bound property: it is a real cut's conductance.
    CHECK(r.value < std ::numeric_limits<double>::infinity());
  }
}

TEST_CASE("expander_decompose") {
  SUBCASE("disjoint K8 pair splits into the two cliques") {
    auto g = two_cliques(8);
    // lambda2(K8 normalized) = 8/7 >= 2 phi for phi <= 4/7.
    auto part = expander_decompose(g, 0.25);
    CHECK(part.pieces.size() == 2);
    CHECK(part.boundary_edges.empty());
    for (double c : part.certificates) {
      CHECK(c >= doctest::Approx(8.0 / 7.0).epsilon(1e-9));
    }
  }
  SUBCASE("single edge certifies trivially") {
    auto g = path_graph(2);
    auto part = expander_decompose(g, 0.1);
    CHECK(part.pieces.size() == 1);
    CHECK(part.certificates[0] == doctest::Approx(2.0));
  }
  SUBCASE("dumbbell: bridge lands in the boundary") {
    auto g = dumbbell_cliques(8);
    auto part = expander_decompose(g, 0.25);
    CHECK(part.pieces.size() == 2);
    REQUIRE(part.boundary_edges.size() == 1);
    const Edge& bridge = g.edge(part.boundary_edges[0]);
    CHECK(((bridge.u == 0 && bridge.v == 8) || (bridge.u == 8 && bridge.v == 0)));
  }
  SUBCASE("certificates recheck against the dense oracle; partition is exact") {
    Prng rng(5);
    auto g = random_graph(48, 0.15, rng, true);
    auto part = expander_decompose(g, 0.2);
    std::vector<int> owner(48, -1);
    for (std::size_t i = 0; i < part.pieces.size(); ++i) {
      for (Vertex v : part.pieces[i]) {
        CHECK(owner[static_cast<std::size_t>(v)] == -1);
        owner[static_cast<std::size_t>(v)] = static_cast<int>(i);
      }
    }
    for (int v = 0; v < 48; ++v) CHECK(owner[static_cast<std::size_t>(v)] >= 0);
    long long inside = 0;
    for (const Edge& e : g.edges()) {
      if (owner[static_cast<std::size_t>(e.u)] == owner[static_cast<std::size_t>(e.v)]) {
        ++inside;
      }
    }
    CHECK(inside + static_cast<long long>(part.boundary_edges.size()) == g.edge_count());
    for (std::size_t i = 0; i < part.pieces.size(); ++i) {
      double oracle = lambda2_normalized(g, part.pieces[i]);
      if (part.pieces[i].size() >= 2) {
        CHECK(part.certificates[i] == doctest::Approx(oracle).epsilon(1e-8));
      }
      if (part.pieces[i].size() > 2) {
        CHECK(part.certificates[i] >= 2 * part.phi_target - 1e-12);
        // Cheeger direction: conductance at least lambda2 / 2.
        auto cond = conductance(g, part.pieces[i]);
        if (cond.exact) {
          CHECK(cond.value >= part.certificates[i] / 2 - 1e-9);
        }
      }
    }
  }
  SUBCASE("projected quadratic lower bound holds on certified pieces") {
    // For each certified piece: sum over piece edges of (x_u - x_v)^2 is at
    // least phi^2/2 * sum d_u (x_u - xbar)^2 with xbar the degree-weighted
    // mean, for random x.
    Prng rng(13);
    auto g = random_graph(32, 0.3, rng, true);
    double phi = 0.3;
    auto part = expander_decompose(g, phi);
    auto deg = g.weighted_degrees();
    for (std::size_t i = 0; i < part.pieces.size(); ++i) {
      const auto& piece = part.pieces[i];
      if (piece.size() < 3) continue;
      double cert_phi = part.certificates[i] / 2;
      auto [sub, ids] = g.induced_subgraph(piece);
      for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd x(piece.size());
        for (std::size_t t = 0; t < piece.size(); ++t) x[static_cast<int>(t)] = rng.real01();
        double dsum = 0, xbar_num = 0, dnorm = 0;
        for (std::size_t t = 0; t < piece.size(); ++t) {
          double d = static_cast<double>(deg[static_cast<std::size_t>(piece[t])]);
          xbar_num += d * x[static_cast<int>(t)];
          dnorm += d;
        }
        double xbar = xbar_num / dnorm;
        for (std::size_t t = 0; t < piece.size(); ++t) {
          double d = static_cast<double>(deg[static_cast<std::size_t>(piece[t])]);
          dsum += d * (x[static_cast<int>(t)] - xbar) * (x[static_cast<int>(t)] - xbar);
        }
        double quad = 0;
        for (const Edge& e : sub.edges()) {
          double dx = x[e.u] - x[e.v];
          quad += static_cast<double>(e.w) * dx * dx;
        }
        CHECK(quad >= 0.5 * cert_phi * cert_phi * dsum - 1e-9);
      }
    }
  }
}

TEST_CASE("ns_style_decompose") {
  SUBCASE("K16 with small alpha is one dense component") {
    auto g = complete_graph(16);
    auto split = ns_style_decompose(g, 1.0);
    CHECK(split.sparse_part.empty());
    REQUIRE(split.dense_components.size() == 1);
    CHECK(split.dense_components[0].size() == 16);
  }
  SUBCASE("trees are entirely sparse") {
    auto g = path_graph(16);
    auto split = ns_style_decompose(g, 0.5);
    CHECK(split.sparse_part.size() == 15);
    CHECK(split.dense_components.empty());
  }
  SUBCASE("two K16 plus a bridge: bridge goes sparse") {
    std::vector<std::tuple<Vertex, Vertex, Weight>> es;
    for (int i = 0; i < 16; ++i) {
      for (int j = i + 1; j < 16; ++j) {
        es.emplace_back(i, j, 1);
        es.emplace_back(16 + i, 16 + j, 1);
      }
    }
    es.emplace_back(0, 16, 1);
    auto g = WeightedMultigraph::from_edges(32, es);
    auto split = ns_style_decompose(g, 1.0);
    REQUIRE(split.dense_components.size() == 2);
    REQUIRE(split.sparse_part.size() == 1);
    const Edge& e = g.edge(split.sparse_part[0]);
    CHECK(((e.u == 0 && e.v == 16) || (e.u == 16 && e.v == 0)));
  }
  SUBCASE("dense certificates imply the claimed edge expansion") {
    Prng rng(19);
    auto g = random_regular(40, 8, rng);
    double alpha = 1.0;
    auto split = ns_style_decompose(g, alpha);
    for (std::size_t i = 0; i < split.dense_components.size(); ++i) {
      const auto& comp = split.dense_components[i];
      auto [sub, ids] = g.induced_subgraph(comp);
      Weight dmin = sub.edge_count();
      for (Weight d : sub.weighted_degrees()) dmin = std::min(dmin, d);
      // lambda2 >= 2 alpha / dmin certifies conductance >= alpha/dmin and
      // hence edge expansion >= alpha.
      CHECK(split.certificates[i] >=
            2 * alpha / static_cast<double>(dmin) - 1e-12);
      std::vector<Vertex> all(comp.size());
      std::iota(all.begin(), all.end(), 0);
      CHECK(split.certificates[i] ==
            doctest::Approx(lambda2_normalized(sub, all)).epsilon(1e-8));
    }
    // Exact edge accounting.
    std::set<EdgeId> sparse(split.sparse_part.begin(), split.sparse_part.end());
    long long dense_edges = 0;
    for (const auto& comp : split.dense_components) {
      auto [sub, ids] = g.induced_subgraph(comp);
      for (EdgeId id : ids) CHECK(sparse.count(id) == 0);
      dense_edges += sub.edge_count();
    }
    CHECK(dense_edges + static_cast<long long>(sparse.size()) == g.edge_count());
  }
}

TEST_CASE("lazy_random_walk") {
  SUBCASE("zero steps stays put") {
    auto g = path_graph(3);
    Prng rng(1);
    CHECK(lazy_random_walk(g, 1, 0, rng) == 1);
  }
  SUBCASE("isolated start is an error") {
    auto g = WeightedMultigraph::from_edges(3, {{0, 1, 1}});
    Prng rng(1);
    CHECK_THROWS_AS(lazy_random_walk(g, 2, 1, rng), GraphError);
  }
  SUBCASE("K2 single step is a fair coin") {
    auto g = path_graph(2);
    Prng rng(123);
    int stay = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
      if (lazy_random_walk(g, 0, 1, rng) == 0) ++stay;
    }
    // 4 sigma band around 5000.
    CHECK(std::abs(stay - trials / 2) < 4 * std::sqrt(trials * 0.25));
  }
  SUBCASE("mixing: hit probability of a high-degree set") {
    // K32: conductance ~ 1/2; after 10 phi^-2 log n steps the walk lands in
    // any fixed S with probability at least vol(S) / 3m.
    auto g = complete_graph(32);
    double phi = 0.5;
    int steps = static_cast<int>(10.0 / (phi * phi) * std::log2(32));
    std::vector<char> in_s = {1, 1, 1, 1};
    in_s.resize(32, 0);
    double vol_s = 4 * 31, m = g.edge_count();
    Prng rng(77);
    auto adj = g.adjacency();
    int hits = 0;
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
      Vertex end = lazy_random_walk(adj, g.edges(), 5, steps, rng);
      if (in_s[static_cast<std::size_t>(end)]) ++hits;
    }
    double p = static_cast<double>(hits) / trials;
    double bound = vol_s / (3 * m);
    double sigma = std::sqrt(bound * (1 - bound) / trials);
    CHECK(p >= bound - 3 * sigma);
  }
}
