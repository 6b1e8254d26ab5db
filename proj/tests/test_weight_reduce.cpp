#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>

#include "cyclesparse/linalg.hpp"
#include "cyclesparse/weight_reduce.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cyclesparse;
using namespace testsupport;

namespace {

// Exact rational in/out degrees of an integer graph.
std::pair<std::vector<Rat>, std::vector<Rat>> degrees_of(const DirectedGraph& g) {
  std::vector<Rat> in(static_cast<std::size_t>(g.vertex_count()), Rat(0));
  std::vector<Rat> out(static_cast<std::size_t>(g.vertex_count()), Rat(0));
  for (const auto& e : g.edges()) {
    in[static_cast<std::size_t>(e.head)] += Rat(BigInt(e.w));
    out[static_cast<std::size_t>(e.tail)] += Rat(BigInt(e.w));
  }
  return {in, out};
}

void accumulate(const DirectedGraph& g, std::vector<Rat>* in, std::vector<Rat>* out,
                Eigen::MatrixXd* lap) {
  for (const auto& e : g.edges()) {
    (*in)[static_cast<std::size_t>(e.head)] += Rat(BigInt(e.w));
    (*out)[static_cast<std::size_t>(e.tail)] += Rat(BigInt(e.w));
  }
  if (lap) *lap += laplacian_dense(g);
}

void accumulate(const DirectedRationalGraph& g, std::vector<Rat>* in,
                std::vector<Rat>* out, Eigen::MatrixXd* lap) {
  for (const auto& e : g.edges) {
    (*in)[static_cast<std::size_t>(e.head)] += e.w;
    (*out)[static_cast<std::size_t>(e.tail)] += e.w;
  }
  if (lap) *lap += g.laplacian_dense();
}

}  // namespace

TEST_CASE("decompose_bipartite_dir") {
  SUBCASE("bipartite input stays in one part") {
    auto d = load_directed("# directed=1\n0 1 3\n2 1 5\n2 3 2\n0 3 7\n");
    auto parts = decompose_bipartite_dir(d);
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].edge_count() == 4);
  }
  SUBCASE("directed triangle needs at least two parts") {
    auto d = load_directed("# directed=1\n0 1 1\n1 2 1\n2 0 1\n");
    auto parts = decompose_bipartite_dir(d);
    CHECK(parts.size() >= 2);
  }
  SUBCASE("edge conservation and bipartite supports on random digraphs") {
    Prng rng(3);
    for (int t = 0; t < 6; ++t) {
      auto d = random_eulerian(20, 8, rng);
      auto parts = decompose_bipartite_dir(d);
      long long total = 0;
      long long vertex_occurrences = 0;
      for (const auto& p : parts) {
        total += p.edge_count();
        // 2-colorability of the support.
        auto support = p.undirected_support_doubled();
        auto adj = support.adjacency();
        std::vector<int> color(20, -1);
        std::set<Vertex> seen_vertices;
        for (const auto& e : p.edges()) {
          seen_vertices.insert(e.tail);
          seen_vertices.insert(e.head);
        }
        vertex_occurrences += static_cast<long long>(seen_vertices.size());
        for (Vertex root = 0; root < 20; ++root) {
          if (color[static_cast<std::size_t>(root)] != -1 || adj[static_cast<std::size_t>(root)].empty()) continue;
          color[static_cast<std::size_t>(root)] = 0;
          std::vector<Vertex> stack{root};
          while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            for (EdgeId id : adj[static_cast<std::size_t>(v)]) {
              const Edge& e = support.edge(id);
              Vertex o = e.u == v ? e.v : e.u;
              if (color[static_cast<std::size_t>(o)] == -1) {
                color[static_cast<std::size_t>(o)] = 1 - color[static_cast<std::size_t>(v)];
                stack.push_back(o);
              } else {
                CHECK(color[static_cast<std::size_t>(o)] != color[static_cast<std::size_t>(v)]);
              }
            }
          }
        }
      }
      CHECK(total == d.edge_count());
      CHECK(vertex_occurrences <= 20 * 8);  // c n log n head room
      // Laplacian sum reconstructs the input exactly.
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(20, 20);
      for (const auto& p : parts) sum += laplacian_dense(p);
      CHECK((sum - laplacian_dense(d)).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("local_move") {
  // Gadget: u=0, x1=1, x2=2, x3=3; heavy edges both ways on (1,2), (2,3).
  const Weight heavy = 200000;  // n = 20 -> default threshold 160000
  auto make_gadget = [&](Weight uw) {
    std::vector<std::tuple<Vertex, Vertex, Weight>> es = {
        {0, 1, uw}, {1, 2, heavy}, {2, 1, heavy}, {2, 3, heavy}, {3, 2, heavy}};
    for (int i = 4; i < 20; ++i) es.emplace_back(i - 1, i, 1);
    return DirectedGraph::from_edges(20, es);
  };
  SUBCASE("degrees unchanged exactly") {
    auto g = make_gadget(5);
    auto h = local_move(g, 0, 1, 2, 3);
    auto [gin, gout] = degrees_of(g);
    auto [hin, hout] = degrees_of(h);
    CHECK(gin == hin);
    CHECK(gout == hout);
  }
  SUBCASE("perturbation is the rank-one chi outer product") {
    auto g = make_gadget(5);
    auto h = local_move(g, 0, 1, 2, 3);
    Eigen::MatrixXd diff = laplacian_dense(h) - laplacian_dense(g);
    Eigen::VectorXd chi13 = Eigen::VectorXd::Zero(20);
    chi13[1] = 1;
    chi13[3] = -1;
    Eigen::VectorXd chi02 = Eigen::VectorXd::Zero(20);
    chi02[0] = 1;
    chi02[2] = -1;
    Eigen::MatrixXd expect = chi13 * chi02.transpose();
    CHECK((diff - expect).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("projected norm of the perturbation is tiny") {
    auto g = make_gadget(5);
    auto h = local_move(g, 0, 1, 2, 3);
    Eigen::MatrixXd sym = symmetrized_laplacian_dense(g);
    double norm = asym_error_norm(sym, laplacian_dense(g), laplacian_dense(h)).value;
    CHECK(norm <= 1.0 / 100.0);
  }
  SUBCASE("reverse variant: mirrored ops, transposed perturbation") {
    std::vector<std::tuple<Vertex, Vertex, Weight>> es = {
        {1, 0, 5}, {1, 2, heavy}, {2, 1, heavy}, {2, 3, heavy}, {3, 2, heavy}};
    auto g = DirectedGraph::from_edges(4, es);
    auto h = local_move(g, 0, 1, 2, 3, 0, /*reverse=*/true);
    auto [gin, gout] = degrees_of(g);
    auto [hin, hout] = degrees_of(h);
    CHECK(gin == hin);
    CHECK(gout == hout);
    Eigen::MatrixXd diff = laplacian_dense(h) - laplacian_dense(g);
    Eigen::VectorXd chi13 = Eigen::VectorXd::Zero(4);
    chi13[1] = 1;
    chi13[3] = -1;
    Eigen::VectorXd chi02 = Eigen::VectorXd::Zero(4);
    chi02[0] = 1;
    chi02[2] = -1;
    // Same rank-one support with the roles swapped; the projected norm is
    // unchanged under transposition.
    CHECK((diff - chi02 * chi13.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("threshold violations are errors") {
    std::vector<std::tuple<Vertex, Vertex, Weight>> es = {
        {0, 1, 1}, {1, 2, 10}, {2, 1, 10}, {2, 3, 10}, {3, 2, 10}};
    auto g = DirectedGraph::from_edges(4, es);
    CHECK_THROWS_AS(local_move(g, 0, 1, 2, 3), GraphError);
    // With an explicit small threshold it goes through.
    auto h = local_move(g, 0, 1, 2, 3, 5);
    auto [gin, gout] = degrees_of(g);
    auto [hin, hout] = degrees_of(h);
    CHECK(gin == hin);
    CHECK(gout == hout);
  }
}

TEST_CASE("reduce_powers_of_two") {
  SUBCASE("power-of-two weights: classes are the input, tree only scaled") {
    auto d = load_directed("# directed=1\n0 1 8\n1 2 8\n2 3 2\n3 0 8\n");
    auto res = reduce_powers_of_two(d);
    CHECK(res.rerouted_edges == 0);
    REQUIRE(res.classes.size() == 2);
    CHECK(res.classes[0].first == 1);
    CHECK(res.classes[0].second.edge_count() == 1);
    CHECK(res.classes[1].first == 3);
    CHECK(res.classes[1].second.edge_count() == 3);
    // Tree equals its base: no adjustments.
    auto a = res.tree;
    auto b = res.tree_base;
    a.compact();
    b.compact();
    REQUIRE(a.edges.size() == b.edges.size());
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
      CHECK(a.edges[i].w == b.edges[i].w);
    }
  }
  SUBCASE("disconnected support rejected") {
    auto d = load_directed("# directed=1\n0 1 1\n1 0 1\n2 3 1\n3 2 1\n");
    CHECK_THROWS_AS(reduce_powers_of_two(d), GraphError);
  }
  SUBCASE("trailing bits reroute: degrees exact, norm below n^-2") {
    // Even directed cycle with 41-bit weights; keep_bits = 34 at n = 10.
    const int n = 10;
    std::vector<std::tuple<Vertex, Vertex, Weight>> es;
    for (int i = 0; i < 6; ++i) {
      Weight w = (Weight{1} << 40) + 37 + 11 * i;
      es.emplace_back(i, (i + 1) % 6, w);
    }
    auto d = DirectedGraph::from_edges(n, es);
    auto res = reduce_powers_of_two(d);
    CHECK(res.rerouted_edges > 0);
    // Reconstruction: classes + (tree - tree_base) matches degrees exactly.
    std::vector<Rat> in(n, Rat(0)), out(n, Rat(0));
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (auto& [i, cls] : res.classes) accumulate(cls, &in, &out, &lap);
    accumulate(res.tree, &in, &out, &lap);
    {
      std::vector<Rat> tin(n, Rat(0)), tout(n, Rat(0));
      Eigen::MatrixXd tlap = Eigen::MatrixXd::Zero(n, n);
      accumulate(res.tree_base, &tin, &tout, &tlap);
      for (int v = 0; v < n; ++v) {
        in[static_cast<std::size_t>(v)] -= tin[static_cast<std::size_t>(v)];
        out[static_cast<std::size_t>(v)] -= tout[static_cast<std::size_t>(v)];
      }
      lap -= tlap;
    }
    auto [gin, gout] = degrees_of(d);
    CHECK(in == gin);
    CHECK(out == gout);
    // Spectral perturbation against the input, within n^-2.
    Eigen::MatrixXd sym = symmetrized_laplacian_dense(d);
    double norm = asym_error_norm(sym, laplacian_dense(d), lap).value;
    CHECK(norm <= 1.0 / (n * n));
    // All class weights are powers of two.
    for (auto& [i, cls] : res.classes) {
      for (const auto& e : cls.edges()) {
        CHECK(e.w == (Weight{1} << i));
      }
    }
  }
}

TEST_CASE("reduce_to_unit") {
  SUBCASE("unit input: identity up to the routing tree") {
    auto d = load_directed("# directed=1\n0 1 1\n1 2 1\n2 3 1\n3 0 1\n");
    auto res = reduce_to_unit(d);
    REQUIRE(res.classes.size() == 1);
    CHECK(res.classes[0].first == 0);
    // The bucket spanning tree absorbs n-1 unit edges; the rest stay in the
    // class. Together they reproduce the input exactly.
    CHECK(res.classes[0].second.edge_count() + static_cast<long long>(res.h_sparse.edges.size()) == 4);
    std::vector<Rat> in(4, Rat(0)), out(4, Rat(0));
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(4, 4);
    for (auto& [i, cls] : res.classes) accumulate(cls, &in, &out, &lap);
    accumulate(res.h_sparse, &in, &out, &lap);
    auto [gin, gout] = degrees_of(d);
    CHECK(in == gin);
    CHECK(out == gout);
    CHECK((lap - laplacian_dense(d)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("non-Eulerian input rejected") {
    auto d = load_directed("# directed=1\n0 1 1\n1 2 1\n");
    CHECK_THROWS_AS(reduce_to_unit(d), GraphError);
  }
  SUBCASE("random circulations: degrees exact, norm below n^-2") {
    Prng rng(7);
    for (int t = 0; t < 8; ++t) {
      const int n = 12 + static_cast<int>(rng.below(19));  // up to 30
      // Random circulation with weights spanning several buckets.
      std::vector<std::tuple<Vertex, Vertex, Weight>> es;
      int cycles = 4 + static_cast<int>(rng.below(5));
      for (int c = 0; c < cycles; ++c) {
        std::vector<Vertex> vs(static_cast<std::size_t>(n));
        std::iota(vs.begin(), vs.end(), 0);
        rng.shuffle(vs);
        int len = 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 3)));
        vs.resize(static_cast<std::size_t>(len));
        Weight w = Weight{1} << rng.below(25);
        w += rng.below(5) == 0 ? 0 : static_cast<Weight>(rng.below(1 << 10));
        for (std::size_t i = 0; i < vs.size(); ++i) {
          es.emplace_back(vs[i], vs[(i + 1) % vs.size()], w);
        }
      }
      auto d = DirectedGraph::from_edges(n, es);
      REQUIRE(d.is_eulerian());
      auto res = reduce_to_unit(d);

      std::vector<Rat> in(n, Rat(0)), out(n, Rat(0));
      Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
      for (auto& [i, cls] : res.classes) {
        accumulate(cls, &in, &out, &lap);
        for (const auto& e : cls.edges()) CHECK(e.w == (Weight{1} << i));
      }
      accumulate(res.h_sparse, &in, &out, &lap);
      auto [gin, gout] = degrees_of(d);
      CHECK(in == gin);
      CHECK(out == gout);

      Eigen::MatrixXd sym = symmetrized_laplacian_dense(d);
      double norm = asym_error_norm(sym, laplacian_dense(d), lap).value;
      CHECK(norm <= 1.0 / (n * n));

      // Potential-function counter: components touched per bucket <= 2n.
      CHECK(res.touched_components_max_bucket <= 2LL * n);
      // Vertex totals of the shrunk classes against the n log^2 n shape.
      double logn = std::log2(std::max(2, n));
      CHECK(static_cast<double>(res.class_vertex_total) <= 4.0 * n * logn * logn);
    }
  }
}
