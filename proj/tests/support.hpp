#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>
#include <vector>

#include "cyclesparse/graph.hpp"
#include "cyclesparse/prng.hpp"

namespace testsupport {

using namespace cyclesparse;

inline WeightedMultigraph path_graph(int n, Weight w = 1) {
  std::vector<std::tuple<Vertex, Vertex, Weight>> es;
  for (int i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1, w);
  return WeightedMultigraph::from_edges(n, es);
}

inline WeightedMultigraph cycle_graph(int n, Weight w = 1) {
  std::vector<std::tuple<Vertex, Vertex, Weight>> es;
  for (int i = 0; i < n; ++i) es.emplace_back(i, (i + 1) % n, w);
  return WeightedMultigraph::from_edges(n, es);
}

inline WeightedMultigraph complete_graph(int n, Weight w = 1) {
  std::vector<std::tuple<Vertex, Vertex, Weight>> es;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) es.emplace_back(i, j, w);
  }
  return WeightedMultigraph::from_edges(n, es);
}

inline WeightedMultigraph star_graph(int leaves, Weight w = 1) {
  std::vector<std::tuple<Vertex, Vertex, Weight>> es;
  for (int i = 1; i <= leaves; ++i) es.emplace_back(0, i, w);
  return WeightedMultigraph::from_edges(leaves + 1, es);
}

// Erdos-Renyi G(n, p), connected retries optional.
inline WeightedMultigraph random_graph(int n, double p, Prng& rng,
                                       bool require_connected = false) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<std::tuple<Vertex, Vertex, Weight>> es;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.real01() < p) es.emplace_back(i, j, 1);
      }
    }
    WeightedMultigraph g = WeightedMultigraph::from_edges(n, es);
    if (!require_connected || g.component_count() == 1) return g;
  }
  throw std::runtime_error("random_graph: no connected sample");
}

// Random multigraph: m edges drawn uniformly with repetition allowed.
inline WeightedMultigraph random_multigraph(int n, int m, Prng& rng,
                                            Weight wmax = 1) {
  std::vector<std::tuple<Vertex, Vertex, Weight>> es;
  for (int i = 0; i < m; ++i) {
    Vertex u = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
    Vertex v = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
    while (v == u) v = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
    Weight w = wmax <= 1 ? 1 : static_cast<Weight>(1 + rng.below(static_cast<std::uint64_t>(wmax)));
    es.emplace_back(u, v, w);
  }
  return WeightedMultigraph::from_edges(n, es);
}

// d-regular via the pairing model with greedy repair: the first stub pairs
// with the earliest later stub that creates neither a loop nor a duplicate.
inline WeightedMultigraph random_regular(int n, int d, Prng& rng) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<int> stubs;
    for (int v = 0; v < n; ++v) {
      for (int i = 0; i < d; ++i) stubs.push_back(v);
    }
    rng.shuffle(stubs);
    std::set<std::pair<int, int>> seen;
    std::vector<std::tuple<Vertex, Vertex, Weight>> es;
    bool ok = true;
    while (!stubs.empty()) {
      int a = stubs.back();
      stubs.pop_back();
      bool paired = false;
      for (std::size_t j = stubs.size(); j-- > 0;) {
        int b = stubs[j];
        if (b == a) continue;
        auto key = std::minmax(a, b);
        if (seen.count({key.first, key.second})) continue;
        seen.insert({key.first, key.second});
        es.emplace_back(a, b, 1);
        stubs.erase(stubs.begin() + static_cast<std::ptrdiff_t>(j));
        paired = true;
        break;
      }
      if (!paired) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    WeightedMultigraph g = WeightedMultigraph::from_edges(n, es);
    if (g.component_count() == 1) return g;
  }
  throw std::runtime_error("random_regular: sampling failed");
}

// Union of `cycles` random directed cycles; Eulerian by construction.
inline DirectedGraph random_eulerian(int n, int cycles, Prng& rng,
                                     int min_len = 3, int max_len = 0) {
  if (max_len <= 0) max_len = n;
  std::vector<std::tuple<Vertex, Vertex, Weight>> es;
  for (int c = 0; c < cycles; ++c) {
    int len = min_len + static_cast<int>(rng.below(
                            static_cast<std::uint64_t>(max_len - min_len + 1)));
    std::vector<Vertex> vs(static_cast<std::size_t>(n));
    std::iota(vs.begin(), vs.end(), 0);
    rng.shuffle(vs);
    vs.resize(static_cast<std::size_t>(std::min(len, n)));
    for (std::size_t i = 0; i < vs.size(); ++i) {
      es.emplace_back(vs[i], vs[(i + 1) % vs.size()], 1);
    }
  }
  return DirectedGraph::from_edges(n, es);
}

// Two cliques of size n/2 joined by one edge.
inline WeightedMultigraph dumbbell(int n) {
  int half = n / 2;
  std::vector<std::tuple<Vertex, Vertex, Weight>> es;
  for (int i = 0; i < half; ++i) {
    for (int j = i + 1; j < half; ++j) es.emplace_back(i, j, 1);
  }
  for (int i = half; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) es.emplace_back(i, j, 1);
  }
  es.emplace_back(0, half, 1);
  return WeightedMultigraph::from_edges(n, es);
}

// Two cliques of size n/2 plus a perfect matching between them.
inline WeightedMultigraph cliques_plus_matching(int n) {
  int half = n / 2;
  std::vector<std::tuple<Vertex, Vertex, Weight>> es;
  for (int i = 0; i < half; ++i) {
    for (int j = i + 1; j < half; ++j) es.emplace_back(i, j, 1);
  }
  for (int i = half; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) es.emplace_back(i, j, 1);
  }
  for (int i = 0; i < half; ++i) es.emplace_back(i, half + i, 1);
  return WeightedMultigraph::from_edges(n, es);
}

}  // namespace testsupport
