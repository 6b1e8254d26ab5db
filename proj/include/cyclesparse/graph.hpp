#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cyclesparse {

using Vertex = std::int32_t;
using EdgeId = std::int32_t;
using Weight = std::int64_t;

// "Poly bounded" cap; keeps binary_split and all degree arithmetic exact.
inline constexpr Weight kWeightCap = Weight{1} << 62;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Edge {
  EdgeId id;
  Vertex u;
  Vertex v;
  Weight w;
};

// Undirected multigraph with positive integer weights and dense edge ids.
// Parallel edges are first-class; self-loops are rejected. Immutable after
// construction: operations return new graphs.
class WeightedMultigraph {
 public:
  WeightedMultigraph() = default;
  WeightedMultigraph(int n, std::vector<Edge> edges);

  // Assigns dense ids 0..m-1 in input order.
  static WeightedMultigraph from_edges(
      int n, const std::vector<std::tuple<Vertex, Vertex, Weight>>& edges);

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId id) const { return edges_.at(static_cast<std::size_t>(id)); }

  std::vector<Weight> weighted_degrees() const;
  Weight total_weight() const;

  // Incident edge ids per vertex, ascending id order.
  std::vector<std::vector<EdgeId>> adjacency() const;

  // Component label per vertex (labels are 0..c-1 in first-seen order).
  std::vector<int> components() const;
  int component_count() const;

  bool has_uniform_weight() const;
  bool is_simple() const;  // no parallel edges

  // Subgraph induced on `vertices` (order defines the new vertex ids).
  // Returns the subgraph plus old edge id per new edge.
  std::pair<WeightedMultigraph, std::vector<EdgeId>> induced_subgraph(
      const std::vector<Vertex>& vertices) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

struct DirectedEdge {
  EdgeId id;
  Vertex tail;
  Vertex head;
  Weight w;
};

// Directed weighted multigraph. Eulerian iff in-degree == out-degree at
// every vertex (exact integer test).
class DirectedGraph {
 public:
  DirectedGraph() = default;
  DirectedGraph(int n, std::vector<DirectedEdge> edges);

  static DirectedGraph from_edges(
      int n, const std::vector<std::tuple<Vertex, Vertex, Weight>>& edges);

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<DirectedEdge>& edges() const { return edges_; }
  const DirectedEdge& edge(EdgeId id) const {
    return edges_.at(static_cast<std::size_t>(id));
  }

  std::vector<Weight> out_degrees() const;
  std::vector<Weight> in_degrees() const;
  bool is_eulerian() const;

  // Undirected support with the directed weights kept as-is. Each directed
  // edge maps to one undirected edge with the same id. This is twice the
  // paper's half-weight undirectification; leverage scores w_e * r_e are
  // scale-invariant, so estimate consumers use it directly.
  WeightedMultigraph undirected_support_doubled() const;

 private:
  int n_ = 0;
  std::vector<DirectedEdge> edges_;
};

// --- graph-core operations -------------------------------------------------

// Edge-list text format: optional header "# n=<int> directed=<0|1>", then
// one "u v w" per line, ASCII decimal, LF-terminated.
WeightedMultigraph load_undirected(const std::string& text);
DirectedGraph load_directed(const std::string& text);
bool sniff_directed(const std::string& text);  // header says directed=1

std::string save_graph(const WeightedMultigraph& g);
std::string save_graph(const DirectedGraph& g);
// JSON form: {"n": ..., "directed": 0|1, "edges": [[u, v, w], ...]}.
std::string save_graph_json(const WeightedMultigraph& g);
std::string save_graph_json(const DirectedGraph& g);

std::vector<Weight> weighted_degrees(const WeightedMultigraph& g);
// Directed variant returns (in, out).
std::pair<std::vector<Weight>, std::vector<Weight>> weighted_degrees(
    const DirectedGraph& g);

// Splits g by binary weight representation: result[j] = (i, G_i) where every
// edge of G_i has weight exactly 2^i, and sum_i G_i == g edge-for-edge.
std::vector<std::pair<int, WeightedMultigraph>> binary_split(
    const WeightedMultigraph& g);
std::vector<std::pair<int, DirectedGraph>> binary_split(const DirectedGraph& g);

// Merges equal-weight parallel edges pairwise (w + w = 2w) until no two
// edges of the same weight span the same pair. Laplacian and degrees
// unchanged.
WeightedMultigraph combine_parallel_edges(const WeightedMultigraph& g);
// Directed version merges equal-weight edges with the same tail and head.
DirectedGraph combine_parallel_edges(const DirectedGraph& g);

Weight checked_weight_sum(Weight a, Weight b);

}  // namespace cyclesparse
