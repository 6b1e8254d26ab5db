#pragma once

#include <Eigen/Dense>

#include "cyclesparse/graph.hpp"
#include "cyclesparse/rational.hpp"

namespace cyclesparse {

// Directed graph with exact (possibly negative) rational weights. Negative
// entries only appear in the sparse bookkeeping component produced by the
// reductions; degree identities stay exact either way.
struct DirectedRatEdge {
  Vertex tail;
  Vertex head;
  Rat w;
};

struct DirectedRationalGraph {
  int n = 0;
  std::vector<DirectedRatEdge> edges;

  std::vector<Rat> in_degrees() const;
  std::vector<Rat> out_degrees() const;
  Eigen::MatrixXd laplacian_dense() const;
  void add(Vertex tail, Vertex head, const Rat& w);  // accumulates by (tail, head)
  void compact();                                    // merge duplicates, drop zeros
};

// Exact edge partition into directed graphs whose undirected supports are
// bipartite; recursion on both sides of a greedy bipartition.
std::vector<DirectedGraph> decompose_bipartite_dir(const DirectedGraph& g);

// Moves one unit of weight from (u -> x1, x2 -> x3) to (u -> x3, x2 -> x1)
// (or the mirrored variant for an edge x1 -> u). In/out degrees unchanged;
// the Laplacian perturbation is the rank-one chi_{x1 x3} chi_{u x2}^T.
// Both directions of x1x2 and x2x3 must carry weight >= threshold
// (default n^4).
DirectedGraph local_move(const DirectedGraph& g, Vertex u, Vertex x1, Vertex x2,
                         Vertex x3, Weight threshold = 0, bool reverse = false);

// Perturbation ledger for the almost-equality contract: every recorded op
// perturbs the Laplacian by at most 1/poly(n); the measured norm of the
// total must stay below n^-delta.
struct AlmostEqualBudget {
  double delta = 2.0;
  long long tree_additions = 0;   // scaled support-tree edges added
  long long two_hop_moves = 0;    // local-move applications
  long long tree_absorptions = 0; // trailing weights merged into tree edges
};

struct PowersOfTwoResult {
  // Scaled support tree with every adjustment folded in, and the tree as
  // added. classes + (tree - tree_base) reproduces the input degrees exactly.
  DirectedRationalGraph tree;
  DirectedRationalGraph tree_base;
  std::vector<std::pair<int, DirectedGraph>> classes;  // (i, uniform 2^i class)
  int kept_bits = 0;
  long long rerouted_edges = 0;
  AlmostEqualBudget budget;
};

// Splits weights into power-of-two classes keeping ceil(10 log2 n) leading
// bits; trailing bits are rerouted along a scaled maximum-weight spanning
// tree by repeated two-hop moves and absorbed into the tree. The exposed op
// rejects disconnected supports; internal callers work per part and pass
// require_connected = false (the tree becomes a forest).
PowersOfTwoResult reduce_powers_of_two(const DirectedGraph& g,
                                       bool require_connected = true);

struct ReduceToUnitResult {
  // Bucket spanning trees (full weight, adjustments folded in) plus the net
  // support-tree perturbations. h_sparse + classes has exactly the input's
  // in/out degrees.
  DirectedRationalGraph h_sparse;
  std::vector<std::pair<int, DirectedGraph>> classes;
  int xi = 0;
  long long touched_components_max_bucket = 0;  // max over buckets of sum t(i)
  long long class_vertex_total = 0;             // vertices across all H_i
  AlmostEqualBudget budget;
};

// Full reduction: bipartite decomposition, powers-of-two per part, then
// per-bucket (i mod xi) Kruskal-order component shrinking with two
// representatives per component per side. xi = 0 picks ceil(4 log2 n).
ReduceToUnitResult reduce_to_unit(const DirectedGraph& g, int xi = 0);

}  // namespace cyclesparse
