#pragma once

#include <Eigen/Dense>

#include "cyclesparse/graph.hpp"
#include "cyclesparse/prng.hpp"
#include "cyclesparse/rational.hpp"

namespace cyclesparse {

// Complete bipartite graph between vertex lists a and b, uniform edge weight
// 2^log2w. Sides keep list order; determinism relies on it.
struct Biclique {
  std::vector<Vertex> a;
  std::vector<Vertex> b;
  int log2w = 0;
};

// Implicit dense-graph representation; size is measured in vertices.
struct BicliqueCollection {
  int n = 0;
  std::vector<Biclique> parts;

  long long vertex_total() const;  // n(K)
  long long edge_total() const;    // m(K), multiplicities included
  // Weighted degree per vertex (exact).
  std::vector<Rat> degrees() const;
  bool unit_weight() const;
};

// Graph with exact rational weights; the output type of the samplers.
struct RatEdge {
  Vertex u;
  Vertex v;
  Rat w;
};

struct RationalGraph {
  int n = 0;
  std::vector<RatEdge> edges;

  std::vector<Rat> weighted_degrees() const;
  Eigen::MatrixXd laplacian_dense() const;
  long long edge_count() const { return static_cast<long long>(edges.size()); }
};

// Materializes G(K) exactly.
RationalGraph materialize(const BicliqueCollection& k);

std::string biclique_collection_to_json(const BicliqueCollection& k);
BicliqueCollection biclique_collection_from_json(const std::string& text, int n);

struct VertexWeightedBiclique;
// Weighted form of the same schema: "w" carries {"vertex_weights": {...}}.
std::string weighted_bicliques_to_json(const std::vector<VertexWeightedBiclique>& ks);
std::vector<VertexWeightedBiclique> weighted_bicliques_from_json(const std::string& text);

// Exact edge partition of one biclique into balanced bicliques with 2^i
// vertices per side.
std::vector<Biclique> make_balanced(const Biclique& k);

// s uniformly random perfect matchings per biclique, each with weight
// (r/s) * 2^log2w. All bicliques must be balanced with the same r.
RationalGraph sample_matchings(const BicliqueCollection& kr, long long s, Prng& rng);

struct SampleBicliquesOptions {
  // Alternative matching count max(eps^-1/2, r eps^-3/2 / d); off by default.
  bool alternative_s = false;
};

struct SampleBicliquesDiag {
  long long explicit_low_degree_edges = 0;
  long long explicit_small_r_edges = 0;
  long long sampled_edges = 0;
};

// Low-degree edges kept explicitly, the rest bucketed by the power-of-two of
// the min endpoint degree, balanced, and matched-sampled. Expectation is
// exactly G(K_B).
RationalGraph sample_bicliques(const BicliqueCollection& kb, double eps, Prng& rng,
                               const SampleBicliquesOptions& opts = {},
                               SampleBicliquesDiag* diag = nullptr);

// Restriction of k to each piece, plus the boundary edges re-expressed as a
// biclique collection with O(n log n) total vertices.
struct BicliqueSplit {
  std::vector<BicliqueCollection> per_piece;
  BicliqueCollection boundary;
};
BicliqueSplit biclique_split_by_partition(
    const BicliqueCollection& k, const std::vector<std::vector<Vertex>>& pieces);

struct ImplicitPartitionOptions {
  double crude_cs = 48;  // matchings per biclique = ceil(crude_cs * log2 n)
  SampleBicliquesOptions sample;
};

struct ImplicitPartitionResult {
  std::vector<std::vector<Vertex>> pieces;
  RationalGraph sketch;
  long long boundary_edge_total = 0;  // m(K) across pieces
  double measured_gamma = 0;
};

// Crude matching sparsifier, expander partition of it, then per-piece
// biclique sampling.
ImplicitPartitionResult implicit_partition_and_sample(
    const BicliqueCollection& kr, double eps, double phi, Prng& rng,
    const ImplicitPartitionOptions& opts = {});

// q-level recursion: balance, partition-and-sample, recurse on the boundary.
// q = 0 materializes explicitly.
RationalGraph implicit_sketch_bicliques(const BicliqueCollection& kb, double eps,
                                        double phi, int q, Prng& rng,
                                        const ImplicitPartitionOptions& opts = {});

// --- Schur complement squaring ------------------------------------------------

struct VertexWeightedClique {
  std::vector<Vertex> support;
  std::vector<double> w;  // edge (x, y) has weight w_x * w_y
};

struct VertexWeightedBiclique {
  std::vector<Vertex> a;
  std::vector<Vertex> b;
  std::vector<double> wa;
  std::vector<double> wb;
};

struct SchurBlocks {
  std::vector<Vertex> f;
  std::vector<Vertex> c;
};

struct SchurStepResult {
  SchurBlocks blocks;
  // One clique per eliminated vertex f, split by side: edges inside F,
  // edges inside C, and the F-C biclique. Weights A_xf / sqrt(D_ff).
  std::vector<VertexWeightedClique> cliques_on_f;
  std::vector<VertexWeightedClique> cliques_on_c;
  std::vector<VertexWeightedBiclique> bicliques_fc;
  // Explicit terms: original F-C edges once, C-C edges doubled.
  std::vector<std::tuple<Vertex, Vertex, double>> boundary_terms;

  Eigen::MatrixXd reconstruct_dense(int n) const;
};

// Dense Schur complement onto C (rows/cols ordered as in `c`).
Eigen::MatrixXd schur_complement_dense(const Eigen::MatrixXd& l,
                                       const std::vector<Vertex>& f,
                                       const std::vector<Vertex>& c);

// Product-weight families of the one-step squared Laplacian. Requires every
// F vertex to have positive degree.
SchurStepResult schur_step_cliques(const WeightedMultigraph& g,
                                   const std::vector<Vertex>& f,
                                   const std::vector<Vertex>& c);

// Greedy 1.1-diagonally-dominant subset: peels F vertices until each keeps
// at least 10% of its weighted degree towards C.
std::pair<std::vector<Vertex>, std::vector<Vertex>> greedy_dd_split(
    const WeightedMultigraph& g, const std::vector<Vertex>& f_candidates);

std::vector<VertexWeightedBiclique> clique_to_bicliques(const VertexWeightedClique& k);

// Per-vertex binary expansion, truncated after `bits` leading bits; outputs
// uniform power-of-two bicliques.
std::vector<Biclique> biclique_to_unit(const VertexWeightedBiclique& k, int bits);

Eigen::MatrixXd laplacian_dense(const VertexWeightedClique& k, int n);
Eigen::MatrixXd laplacian_dense(const VertexWeightedBiclique& k, int n);

}  // namespace cyclesparse
