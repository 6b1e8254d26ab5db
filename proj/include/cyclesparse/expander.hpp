#pragma once

#include <Eigen/Dense>

#include "cyclesparse/graph.hpp"
#include "cyclesparse/prng.hpp"

namespace cyclesparse {

struct ExpanderPartition {
  std::vector<std::vector<Vertex>> pieces;  // disjoint, cover V
  std::vector<EdgeId> boundary_edges;       // edges inside no piece
  double phi_target = 0;
  std::vector<double> certificates;  // lambda2 lower bound per piece

  // Realized analogue of the decomposition overhead: |boundary| / (phi * m).
  double measured_gamma(int m) const {
    if (m == 0 || phi_target == 0) return 0;
    return static_cast<double>(boundary_edges.size()) /
           (phi_target * static_cast<double>(m));
  }
};

struct EdgeExpanderSplit {
  std::vector<EdgeId> sparse_part;                 // E^s
  std::vector<std::vector<Vertex>> dense_components;
  std::vector<double> certificates;  // lambda2 of each dense component
  double alpha = 0;
};

struct ConductanceResult {
  double value = 0;
  bool exact = false;  // brute force over subsets (|S| <= 20) vs sweep bound
};

// Conductance of S per the full-graph degree convention. Exact minimization
// for |S| <= 20, sweep-cut upper bound (flagged) otherwise.
ConductanceResult conductance(const WeightedMultigraph& g,
                              const std::vector<Vertex>& s);

// Recursive spectral bisection: certify lambda2 >= 2*phi (full-graph
// degrees) or split along the sweep cut of the second eigenvector and
// recurse. Pieces of <= 2 vertices are certified trivially.
ExpanderPartition expander_decompose(const WeightedMultigraph& g, double phi);

// Edge-expansion flavored split: dense components carry a lambda2-based
// conductance certificate which, with the component min degree, certifies
// edge expansion >= alpha. Pieces that bottom out at <= 2 vertices go to E^s.
EdgeExpanderSplit ns_style_decompose(const WeightedMultigraph& g, double alpha);

// Endpoint of a lazy walk: stay put with probability 1/2, otherwise move
// along a uniformly random incident edge instance.
Vertex lazy_random_walk(const WeightedMultigraph& g, Vertex start, int steps,
                        Prng& rng);
// Same but with a prebuilt adjacency (hot loops).
Vertex lazy_random_walk(const std::vector<std::vector<EdgeId>>& adj,
                        const std::vector<Edge>& edges, Vertex start, int steps,
                        Prng& rng);

// lambda2 of the degree-normalized Laplacian of g[piece] (full-graph
// degrees): dense solver for small pieces, deflated power iteration above
// the dense limit.
double piece_lambda2(const WeightedMultigraph& g, const std::vector<Vertex>& piece,
                     Eigen::VectorXd* second_vector = nullptr);

}  // namespace cyclesparse
