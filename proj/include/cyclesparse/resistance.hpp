#pragma once

#include "cyclesparse/graph.hpp"
#include "cyclesparse/linalg.hpp"
#include "cyclesparse/prng.hpp"

namespace cyclesparse {

struct ResistanceEstimates {
  std::vector<double> r;  // per edge, indexed by edge id
  enum class Method { kExact, kProjected } method = Method::kExact;
  double theta = 0;  // claimed multiplicative accuracy exponent
};

// chi_uv^T L^+ chi_uv per query pair. Cross-component pairs are errors.
std::vector<double> exact_effective_resistances(
    const WeightedMultigraph& g, const std::vector<std::pair<Vertex, Vertex>>& pairs);

// Exact per-edge resistances (dense pseudoinverse when n <= kDenseLimit,
// solver otherwise).
ResistanceEstimates exact_edge_resistances(const WeightedMultigraph& g);

// Random-projection sketch: ceil(24 ln n / theta^2) +-1 projections, one
// Laplacian solve each; per-edge values within e^{+-theta} of exact with
// high empirical probability.
ResistanceEstimates approx_effective_resistances(const WeightedMultigraph& g,
                                                 double theta, Prng& rng);

// sum_e w_e r_e - (n - c); zero for exact estimates.
double foster_residual(const WeightedMultigraph& g, const ResistanceEstimates& est);

}  // namespace cyclesparse
