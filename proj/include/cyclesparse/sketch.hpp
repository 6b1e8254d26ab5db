#pragma once

#include <Eigen/Dense>

#include "cyclesparse/graph.hpp"
#include "cyclesparse/prng.hpp"
#include "cyclesparse/sparsify.hpp"

namespace cyclesparse {

struct SketchConfig {
  double eps = 0.3;
  // alpha = alpha_scale / eps; the degree threshold above which vertices are
  // eligible for cycle sampling.
  double alpha_scale = 4.0;
  double phi = 0;  // 0 = derive as 1/(2*gamma) from the measured gamma
  int max_rounds_mult = 4;  // cap = mult * ceil(log2 n)
  CycleAlgo cycle_algo = CycleAlgo::kNaive;
  int short_l = 1;
  int short_k = 16;
  ShortCycleOptions short_opts;
  std::uint64_t seed = 0;
};

struct SketchRoundStats {
  long long edges_before = 0;
  long long edges_after = 0;
  double alpha = 0;
  double phi = 0;
  double measured_gamma = 0;
  long long boundary_edges = 0;
};

struct SketchReport {
  std::vector<SketchRoundStats> rounds;
  bool degrees_exact = false;
  long long final_edges = 0;
};

// Sampling pass over one unit-weight simple graph: edges at vertices below
// the degree threshold are kept verbatim; the rest go through bipartition,
// cycle decomposition, and odd/even sampling. Output weights are 1 or 2.
WeightedMultigraph decompose_and_sample(const WeightedMultigraph& g, double alpha,
                                        const SparsifyConfig& cycle_cfg, Prng& rng);

// Expander-partitioned degree-preserving sketch with eps (not eps^2) error
// for a fixed vector. Degrees exact; certificate at sqrt(eps) scale.
WeightedMultigraph spectral_sketch(const WeightedMultigraph& g,
                                   const SketchConfig& cfg,
                                   SketchReport* report = nullptr);

struct InverseFormCheck {
  bool hypothesis_spectral = false;   // P ~ Q within sqrt(eps)
  bool hypothesis_quadratic = false;  // x'P+x ~ (P+x)'Q(P+x) within eps
  bool conclusion = false;            // x'Q+x / x'P+x within e^{+-7 eps}
  double ratio = 0;
  double hyp2_ratio = 0;
};

InverseFormCheck inverse_form_check(const WeightedMultigraph& p,
                                    const WeightedMultigraph& q,
                                    const Eigen::VectorXd& x, double eps);

}  // namespace cyclesparse
