#pragma once

#include "cyclesparse/cycles.hpp"
#include "cyclesparse/graph.hpp"
#include "cyclesparse/prng.hpp"

namespace cyclesparse {

enum class CycleAlgo { kNaive, kShort };

struct SparsifyConfig {
  double eps = 0.5;
  double stop_constant = 8.0;  // C_stop
  CycleAlgo cycle_algo = CycleAlgo::kNaive;
  int short_l = 1;
  int short_k = 16;
  ShortCycleOptions short_opts;
  std::uint64_t seed = 0;
  // The paper-formula loop guard exceeds desk-scale edge counts; this forces
  // at least the given number of rounds so sampling actually happens.
  int force_rounds = 0;
  int max_rounds = 64;
  double estimate_theta = 0.4054651081081644;  // ln 1.5
  double refresh_drift = 0.2876820724517809;   // ln(4/3)
};

struct RoundStats {
  long long edges_before = 0;
  long long edges_after = 0;
  double predicted_error = 0;  // sqrt(n L log n / m) style term
  double measured_certificate = -1;  // -1 when not measured
};

struct SparsifyReport {
  std::vector<RoundStats> rounds;
  bool degrees_exact = false;
  double certificate_eps = 0;  // final measured certificate (when available)
  double alpha_used = 0;
  long long stop_threshold = 0;
  int estimate_refreshes = 0;
};

// Vertex sides (0/1) with every vertex having at least as much incident
// weight across the cut as inside its side; cut weight >= half the total.
std::vector<char> greedy_bipartition(const WeightedMultigraph& g);

// Picks the odd-indexed or even-indexed half of an even closed walk, each
// with probability 1/2. Returned ids are the kept half; callers double their
// weights. Uniform-weight cycles only.
std::vector<EdgeId> sample_even_cycle(const WeightedMultigraph& g,
                                      const std::vector<EdgeId>& cycle, Prng& rng);

// One sparsification round: keep high-leverage edges (w_e r_e >= 4n/m),
// bipartition, per-class cycle decomposition, odd/even sampling with doubled
// weights, then parallel-edge renormalization. Degrees preserved exactly.
WeightedMultigraph sparsify_once(const WeightedMultigraph& g,
                                 const std::vector<double>& estimates,
                                 const SparsifyConfig& cfg, Prng& rng,
                                 RoundStats* stats = nullptr);

WeightedMultigraph degree_preserving_sparsify(const WeightedMultigraph& g,
                                              const SparsifyConfig& cfg,
                                              SparsifyReport* report = nullptr);

// Directed analogue: keeps the clockwise or counterclockwise side of each
// cycle (doubled). Returned ids are the kept directed edges.
std::vector<EdgeId> sample_directed_cycle(const DirectedGraph& g,
                                          const std::vector<EdgeId>& cycle,
                                          Prng& rng);

DirectedGraph directed_sparsify_once(const DirectedGraph& g,
                                     const std::vector<double>& estimates,
                                     const SparsifyConfig& cfg, Prng& rng,
                                     RoundStats* stats = nullptr);

DirectedGraph eulerian_sparsify(const DirectedGraph& g, const SparsifyConfig& cfg,
                                SparsifyReport* report = nullptr);

// Shared helper: run the configured cycle decomposition on one weight class.
CycleDecomposition run_cycle_algo(const WeightedMultigraph& cls,
                                  const SparsifyConfig& cfg, Prng& rng);

}  // namespace cyclesparse
