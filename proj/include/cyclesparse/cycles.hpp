#pragma once

#include <string>

#include "cyclesparse/graph.hpp"
#include "cyclesparse/prng.hpp"

namespace cyclesparse {

// Edge-disjoint cycles (closed walks with distinct edge ids) plus leftover
// edges; together they cover the source graph's edges exactly once.
struct CycleDecomposition {
  std::vector<std::vector<EdgeId>> cycles;
  std::vector<EdgeId> extras;
  int length_bound = 0;        // L
  long long extras_bound = 0;  // mhat
};

struct CycleValidation {
  bool ok = true;
  std::string message;
};

// Independent checker: edge conservation, edge-disjointness, closed-walk
// structure, and the claimed (mhat, L) bounds. Shares no code with the
// constructors.
CycleValidation validate_cycle_decomposition(const WeightedMultigraph& g,
                                             const CycleDecomposition& cd);
// Checks one edge-id sequence forms a closed walk with distinct edges.
bool is_closed_walk(const WeightedMultigraph& g, const std::vector<EdgeId>& cycle);

std::string cycle_decomposition_to_json(const CycleDecomposition& cd);

// Peel degree <= 2, then BFS to the first non-tree edge; parallel pairs are
// matched into 2-cycles up front. Returns a (2n, 2*ceil(log2 n)) decomposition.
CycleDecomposition naive_cycle_decomposition(const WeightedMultigraph& g);

struct BoundedDegreeGraph {
  WeightedMultigraph h;
  std::vector<Vertex> vertex_map;  // h vertex -> g vertex
  std::vector<EdgeId> edge_map;    // h edge -> g edge
};

// Keeps the first min(delta, deg) incident edges per vertex, then splits
// vertices of degree > 2*delta. Cycles in h map to circuits in g.
BoundedDegreeGraph extract_bounded_degree(const WeightedMultigraph& g, int delta,
                                          bool enforce_min_degree = true);

// One cycle of G/S: either already closed in G, or an open path between two
// distinct S-vertices (its image closes through the contracted vertex).
struct PartialCycle {
  std::vector<EdgeId> edges;
  bool closed = false;
  Vertex s1 = -1;  // attachment points for open cycles
  Vertex s2 = -1;
};

struct PartialCycleDecomposition {
  std::vector<Vertex> targets;  // S
  std::vector<PartialCycle> cycles;
  int length_bound = 0;  // l-hat
};

struct MoveEdgesOptions {
  double walk_len_mult = 10.0;     // steps = mult * phi^-2 * log2 n
  int walks_per_endpoint = 4;      // times k
  int max_walk_steps = 200000;
  int retry_budget = 20;
  int halve_after = 10;            // halve the required count past this many retries
  double gamma_ns = 1.0;           // stands in for the decomposition overhead
};

struct MoveEdgesDiagnostics {
  std::vector<std::string> warnings;
  int retries = 0;
  bool count_halved = false;
  long long required_cycles = 0;
  long long found_cycles = 0;
  long long max_edge_congestion = 0;
  double measured_gamma = 0;  // |E^s| / (alpha * n) from the inner split
  double alpha = 0;
};

struct MoveEdgesResult {
  std::vector<Vertex> targets;
  PartialCycleDecomposition partial;
  MoveEdgesDiagnostics diag;
};

// Pair parallel edges, pick the ceil(n/k) top-degree vertices as S, walk
// from both endpoints of each edge until S is hit, keep loop-erased paths,
// then greedily select edge-disjoint cycles (shortest first, ties by first
// edge id). Retries with fresh walks until the count threshold is met.
MoveEdgesResult move_edges_expander(const WeightedMultigraph& g, double phi,
                                    int k, Prng& rng,
                                    const MoveEdgesOptions& opts = {});

// Edge-expander split with alpha = d_min / (4 gamma); small components go
// through the peel-and-BFS decomposition, large ones through the walk mover.
MoveEdgesResult move_edges(const WeightedMultigraph& g, int k, Prng& rng,
                           const MoveEdgesOptions& opts = {});

// Auxiliary graph on S built from the open cycles of a partial
// decomposition; edge i of `gs` corresponds to open cycle `open_cycle_index[i]`.
struct AuxGraph {
  WeightedMultigraph gs;
  std::vector<Vertex> s_vertices;       // gs vertex -> g vertex
  std::vector<std::size_t> open_cycle_index;
};
AuxGraph build_aux_graph(const WeightedMultigraph& g,
                         const PartialCycleDecomposition& partial);

// Substitutes each auxiliary edge of a cycle on G_S with its recorded path,
// yielding circuits (closed walks with distinct edges) in g.
std::vector<std::vector<EdgeId>> extend_partial(
    const WeightedMultigraph& g, const std::vector<Vertex>& s,
    const PartialCycleDecomposition& partial, const AuxGraph& aux,
    const std::vector<std::vector<EdgeId>>& cycles_on_gs);

struct ShortCycleOptions {
  double delta_factor = 4.0;  // delta = delta_factor * k
  bool paper_delta = false;   // use the (64e6 g^4 log^2 2n)^l k formula instead
  MoveEdgesOptions move;
};

// Recursive decomposition: peel below delta, extract a bounded-degree core,
// port edges onto few vertices with random walks, recurse on the ported
// graph, and extend the recursive cycles back. l = 0 or n < k falls back to
// the peel-and-BFS routine.
CycleDecomposition short_cycle_decomposition(const WeightedMultigraph& g, int l,
                                             int k, Prng& rng,
                                             const ShortCycleOptions& opts = {});

}  // namespace cyclesparse
