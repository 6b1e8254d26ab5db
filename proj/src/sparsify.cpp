#include "cyclesparse/sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cyclesparse/linalg.hpp"
#include "cyclesparse/resistance.hpp"

namespace cyclesparse {

namespace {

double log2n(int n) { return std::max(1.0, std::log2(static_cast<double>(std::max(2, n)))); }

}  // namespace

std::vector<char> greedy_bipartition(const WeightedMultigraph& g) {
  const int n = g.vertex_count();
  std::vector<char> side(static_cast<std::size_t>(n), 0);
  auto adj = g.adjacency();
  // Alternate sides by vertex id as a start, then flip any vertex with more
  // same-side than cross-side incident weight until none remains.
  for (Vertex v = 0; v < n; ++v) side[static_cast<std::size_t>(v)] = static_cast<char>(v & 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (Vertex v = 0; v < n; ++v) {
      Weight same = 0, cross = 0;
      for (EdgeId id : adj[static_cast<std::size_t>(v)]) {
        const Edge& e = g.edge(id);
        Vertex o = e.u == v ? e.v : e.u;
        if (side[static_cast<std::size_t>(o)] == side[static_cast<std::size_t>(v)]) {
          same += e.w;
        } else {
          cross += e.w;
        }
      }
      if (same > cross) {
        side[static_cast<std::size_t>(v)] ^= 1;
        changed = true;
      }
    }
  }
  return side;
}

std::vector<EdgeId> sample_even_cycle(const WeightedMultigraph& g,
                                      const std::vector<EdgeId>& cycle, Prng& rng) {
  if (cycle.size() % 2 != 0) {
    throw GraphError("sample_even_cycle: odd cycle");
  }
  for (EdgeId id : cycle) {
    if (g.edge(id).w != g.edge(cycle.front()).w) {
      throw GraphError("sample_even_cycle: non-uniform cycle weights");
    }
  }
  if (!is_closed_walk(g, cycle)) {
    throw GraphError("sample_even_cycle: not a closed walk");
  }
  bool odd_half = rng.coin();
  std::vector<EdgeId> kept;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    bool is_odd_indexed = (i % 2 == 0);  // first edge is "odd" (1-based)
    if (is_odd_indexed == odd_half) kept.push_back(cycle[i]);
  }
  return kept;
}

CycleDecomposition run_cycle_algo(const WeightedMultigraph& cls,
                                  const SparsifyConfig& cfg, Prng& rng) {
  if (cfg.cycle_algo == CycleAlgo::kNaive) {
    return naive_cycle_decomposition(cls);
  }
  return short_cycle_decomposition(cls, cfg.short_l, cfg.short_k, rng, cfg.short_opts);
}

WeightedMultigraph sparsify_once(const WeightedMultigraph& g,
                                 const std::vector<double>& estimates,
                                 const SparsifyConfig& cfg, Prng& rng,
                                 RoundStats* stats) {
  const int n = g.vertex_count();
  const long long m = g.edge_count();
  if (static_cast<long long>(estimates.size()) != m) {
    throw GraphError("sparsify_once: estimate vector length mismatch");
  }
  if (m == 0) return g;

  const double high_cut = 4.0 * static_cast<double>(n) / static_cast<double>(m);
  std::vector<char> in_rest(static_cast<std::size_t>(m), 0);
  std::vector<std::tuple<Vertex, Vertex, Weight>> kept;  // goes to H verbatim
  std::vector<EdgeId> rest;
  for (const Edge& e : g.edges()) {
    double lev = static_cast<double>(e.w) * estimates[static_cast<std::size_t>(e.id)];
    if (lev >= high_cut) {
      kept.emplace_back(e.u, e.v, e.w);
    } else {
      rest.push_back(e.id);
      in_rest[static_cast<std::size_t>(e.id)] = 1;
    }
  }

  // Bipartition of the low-leverage remainder.
  std::vector<Edge> rest_edges;
  for (EdgeId id : rest) {
    const Edge& e = g.edge(id);
    rest_edges.push_back(Edge{static_cast<EdgeId>(rest_edges.size()), e.u, e.v, e.w});
  }
  WeightedMultigraph grest(n, rest_edges);
  std::vector<char> side = greedy_bipartition(grest);

  std::vector<EdgeId> cut;  // rest-local ids crossing the bipartition
  for (const Edge& e : grest.edges()) {
    if (side[static_cast<std::size_t>(e.u)] != side[static_cast<std::size_t>(e.v)]) {
      cut.push_back(e.id);
    } else {
      kept.emplace_back(e.u, e.v, e.w);
    }
  }

  // Weight classes of the bipartition edges; weights are powers of two, so
  // grouping by weight is the binary split.
  std::map<Weight, std::vector<EdgeId>> classes;
  for (EdgeId id : cut) classes[grest.edge(id).w].push_back(id);

  double max_cycle_len = 0;
  std::uint64_t class_idx = 0;
  for (auto& [w, ids] : classes) {
    std::vector<Edge> cls_edges;
    for (EdgeId id : ids) {
      const Edge& e = grest.edge(id);
      cls_edges.push_back(Edge{static_cast<EdgeId>(cls_edges.size()), e.u, e.v, w});
    }
    WeightedMultigraph cls(n, cls_edges);
    Prng cls_rng = rng.split(class_idx++);
    CycleDecomposition cd = run_cycle_algo(cls, cfg, cls_rng);
    for (EdgeId id : cd.extras) {
      const Edge& e = cls.edge(id);
      kept.emplace_back(e.u, e.v, w);
    }
    std::uint64_t cyc_idx = 0;
    for (const auto& cyc : cd.cycles) {
      max_cycle_len = std::max(max_cycle_len, static_cast<double>(cyc.size()));
      Prng cyc_rng = cls_rng.split(cyc_idx++);
      std::vector<EdgeId> half = sample_even_cycle(cls, cyc, cyc_rng);
      for (EdgeId id : half) {
        const Edge& e = cls.edge(id);
        kept.emplace_back(e.u, e.v, checked_weight_sum(w, w));
      }
    }
  }

  WeightedMultigraph h =
      combine_parallel_edges(WeightedMultigraph::from_edges(n, kept));
  if (stats) {
    stats->edges_before = m;
    stats->edges_after = h.edge_count();
    double lmax = std::max(2.0, max_cycle_len);
    stats->predicted_error =
        std::sqrt(static_cast<double>(n) * lmax * log2n(n) / static_cast<double>(m));
  }
  return h;
}

namespace {

long long stop_threshold_undirected(const WeightedMultigraph& g,
                                    const SparsifyConfig& cfg) {
  const double n = g.vertex_count();
  const double ln = log2n(g.vertex_count());
  const double lbound = 2.0 * std::ceil(std::log2(std::max(2.0, n)));
  const double mhat = 2.0 * n;  // peel-and-BFS guarantee
  return static_cast<long long>(
      cfg.stop_constant * (mhat * ln + n * lbound * ln / (cfg.eps * cfg.eps)));
}

long long stop_threshold_directed(const DirectedGraph& g, const SparsifyConfig& cfg) {
  const double n = g.vertex_count();
  const double ln = log2n(g.vertex_count());
  const double lbound = 2.0 * std::ceil(std::log2(std::max(2.0, n)));
  const double mhat = 2.0 * n;
  return static_cast<long long>(
      cfg.stop_constant *
      (8.0 * mhat * ln + n * lbound * lbound * lbound * ln / (cfg.eps * cfg.eps)));
}

}  // namespace

WeightedMultigraph degree_preserving_sparsify(const WeightedMultigraph& g,
                                              const SparsifyConfig& cfg,
                                              SparsifyReport* report) {
  // Binary split, then renormalize so no duplicate weight spans a pair.
  std::vector<std::tuple<Vertex, Vertex, Weight>> split_edges;
  for (const Edge& e : g.edges()) {
    for (int bit = 0; bit < 63; ++bit) {
      if (e.w & (Weight{1} << bit)) {
        split_edges.emplace_back(e.u, e.v, Weight{1} << bit);
      }
    }
  }
  WeightedMultigraph cur = combine_parallel_edges(
      WeightedMultigraph::from_edges(g.vertex_count(), split_edges));

  const long long threshold = stop_threshold_undirected(g, cfg);
  if (report) report->stop_threshold = threshold;

  // Estimates are computed once and reused across rounds, keyed by endpoint
  // pair (rounds never create edges between fresh pairs). Refreshed from
  // scratch when accumulated drift exceeds the budget.
  Prng est_rng = Prng::stream(cfg.seed, "degree-sparsify", "estimates");
  Prng round_rng = Prng::stream(cfg.seed, "degree-sparsify", "rounds");
  std::map<std::pair<Vertex, Vertex>, double> pair_est;
  std::uint64_t est_round = 0;
  auto refresh = [&]() {
    Prng fresh = est_rng.split(est_round++);
    ResistanceEstimates est =
        approx_effective_resistances(cur, cfg.estimate_theta, fresh);
    pair_est.clear();
    for (const Edge& e : cur.edges()) {
      Vertex a = std::min(e.u, e.v), b = std::max(e.u, e.v);
      pair_est[{a, b}] = est.r[static_cast<std::size_t>(e.id)];
    }
  };
  auto estimates_for = [&](const WeightedMultigraph& graph) {
    std::vector<double> r(static_cast<std::size_t>(graph.edge_count()), 0.0);
    for (const Edge& e : graph.edges()) {
      Vertex a = std::min(e.u, e.v), b = std::max(e.u, e.v);
      auto it = pair_est.find({a, b});
      if (it == pair_est.end()) throw GraphError("estimate missing for edge pair");
      r[static_cast<std::size_t>(e.id)] = it->second;
    }
    return r;
  };
  if (cur.edge_count() > 0) refresh();
  double drift = 0;
  int round = 0;
  while ((cur.edge_count() >= threshold || round < cfg.force_rounds) &&
         round < cfg.max_rounds && cur.edge_count() > 0) {
    RoundStats rs;
    Prng rng = round_rng.split(static_cast<std::uint64_t>(round));
    WeightedMultigraph next = sparsify_once(cur, estimates_for(cur), cfg, rng, &rs);
    if (cur.vertex_count() <= 200) {
      rs.measured_certificate = certify_spectral_approx(cur, next).epsilon();
      drift += rs.measured_certificate;
    } else {
      drift += rs.predicted_error;
    }
    cur = next;
    if (report) report->rounds.push_back(rs);
    ++round;
    if (cur.edge_count() == 0) break;
    if (drift > cfg.refresh_drift) {
      refresh();
      drift = 0;
      if (report) ++report->estimate_refreshes;
    }
  }

  if (report) {
    report->degrees_exact = g.weighted_degrees() == cur.weighted_degrees();
    if (g.vertex_count() <= 200) {
      report->certificate_eps = certify_spectral_approx(g, cur).epsilon();
    }
  }
  return cur;
}

std::vector<EdgeId> sample_directed_cycle(const DirectedGraph& g,
                                          const std::vector<EdgeId>& cycle,
                                          Prng& rng) {
  if (cycle.empty()) return {};
  // Orient the closed walk; edges pointing along the traversal are
  // "clockwise". The stored traversal order fixes the convention; the walk
  // may start at either endpoint of the first edge.
  std::vector<char> clockwise(cycle.size(), 0);
  bool oriented = false;
  for (Vertex start : {g.edge(cycle.front()).tail, g.edge(cycle.front()).head}) {
    Vertex cur = start;
    bool ok = true;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const DirectedEdge& e = g.edge(cycle[i]);
      if (e.tail == cur) {
        clockwise[i] = 1;
        cur = e.head;
      } else if (e.head == cur) {
        clockwise[i] = 0;
        cur = e.tail;
      } else {
        ok = false;
        break;
      }
    }
    if (ok && cur == start) {
      oriented = true;
      break;
    }
  }
  if (!oriented) {
    throw GraphError("sample_directed_cycle: edges do not chain into a closed walk");
  }
  bool take_cw = rng.coin();
  std::vector<EdgeId> kept;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (static_cast<bool>(clockwise[i]) == take_cw) kept.push_back(cycle[i]);
  }
  return kept;
}

DirectedGraph directed_sparsify_once(const DirectedGraph& g,
                                     const std::vector<double>& estimates,
                                     const SparsifyConfig& cfg, Prng& rng,
                                     RoundStats* stats) {
  if (!g.is_eulerian()) {
    throw GraphError("directed_sparsify_once: input is not Eulerian");
  }
  const int n = g.vertex_count();
  const long long m = g.edge_count();
  if (static_cast<long long>(estimates.size()) != m) {
    throw GraphError("directed_sparsify_once: estimate vector length mismatch");
  }
  if (m == 0) return g;

  const double high_cut = 4.0 * static_cast<double>(n) / static_cast<double>(m);
  std::vector<std::tuple<Vertex, Vertex, Weight>> kept;
  std::map<Weight, std::vector<EdgeId>> classes;
  for (const DirectedEdge& e : g.edges()) {
    double lev = static_cast<double>(e.w) * estimates[static_cast<std::size_t>(e.id)];
    if (lev >= high_cut) {
      kept.emplace_back(e.tail, e.head, e.w);
    } else {
      classes[e.w].push_back(e.id);
    }
  }

  double max_cycle_len = 0;
  std::uint64_t class_idx = 0;
  for (auto& [w, ids] : classes) {
    // Undirected support of the class; same ids, so cycles map back 1:1.
    std::vector<Edge> support;
    std::vector<EdgeId> orig;
    for (EdgeId id : ids) {
      const DirectedEdge& e = g.edge(id);
      support.push_back(Edge{static_cast<EdgeId>(support.size()), e.tail, e.head, w});
      orig.push_back(id);
    }
    WeightedMultigraph cls(n, support);
    std::vector<DirectedEdge> cls_dir;
    for (std::size_t i = 0; i < orig.size(); ++i) {
      const DirectedEdge& e = g.edge(orig[i]);
      cls_dir.push_back(DirectedEdge{static_cast<EdgeId>(i), e.tail, e.head, w});
    }
    DirectedGraph dcls(n, cls_dir);

    Prng cls_rng = rng.split(class_idx++);
    CycleDecomposition cd = run_cycle_algo(cls, cfg, cls_rng);
    for (EdgeId id : cd.extras) {
      const DirectedEdge& e = g.edge(orig[static_cast<std::size_t>(id)]);
      kept.emplace_back(e.tail, e.head, w);
    }
    std::uint64_t cyc_idx = 0;
    for (const auto& cyc : cd.cycles) {
      max_cycle_len = std::max(max_cycle_len, static_cast<double>(cyc.size()));
      Prng cyc_rng = cls_rng.split(cyc_idx++);
      std::vector<EdgeId> half = sample_directed_cycle(dcls, cyc, cyc_rng);
      for (EdgeId id : half) {
        const DirectedEdge& e = dcls.edge(id);
        kept.emplace_back(e.tail, e.head, checked_weight_sum(w, w));
      }
    }
  }

  DirectedGraph h =
      combine_parallel_edges(DirectedGraph::from_edges(n, kept));
  if (stats) {
    stats->edges_before = m;
    stats->edges_after = h.edge_count();
    double lmax = std::max(2.0, max_cycle_len);
    stats->predicted_error = std::sqrt(static_cast<double>(n) * lmax * lmax * lmax *
                                       log2n(n) / static_cast<double>(m));
  }
  return h;
}

DirectedGraph eulerian_sparsify(const DirectedGraph& g, const SparsifyConfig& cfg,
                                SparsifyReport* report) {
  if (!g.is_eulerian()) throw GraphError("eulerian_sparsify: input is not Eulerian");
  std::vector<std::tuple<Vertex, Vertex, Weight>> split_edges;
  for (const DirectedEdge& e : g.edges()) {
    for (int bit = 0; bit < 63; ++bit) {
      if (e.w & (Weight{1} << bit)) {
        split_edges.emplace_back(e.tail, e.head, Weight{1} << bit);
      }
    }
  }
  DirectedGraph cur = combine_parallel_edges(
      DirectedGraph::from_edges(g.vertex_count(), split_edges));

  const long long threshold = stop_threshold_directed(g, cfg);
  if (report) report->stop_threshold = threshold;

  // Estimates live on the undirectification; w_e r_e is scale-invariant, so
  // the doubled support works directly. Computed once, reused by endpoint
  // pair, refreshed on drift.
  Prng est_rng = Prng::stream(cfg.seed, "eulerian-sparsify", "estimates");
  Prng round_rng = Prng::stream(cfg.seed, "eulerian-sparsify", "rounds");
  std::map<std::pair<Vertex, Vertex>, double> pair_est;
  std::uint64_t est_round = 0;
  auto refresh = [&]() {
    Prng fresh = est_rng.split(est_round++);
    WeightedMultigraph support = cur.undirected_support_doubled();
    ResistanceEstimates est =
        approx_effective_resistances(support, cfg.estimate_theta, fresh);
    pair_est.clear();
    for (const Edge& e : support.edges()) {
      Vertex a = std::min(e.u, e.v), b = std::max(e.u, e.v);
      pair_est[{a, b}] = est.r[static_cast<std::size_t>(e.id)];
    }
  };
  auto estimates_for = [&](const DirectedGraph& graph) {
    std::vector<double> r(static_cast<std::size_t>(graph.edge_count()), 0.0);
    for (const DirectedEdge& e : graph.edges()) {
      Vertex a = std::min(e.tail, e.head), b = std::max(e.tail, e.head);
      auto it = pair_est.find({a, b});
      if (it == pair_est.end()) throw GraphError("estimate missing for edge pair");
      r[static_cast<std::size_t>(e.id)] = it->second;
    }
    return r;
  };
  if (cur.edge_count() > 0) refresh();
  double drift = 0;
  int round = 0;
  while ((cur.edge_count() >= threshold || round < cfg.force_rounds) &&
         round < cfg.max_rounds && cur.edge_count() > 0) {
    RoundStats rs;
    Prng rng = round_rng.split(static_cast<std::uint64_t>(round));
    DirectedGraph next = directed_sparsify_once(cur, estimates_for(cur), cfg, rng, &rs);
    if (cur.vertex_count() <= 200) {
      Eigen::MatrixXd sym = symmetrized_laplacian_dense(cur);
      rs.measured_certificate =
          asym_error_norm(sym, laplacian_dense(cur), laplacian_dense(next)).value;
      drift += rs.measured_certificate;
    } else {
      drift += rs.predicted_error;
    }
    cur = next;
    if (report) report->rounds.push_back(rs);
    ++round;
    if (cur.edge_count() == 0) break;
    if (drift > cfg.refresh_drift) {
      refresh();
      drift = 0;
      if (report) ++report->estimate_refreshes;
    }
  }

  if (report) {
    // Directed-cycle sampling preserves the out-in imbalance of every
    // vertex, hence the Eulerian property; exact integer check.
    auto in_g = g.in_degrees();
    auto out_g = g.out_degrees();
    auto in_h = cur.in_degrees();
    auto out_h = cur.out_degrees();
    bool ok = cur.is_eulerian();
    for (int v = 0; v < g.vertex_count() && ok; ++v) {
      ok = (out_g[static_cast<std::size_t>(v)] - in_g[static_cast<std::size_t>(v)]) ==
           (out_h[static_cast<std::size_t>(v)] - in_h[static_cast<std::size_t>(v)]);
    }
    report->degrees_exact = ok;
    if (g.vertex_count() <= 200) {
      Eigen::MatrixXd sym = symmetrized_laplacian_dense(g);
      report->certificate_eps =
          asym_error_norm(sym, laplacian_dense(g), laplacian_dense(cur)).value;
    }
  }
  return cur;
}

}  // namespace cyclesparse
