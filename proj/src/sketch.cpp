#include "cyclesparse/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "cyclesparse/expander.hpp"
#include "cyclesparse/linalg.hpp"

namespace cyclesparse {

WeightedMultigraph decompose_and_sample(const WeightedMultigraph& g, double alpha,
                                        const SparsifyConfig& cycle_cfg,
                                        Prng& rng) {
  if (!g.is_simple()) {
    throw GraphError("decompose_and_sample: input must be simple");
  }
  if (!g.has_uniform_weight()) {
    throw GraphError("decompose_and_sample: input must be a unit class");
  }
  const int n = g.vertex_count();
  if (g.edge_count() == 0) return g;
  const Weight unit = g.edges().front().w;

  auto deg = g.adjacency();
  std::vector<char> big(static_cast<std::size_t>(n), 0);
  for (Vertex v = 0; v < n; ++v) {
    if (static_cast<double>(deg[static_cast<std::size_t>(v)].size()) >= alpha) {
      big[static_cast<std::size_t>(v)] = 1;
    }
  }

  // Edges inside V_big are candidates; everything else is kept verbatim.
  std::vector<EdgeId> big_edges;
  std::vector<std::tuple<Vertex, Vertex, Weight>> kept;
  for (const Edge& e : g.edges()) {
    if (big[static_cast<std::size_t>(e.u)] && big[static_cast<std::size_t>(e.v)]) {
      big_edges.push_back(e.id);
    } else {
      kept.emplace_back(e.u, e.v, e.w);
    }
  }

  // Bipartition of G[V_big]; only crossing edges are decomposed.
  std::vector<Edge> bsub;
  std::vector<EdgeId> bids;
  for (EdgeId id : big_edges) {
    const Edge& e = g.edge(id);
    bsub.push_back(Edge{static_cast<EdgeId>(bsub.size()), e.u, e.v, e.w});
    bids.push_back(id);
  }
  WeightedMultigraph gbig(n, bsub);
  std::vector<char> side = greedy_bipartition(gbig);
  std::vector<Edge> cls_edges;
  for (const Edge& e : gbig.edges()) {
    if (side[static_cast<std::size_t>(e.u)] != side[static_cast<std::size_t>(e.v)]) {
      cls_edges.push_back(Edge{static_cast<EdgeId>(cls_edges.size()), e.u, e.v, e.w});
    } else {
      kept.emplace_back(e.u, e.v, e.w);
    }
  }
  WeightedMultigraph ghat(n, cls_edges);

  Prng cd_rng = rng.split(1);
  CycleDecomposition cd = run_cycle_algo(ghat, cycle_cfg, cd_rng);
  for (EdgeId id : cd.extras) {
    const Edge& e = ghat.edge(id);
    kept.emplace_back(e.u, e.v, e.w);
  }
  std::uint64_t cyc_idx = 0;
  for (const auto& cyc : cd.cycles) {
    Prng cyc_rng = rng.split(0x100000ULL + cyc_idx++);
    std::vector<EdgeId> half = sample_even_cycle(ghat, cyc, cyc_rng);
    for (EdgeId id : half) {
      const Edge& e = ghat.edge(id);
      kept.emplace_back(e.u, e.v, checked_weight_sum(unit, unit));
    }
  }
  return WeightedMultigraph::from_edges(n, kept);
}

WeightedMultigraph spectral_sketch(const WeightedMultigraph& g,
                                   const SketchConfig& cfg, SketchReport* report) {
  if (!(cfg.eps > 0 && cfg.eps <= 1)) {
    throw GraphError("spectral_sketch: eps must be in (0, 1]");
  }
  const int n = g.vertex_count();

  SparsifyConfig cycle_cfg;
  cycle_cfg.cycle_algo = cfg.cycle_algo;
  cycle_cfg.short_l = cfg.short_l;
  cycle_cfg.short_k = cfg.short_k;
  cycle_cfg.short_opts = cfg.short_opts;

  // Weight classes with the duplicate-pair normalization.
  WeightedMultigraph cur = combine_parallel_edges(g);

  Prng rng = Prng::stream(cfg.seed, "spectral-sketch", "rounds");
  double gamma = 1.0;
  const int max_rounds =
      cfg.max_rounds_mult * static_cast<int>(std::ceil(std::log2(std::max(2, n))));
  const double alpha = cfg.alpha_scale / cfg.eps;

  for (int round = 0; round < max_rounds; ++round) {
    long long before = cur.edge_count();
    if (before == 0) break;
    double phi = cfg.phi > 0 ? cfg.phi : 1.0 / (2.0 * std::max(1.0, gamma));
    phi = std::min(phi, 0.499);

    SketchRoundStats rs;
    rs.edges_before = before;
    rs.phi = phi;
    rs.alpha = alpha;

    std::vector<std::tuple<Vertex, Vertex, Weight>> next_edges;
    auto classes = binary_split(cur);
    double round_gamma = 0;
    long long round_boundary = 0;
    std::uint64_t class_idx = 0;
    for (auto& [bit, cls] : classes) {
      ExpanderPartition part = expander_decompose(cls, phi);
      round_boundary += static_cast<long long>(part.boundary_edges.size());
      round_gamma = std::max(round_gamma, part.measured_gamma(cls.edge_count()));
      for (EdgeId id : part.boundary_edges) {
        const Edge& e = cls.edge(id);
        next_edges.emplace_back(e.u, e.v, e.w);
      }
      std::uint64_t piece_idx = 0;
      for (const auto& piece : part.pieces) {
        auto [sub, ids] = cls.induced_subgraph(piece);
        if (sub.edge_count() == 0) {
          ++piece_idx;
          continue;
        }
        Prng piece_rng =
            rng.split((static_cast<std::uint64_t>(round) << 40) ^
                      (class_idx << 20) ^ piece_idx);
        WeightedMultigraph sampled =
            decompose_and_sample(sub, alpha, cycle_cfg, piece_rng);
        for (const Edge& e : sampled.edges()) {
          next_edges.emplace_back(piece[static_cast<std::size_t>(e.u)],
                                  piece[static_cast<std::size_t>(e.v)], e.w);
        }
        ++piece_idx;
      }
      ++class_idx;
    }
    cur = combine_parallel_edges(
        WeightedMultigraph::from_edges(n, next_edges));
    if (round_gamma > 0) gamma = round_gamma;

    rs.edges_after = cur.edge_count();
    rs.measured_gamma = round_gamma;
    rs.boundary_edges = round_boundary;
    if (report) report->rounds.push_back(rs);

    // Stop once the shrink rate falls below 1/16 per round.
    if (rs.edges_after > before - (before + 15) / 16) break;
  }

  if (report) {
    report->degrees_exact = g.weighted_degrees() == cur.weighted_degrees();
    report->final_edges = cur.edge_count();
  }
  return cur;
}

InverseFormCheck inverse_form_check(const WeightedMultigraph& p,
                                    const WeightedMultigraph& q,
                                    const Eigen::VectorXd& x, double eps) {
  InverseFormCheck out;
  SpectralCertificate cert = certify_spectral_approx(p, q);
  out.hypothesis_spectral = cert.within(std::sqrt(eps));

  Eigen::MatrixXd lp = laplacian_dense(p);
  Eigen::MatrixXd lq = laplacian_dense(q);
  Eigen::MatrixXd lp_pinv = pseudo_inverse(lp);
  Eigen::VectorXd px = lp_pinv * x;
  double xpx = x.dot(px);
  double pqp = px.dot(lq * px);
  if (xpx <= 0) throw GraphError("inverse_form_check: x in the nullspace of P");
  out.hyp2_ratio = pqp / xpx;
  out.hypothesis_quadratic =
      out.hyp2_ratio >= std::exp(-eps) && out.hyp2_ratio <= std::exp(eps);

  Eigen::MatrixXd lq_pinv = pseudo_inverse(lq);
  double xqx = x.dot(lq_pinv * x);
  out.ratio = xqx / xpx;
  out.conclusion =
      out.ratio >= std::exp(-7 * eps) && out.ratio <= std::exp(7 * eps);
  return out;
}

}  // namespace cyclesparse
