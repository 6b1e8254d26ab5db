#include "cyclesparse/resistance.hpp"

#include <cmath>

namespace cyclesparse {

std::vector<double> exact_effective_resistances(
    const WeightedMultigraph& g,
    const std::vector<std::pair<Vertex, Vertex>>& pairs) {
  auto comp = g.components();
  const int n = g.vertex_count();
  std::vector<double> out;
  out.reserve(pairs.size());

  if (n <= kDenseLimit) {
    Eigen::MatrixXd pinv = pseudo_inverse(laplacian_dense(g));
    for (auto [u, v] : pairs) {
      if (comp[static_cast<std::size_t>(u)] != comp[static_cast<std::size_t>(v)]) {
        throw GraphError("resistance query across components");
      }
      out.push_back(pinv(u, u) + pinv(v, v) - 2 * pinv(u, v));
    }
    return out;
  }

  for (auto [u, v] : pairs) {
    if (comp[static_cast<std::size_t>(u)] != comp[static_cast<std::size_t>(v)]) {
      throw GraphError("resistance query across components");
    }
    Eigen::VectorXd chi = Eigen::VectorXd::Zero(n);
    chi[u] = 1;
    chi[v] = -1;
    out.push_back(pseudo_quadratic(g, chi));
  }
  return out;
}

ResistanceEstimates exact_edge_resistances(const WeightedMultigraph& g) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  pairs.reserve(static_cast<std::size_t>(g.edge_count()));
  for (const Edge& e : g.edges()) pairs.emplace_back(e.u, e.v);
  ResistanceEstimates est;
  est.r = exact_effective_resistances(g, pairs);
  est.method = ResistanceEstimates::Method::kExact;
  est.theta = 0;
  return est;
}

ResistanceEstimates approx_effective_resistances(const WeightedMultigraph& g,
                                                 double theta, Prng& rng) {
  if (!(theta > 0 && theta < 1.0000001)) {
    throw GraphError("approx_effective_resistances: theta must be in (0, 1)");
  }
  const int n = g.vertex_count();
  const int m = g.edge_count();
  ResistanceEstimates est;
  est.method = ResistanceEstimates::Method::kProjected;
  est.theta = theta;
  est.r.assign(static_cast<std::size_t>(m), 0.0);
  if (m == 0) return est;

  const int kproj = static_cast<int>(
      std::ceil(24.0 * std::log(std::max(2.0, static_cast<double>(n))) / (theta * theta)));

  // r_e = || Q W^{1/2} B L^+ chi_e ||^2 with Q a (k x m) +-1/sqrt(k) matrix.
  // Each projection costs one Laplacian solve of y_i = B^T W^{1/2} q_i.
  Eigen::MatrixXd z(kproj, n);
  const bool dense = n <= kDenseLimit;
  Eigen::MatrixXd pinv;
  if (dense) pinv = pseudo_inverse(laplacian_dense(g));
  const double scale = 1.0 / std::sqrt(static_cast<double>(kproj));
  for (int i = 0; i < kproj; ++i) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    for (const Edge& e : g.edges()) {
      double q = rng.pm1() * scale * std::sqrt(static_cast<double>(e.w));
      y[e.u] += q;
      y[e.v] -= q;
    }
    if (dense) {
      z.row(i) = (pinv * y).transpose();
    } else {
      z.row(i) = solve_laplacian(g, y).x.transpose();
    }
  }
  for (const Edge& e : g.edges()) {
    est.r[static_cast<std::size_t>(e.id)] = (z.col(e.u) - z.col(e.v)).squaredNorm();
  }
  return est;
}

double foster_residual(const WeightedMultigraph& g, const ResistanceEstimates& est) {
  if (static_cast<int>(est.r.size()) != g.edge_count()) {
    throw GraphError("foster_residual: estimate vector length mismatch");
  }
  double s = 0;
  for (const Edge& e : g.edges()) {
    s += static_cast<double>(e.w) * est.r[static_cast<std::size_t>(e.id)];
  }
  return s - static_cast<double>(g.vertex_count() - g.component_count());
}

}  // namespace cyclesparse
