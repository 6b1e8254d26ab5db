#include "cyclesparse/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace cyclesparse {

namespace {

// Removes the per-component constant part of v.
bool project_out_constants(const std::vector<int>& comp, Eigen::VectorXd& v) {
  int nc = comp.empty() ? 0 : 1 + *std::max_element(comp.begin(), comp.end());
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(nc);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(nc);
  for (int i = 0; i < static_cast<int>(comp.size()); ++i) {
    sums[comp[static_cast<std::size_t>(i)]] += v[i];
    counts[comp[static_cast<std::size_t>(i)]] += 1.0;
  }
  bool touched = false;
  for (int i = 0; i < static_cast<int>(comp.size()); ++i) {
    double mean = sums[comp[static_cast<std::size_t>(i)]] / counts[comp[static_cast<std::size_t>(i)]];
    if (std::abs(mean) > 1e-13 * (1.0 + v.cwiseAbs().maxCoeff())) touched = true;
    v[i] -= mean;
  }
  return touched;
}

}  // namespace

int LaplacianView::dim() const {
  return ug_ ? ug_->vertex_count() : dg_->vertex_count();
}

Eigen::MatrixXd laplacian_dense(const WeightedMultigraph& g) {
  int n = g.vertex_count();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    double w = static_cast<double>(e.w);
    l(e.u, e.u) += w;
    l(e.v, e.v) += w;
    l(e.u, e.v) -= w;
    l(e.v, e.u) -= w;
  }
  return l;
}

Eigen::MatrixXd laplacian_dense(const DirectedGraph& g) {
  // L = sum_{u->v} w * chi_uv chi_u^T: out-degrees on the diagonal,
  // -w(v->u) at (u, v).
  int n = g.vertex_count();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (const DirectedEdge& e : g.edges()) {
    double w = static_cast<double>(e.w);
    l(e.tail, e.tail) += w;
    l(e.head, e.tail) -= w;
  }
  return l;
}

Eigen::MatrixXd symmetrized_laplacian_dense(const DirectedGraph& g) {
  Eigen::MatrixXd l = laplacian_dense(g);
  return 0.5 * (l + l.transpose());
}

Eigen::MatrixXd LaplacianView::dense() const {
  switch (mode_) {
    case LaplacianMode::kDirected:
      return laplacian_dense(*dg_);
    case LaplacianMode::kUndirected:
      return laplacian_dense(*ug_);
    case LaplacianMode::kAdjacency: {
      int n = ug_->vertex_count();
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
      for (const Edge& e : ug_->edges()) {
        a(e.u, e.v) += static_cast<double>(e.w);
        a(e.v, e.u) += static_cast<double>(e.w);
      }
      return a;
    }
    case LaplacianMode::kDegree: {
      auto d = ug_->weighted_degrees();
      Eigen::VectorXd diag(ug_->vertex_count());
      for (int i = 0; i < ug_->vertex_count(); ++i) diag[i] = static_cast<double>(d[static_cast<std::size_t>(i)]);
      return diag.asDiagonal();
    }
  }
  throw GraphError("bad laplacian mode");
}

Eigen::VectorXd LaplacianView::apply(const Eigen::VectorXd& x) const {
  if (mode_ != LaplacianMode::kUndirected) return dense() * x;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
  for (const Edge& e : ug_->edges()) {
    double w = static_cast<double>(e.w);
    double d = x[e.u] - x[e.v];
    y[e.u] += w * d;
    y[e.v] -= w * d;
  }
  return y;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  double cutoff = rel_tol * std::max(1.0, vals.cwiseAbs().maxCoeff());
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(vals.size());
  for (int i = 0; i < vals.size(); ++i) {
    if (vals[i] > cutoff) inv[i] = 1.0 / vals[i];
  }
  return vecs * inv.asDiagonal() * vecs.transpose();
}

SolveResult solve_laplacian(const WeightedMultigraph& g, const Eigen::VectorXd& b,
                            const SolveOptions& opts) {
  int n = g.vertex_count();
  if (b.size() != n) throw SolveError("rhs dimension mismatch");
  if (opts.tol <= 0) throw SolveError("tol must be positive");
  auto comp = g.components();
  SolveResult res;
  Eigen::VectorXd rhs = b;
  res.rhs_projected = project_out_constants(comp, rhs);

  double bnorm = rhs.norm();
  if (bnorm == 0) {
    res.x = Eigen::VectorXd::Zero(n);
    return res;
  }

  if (opts.prefer_dense && n <= kDenseLimit) {
    Eigen::MatrixXd pinv = pseudo_inverse(laplacian_dense(g));
    res.x = pinv * rhs;
    project_out_constants(comp, res.x);
    res.residual = (LaplacianView(g).apply(res.x) - rhs).norm() / bnorm;
    return res;
  }

  // Conjugate gradients with diagonal preconditioning.
  auto degs = g.weighted_degrees();
  Eigen::VectorXd dinv(n);
  for (int i = 0; i < n; ++i) {
    double d = static_cast<double>(degs[static_cast<std::size_t>(i)]);
    dinv[i] = d > 0 ? 1.0 / d : 1.0;
  }
  LaplacianView view(g);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd z = dinv.asDiagonal() * r;
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  int cap = opts.max_iter_per_n * std::max(1, n);
  int it = 0;
  double rel = r.norm() / bnorm;
  while (rel > opts.tol && it < cap) {
    Eigen::VectorXd q = view.apply(p);
    double alpha = rz / p.dot(q);
    x += alpha * p;
    r -= alpha * q;
    // Re-project occasionally to stop nullspace drift.
    if (it % 64 == 63) project_out_constants(comp, r);
    z = dinv.asDiagonal() * r;
    double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
    rel = r.norm() / bnorm;
    ++it;
  }
  res.iterations = it;
  res.residual = rel;
  if (rel > opts.tol) {
    throw SolveError("laplacian solve did not converge: residual " +
                     std::to_string(rel) + " after " + std::to_string(it) +
                     " iterations");
  }
  project_out_constants(comp, x);
  res.x = x;
  return res;
}

double pseudo_quadratic(const WeightedMultigraph& g, const Eigen::VectorXd& x,
                        bool* projected, const SolveOptions& opts) {
  Eigen::VectorXd rhs = x;
  auto comp = g.components();
  bool touched = project_out_constants(comp, rhs);
  if (projected) *projected = touched;
  if (rhs.norm() == 0) return 0.0;
  SolveResult sol = solve_laplacian(g, rhs, opts);
  return std::max(0.0, rhs.dot(sol.x));
}

namespace {

// Eigenvalues of Lg^{+/2} Lh Lg^{+/2} restricted to range(Lg).
Eigen::VectorXd pencil_eigenvalues(const Eigen::MatrixXd& lg,
                                   const Eigen::MatrixXd& lh) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lg);
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  double cutoff = 1e-12 * std::max(1.0, vals.cwiseAbs().maxCoeff());
  std::vector<int> keep;
  for (int i = 0; i < vals.size(); ++i) {
    if (vals[i] > cutoff) keep.push_back(i);
  }
  int r = static_cast<int>(keep.size());
  Eigen::MatrixXd basis(lg.rows(), r);
  for (int j = 0; j < r; ++j) {
    basis.col(j) = vecs.col(keep[static_cast<std::size_t>(j)]) / std::sqrt(vals[keep[static_cast<std::size_t>(j)]]);
  }
  Eigen::MatrixXd m = basis.transpose() * lh * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(0.5 * (m + m.transpose()));
  return es2.eigenvalues();
}

}  // namespace

SpectralCertificate certify_spectral_approx_dense(const Eigen::MatrixXd& lg,
                                                  const Eigen::MatrixXd& lh) {
  if (lg.rows() != lh.rows()) throw GraphError("certificate dimension mismatch");
  Eigen::VectorXd ev = pencil_eigenvalues(lg, lh);
  SpectralCertificate cert;
  cert.tolerance = 1e-12;
  if (ev.size() == 0) return cert;
  double lo = ev.minCoeff();
  double hi = ev.maxCoeff();
  cert.log_ratio_min = lo <= 0 ? -std::numeric_limits<double>::infinity() : std::log(lo);
  cert.log_ratio_max = hi <= 0 ? -std::numeric_limits<double>::infinity() : std::log(hi);
  return cert;
}

SpectralCertificate certify_spectral_approx(const WeightedMultigraph& g,
                                            const WeightedMultigraph& h) {
  if (g.vertex_count() != h.vertex_count()) {
    throw GraphError("certificate requires a common vertex set");
  }
  auto comp = g.components();
  for (const Edge& e : h.edges()) {
    if (comp[static_cast<std::size_t>(e.u)] != comp[static_cast<std::size_t>(e.v)]) {
      throw GraphError("H has an edge crossing components of G");
    }
  }
  if (g.vertex_count() > kDenseLimit) {
    throw GraphError("certificate only available at dense scale (n <= 500)");
  }
  return certify_spectral_approx_dense(laplacian_dense(g), laplacian_dense(h));
}

AsymErrorNorm asym_error_norm(const Eigen::MatrixXd& lg_sym,
                              const Eigen::MatrixXd& la_dir,
                              const Eigen::MatrixXd& lb_dir) {
  if (lg_sym.rows() != la_dir.rows() || la_dir.rows() != lb_dir.rows()) {
    throw GraphError("asym_error_norm dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lg_sym);
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  double cutoff = 1e-12 * std::max(1.0, vals.cwiseAbs().maxCoeff());
  std::vector<int> keep;
  for (int i = 0; i < vals.size(); ++i) {
    if (vals[i] > cutoff) keep.push_back(i);
  }
  int r = static_cast<int>(keep.size());
  Eigen::MatrixXd half(lg_sym.rows(), r);
  for (int j = 0; j < r; ++j) {
    half.col(j) = vecs.col(keep[static_cast<std::size_t>(j)]) / std::sqrt(vals[keep[static_cast<std::size_t>(j)]]);
  }
  Eigen::MatrixXd m = half.transpose() * (la_dir - lb_dir) * half;
  AsymErrorNorm out;
  if (m.size() == 0) return out;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  out.value = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  return out;
}

double lambda2_normalized(const WeightedMultigraph& g,
                          const std::vector<Vertex>& subset) {
  if (subset.empty()) throw GraphError("lambda2_normalized: empty subset");
  auto full_deg = g.weighted_degrees();
  auto [sub, ids] = g.induced_subgraph(subset);
  int k = sub.vertex_count();
  Eigen::MatrixXd l = laplacian_dense(sub);
  Eigen::VectorXd dinv_sqrt(k);
  for (int i = 0; i < k; ++i) {
    double d = static_cast<double>(full_deg[static_cast<std::size_t>(subset[static_cast<std::size_t>(i)])]);
    dinv_sqrt[i] = d > 0 ? 1.0 / std::sqrt(d) : 0.0;
  }
  Eigen::MatrixXd normalized = dinv_sqrt.asDiagonal() * l * dinv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normalized);
  if (k < 2) return 0.0;
  return es.eigenvalues()[1];
}

}  // namespace cyclesparse
