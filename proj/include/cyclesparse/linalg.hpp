#pragma once

#include <Eigen/Dense>

#include "cyclesparse/graph.hpp"

namespace cyclesparse {

// Dense eigendecompositions are authoritative up to this size; beyond it the
// iterative paths take over.
inline constexpr int kDenseLimit = 500;

struct SolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class LaplacianMode { kUndirected, kDirected, kAdjacency, kDegree };

// Thin reference to a graph plus a matrix interpretation.
class LaplacianView {
 public:
  explicit LaplacianView(const WeightedMultigraph& g,
                         LaplacianMode mode = LaplacianMode::kUndirected)
      : ug_(&g), mode_(mode) {}
  explicit LaplacianView(const DirectedGraph& g)
      : dg_(&g), mode_(LaplacianMode::kDirected) {}

  int dim() const;
  Eigen::MatrixXd dense() const;
  // y = M x without materializing the matrix.
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  const WeightedMultigraph* undirected() const { return ug_; }
  LaplacianMode mode() const { return mode_; }

 private:
  const WeightedMultigraph* ug_ = nullptr;
  const DirectedGraph* dg_ = nullptr;
  LaplacianMode mode_;
};

Eigen::MatrixXd laplacian_dense(const WeightedMultigraph& g);
Eigen::MatrixXd laplacian_dense(const DirectedGraph& g);
// Symmetrization (L + L^T)/2 of the directed Laplacian; a graph Laplacian
// whenever the input is Eulerian.
Eigen::MatrixXd symmetrized_laplacian_dense(const DirectedGraph& g);

// exp(-eps) <= generalized eigenvalues of (L_H, L_G) <= exp(eps), as logs.
struct SpectralCertificate {
  double log_ratio_min = 0;
  double log_ratio_max = 0;
  double tolerance = 0;
  double epsilon() const {
    return std::max(std::abs(log_ratio_min), std::abs(log_ratio_max));
  }
  bool within(double eps) const { return epsilon() <= eps; }
};

struct AsymErrorNorm {
  double value = 0;
};

struct SolveOptions {
  double tol = 1e-10;
  int max_iter_per_n = 10;  // cap = max_iter_per_n * n
  bool prefer_dense = true; // dense pseudoinverse path when n <= kDenseLimit
};

struct SolveResult {
  Eigen::VectorXd x;
  bool rhs_projected = false;  // b had a nullspace component that was removed
  int iterations = 0;
  double residual = 0;
};

// Solves L x = b on each connected component, x and b orthogonal to the
// per-component constant vectors. Throws SolveError if the iterative path
// fails to reach tol * ||b|| within the iteration cap.
SolveResult solve_laplacian(const WeightedMultigraph& g, const Eigen::VectorXd& b,
                            const SolveOptions& opts = {});

// x^T L^+ x. Components of x in the nullspace are projected away (flagged).
double pseudo_quadratic(const WeightedMultigraph& g, const Eigen::VectorXd& x,
                        bool* projected = nullptr,
                        const SolveOptions& opts = {});

// Extreme generalized eigenvalues of the pencil (L_H, L_G) restricted to the
// range of L_G, reported as natural logs. Graphs must share the vertex set
// and the component partition; H edges crossing G components are rejected.
SpectralCertificate certify_spectral_approx(const WeightedMultigraph& g,
                                            const WeightedMultigraph& h);
// Matrix-level variant (PSD inputs with compatible nullspaces).
SpectralCertificate certify_spectral_approx_dense(const Eigen::MatrixXd& lg,
                                                  const Eigen::MatrixXd& lh);

// || Lg^{+/2} (La - Lb) Lg^{+/2} ||_2 via dense SVD.
AsymErrorNorm asym_error_norm(const Eigen::MatrixXd& lg_sym,
                              const Eigen::MatrixXd& la_dir,
                              const Eigen::MatrixXd& lb_dir);

// Second-smallest eigenvalue of D_S^{-1/2} L_{G[S]} D_S^{-1/2}, with D taken
// from the full graph g.
double lambda2_normalized(const WeightedMultigraph& g,
                          const std::vector<Vertex>& subset);

// Dense Moore-Penrose pseudoinverse of a symmetric PSD matrix.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, double rel_tol = 1e-12);

}  // namespace cyclesparse
