#include "cyclesparse/expander.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cyclesparse/linalg.hpp"

namespace cyclesparse {

namespace {

double volume(const std::vector<Weight>& deg, const std::vector<Vertex>& vs) {
  double v = 0;
  for (Vertex x : vs) v += static_cast<double>(deg[static_cast<std::size_t>(x)]);
  return v;
}

}  // namespace

ConductanceResult conductance(const WeightedMultigraph& g,
                              const std::vector<Vertex>& s) {
  if (s.empty()) throw GraphError("conductance: empty subset");
  auto deg = g.weighted_degrees();
  if (volume(deg, s) <= 0) throw GraphError("conductance: zero volume subset");

  // Edges with both endpoints in S, expressed in S-local indices.
  std::vector<int> local(static_cast<std::size_t>(g.vertex_count()), -1);
  for (std::size_t i = 0; i < s.size(); ++i) local[static_cast<std::size_t>(s[i])] = static_cast<int>(i);
  struct Inner { int a, b; double w; };
  std::vector<Inner> inner;
  for (const Edge& e : g.edges()) {
    int a = local[static_cast<std::size_t>(e.u)], b = local[static_cast<std::size_t>(e.v)];
    if (a >= 0 && b >= 0) inner.push_back({a, b, static_cast<double>(e.w)});
  }

  ConductanceResult out;
  const int k = static_cast<int>(s.size());
  if (k == 1) {
    out.value = std::numeric_limits<double>::infinity();
    out.exact = true;
    return out;
  }

  if (k <= 20) {
    double best = std::numeric_limits<double>::infinity();
    const std::uint32_t full = (1u << k) - 1;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
      double cut = 0;
      for (const Inner& e : inner) {
        bool ia = (mask >> e.a) & 1u, ib = (mask >> e.b) & 1u;
        if (ia != ib) cut += e.w;
      }
      double va = 0, vb = 0;
      for (int i = 0; i < k; ++i) {
        double d = static_cast<double>(deg[static_cast<std::size_t>(s[static_cast<std::size_t>(i)])]);
        if ((mask >> i) & 1u) va += d; else vb += d;
      }
      double mn = std::min(va, vb);
      if (mn <= 0) continue;
      best = std::min(best, cut / mn);
    }
    out.value = best;
    out.exact = true;
    return out;
  }

  // Sweep-cut upper bound along the second eigenvector.
  Eigen::VectorXd v2;
  piece_lambda2(g, s, &v2);
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> embed(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    double d = static_cast<double>(deg[static_cast<std::size_t>(s[static_cast<std::size_t>(i)])]);
    embed[static_cast<std::size_t>(i)] = d > 0 ? v2[i] / std::sqrt(d) : v2[i];
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (embed[static_cast<std::size_t>(a)] != embed[static_cast<std::size_t>(b)]) {
      return embed[static_cast<std::size_t>(a)] < embed[static_cast<std::size_t>(b)];
    }
    return s[static_cast<std::size_t>(a)] < s[static_cast<std::size_t>(b)];
  });
  std::vector<int> rank(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) rank[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
  // Prefix volumes and incremental cut evaluation.
  double total_vol = 0;
  for (int i = 0; i < k; ++i) total_vol += static_cast<double>(deg[static_cast<std::size_t>(s[static_cast<std::size_t>(i)])]);
  double best = std::numeric_limits<double>::infinity();
  double vol_pre = 0;
  // cut(prefix) changes as vertices join the prefix.
  std::vector<std::vector<std::pair<int, double>>> nbr(static_cast<std::size_t>(k));
  for (const Inner& e : inner) {
    nbr[static_cast<std::size_t>(e.a)].push_back({e.b, e.w});
    nbr[static_cast<std::size_t>(e.b)].push_back({e.a, e.w});
  }
  std::vector<char> in_prefix(static_cast<std::size_t>(k), 0);
  double cut = 0;
  for (int i = 0; i < k - 1; ++i) {
    int v = order[static_cast<std::size_t>(i)];
    for (auto [o, w] : nbr[static_cast<std::size_t>(v)]) {
      cut += in_prefix[static_cast<std::size_t>(o)] ? -w : w;
    }
    in_prefix[static_cast<std::size_t>(v)] = 1;
    vol_pre += static_cast<double>(deg[static_cast<std::size_t>(s[static_cast<std::size_t>(v)])]);
    double mn = std::min(vol_pre, total_vol - vol_pre);
    if (mn <= 0) continue;
    best = std::min(best, cut / mn);
  }
  out.value = best;
  out.exact = false;
  return out;
}

double piece_lambda2(const WeightedMultigraph& g, const std::vector<Vertex>& piece,
                     Eigen::VectorXd* second_vector) {
  const int k = static_cast<int>(piece.size());
  if (k < 2) {
    if (second_vector) *second_vector = Eigen::VectorXd::Zero(std::max(k, 0));
    return 0.0;
  }
  auto full_deg = g.weighted_degrees();
  auto [sub, ids] = g.induced_subgraph(piece);
  Eigen::VectorXd dinv_sqrt(k), dsqrt(k);
  for (int i = 0; i < k; ++i) {
    double d = static_cast<double>(full_deg[static_cast<std::size_t>(piece[static_cast<std::size_t>(i)])]);
    dinv_sqrt[i] = d > 0 ? 1.0 / std::sqrt(d) : 0.0;
    dsqrt[i] = d > 0 ? std::sqrt(d) : 0.0;
  }

  if (k <= kDenseLimit) {
    Eigen::MatrixXd normalized =
        dinv_sqrt.asDiagonal() * laplacian_dense(sub) * dinv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normalized);
    if (second_vector) *second_vector = es.eigenvectors().col(1);
    return es.eigenvalues()[1];
  }

  // Deflated power iteration on 2I - N; the null direction of N is d^{1/2}.
  Eigen::VectorXd null_dir = dsqrt;
  double nn = null_dir.norm();
  if (nn > 0) null_dir /= nn;
  LaplacianView view(sub);
  auto apply_n = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = dinv_sqrt.asDiagonal() * x;
    y = view.apply(y);
    return Eigen::VectorXd(dinv_sqrt.asDiagonal() * y);
  };
  Eigen::VectorXd x(k);
  Prng init(0x9d2c5680u);
  for (int i = 0; i < k; ++i) x[i] = init.real01() - 0.5;
  x -= null_dir.dot(x) * null_dir;
  x.normalize();
  int iters = static_cast<int>(200 * std::log2(std::max(4, k)));
  double mu = 0;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXd y = 2.0 * x - apply_n(x);
    y -= null_dir.dot(y) * null_dir;
    double norm = y.norm();
    if (norm == 0) break;
    y /= norm;
    mu = norm;
    x = y;
  }
  mu = x.dot(2.0 * x - apply_n(x));
  if (second_vector) *second_vector = x;
  return 2.0 - mu;
}

namespace {

// Best sweep cut of a piece: returns (left, right) vertex sets.
std::pair<std::vector<Vertex>, std::vector<Vertex>> sweep_split(
    const WeightedMultigraph& g, const std::vector<Vertex>& piece,
    const std::vector<Weight>& full_deg, const Eigen::VectorXd& v2) {
  const int k = static_cast<int>(piece.size());
  std::vector<int> local(static_cast<std::size_t>(g.vertex_count()), -1);
  for (int i = 0; i < k; ++i) local[static_cast<std::size_t>(piece[static_cast<std::size_t>(i)])] = i;
  std::vector<std::vector<std::pair<int, double>>> nbr(static_cast<std::size_t>(k));
  for (const Edge& e : g.edges()) {
    int a = local[static_cast<std::size_t>(e.u)], b = local[static_cast<std::size_t>(e.v)];
    if (a >= 0 && b >= 0) {
      nbr[static_cast<std::size_t>(a)].push_back({b, static_cast<double>(e.w)});
      nbr[static_cast<std::size_t>(b)].push_back({a, static_cast<double>(e.w)});
    }
  }
  std::vector<double> embed(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    double d = static_cast<double>(full_deg[static_cast<std::size_t>(piece[static_cast<std::size_t>(i)])]);
    embed[static_cast<std::size_t>(i)] = d > 0 ? v2[i] / std::sqrt(d) : v2[i];
  }
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (embed[static_cast<std::size_t>(a)] != embed[static_cast<std::size_t>(b)]) {
      return embed[static_cast<std::size_t>(a)] < embed[static_cast<std::size_t>(b)];
    }
    return piece[static_cast<std::size_t>(a)] < piece[static_cast<std::size_t>(b)];
  });
  double total_vol = 0;
  for (int i = 0; i < k; ++i) total_vol += static_cast<double>(full_deg[static_cast<std::size_t>(piece[static_cast<std::size_t>(i)])]);
  std::vector<char> in_prefix(static_cast<std::size_t>(k), 0);
  double cut = 0, vol_pre = 0;
  double best = std::numeric_limits<double>::infinity();
  int best_prefix = 1;
  for (int i = 0; i < k - 1; ++i) {
    int v = order[static_cast<std::size_t>(i)];
    for (auto [o, w] : nbr[static_cast<std::size_t>(v)]) cut += in_prefix[static_cast<std::size_t>(o)] ? -w : w;
    in_prefix[static_cast<std::size_t>(v)] = 1;
    vol_pre += static_cast<double>(full_deg[static_cast<std::size_t>(piece[static_cast<std::size_t>(v)])]);
    double mn = std::min(vol_pre, total_vol - vol_pre);
    double score = mn > 0 ? cut / mn : (cut == 0 ? 0.0 : std::numeric_limits<double>::infinity());
    if (score < best) {
      best = score;
      best_prefix = i + 1;
    }
  }
  std::vector<Vertex> left, right;
  for (int i = 0; i < k; ++i) {
    Vertex v = piece[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    if (i < best_prefix) left.push_back(v); else right.push_back(v);
  }
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  return {left, right};
}

}  // namespace

ExpanderPartition expander_decompose(const WeightedMultigraph& g, double phi) {
  if (!(phi > 0 && phi < 0.5)) throw GraphError("expander_decompose: phi must be in (0, 1/2)");
  if (!g.has_uniform_weight()) {
    throw GraphError("expander_decompose expects a unit-weight class");
  }
  auto full_deg = g.weighted_degrees();
  ExpanderPartition part;
  part.phi_target = phi;

  std::vector<std::vector<Vertex>> stack;
  std::vector<Vertex> all(static_cast<std::size_t>(g.vertex_count()));
  std::iota(all.begin(), all.end(), 0);
  if (!all.empty()) stack.push_back(all);

  std::vector<std::pair<std::vector<Vertex>, double>> done;
  while (!stack.empty()) {
    std::vector<Vertex> piece = std::move(stack.back());
    stack.pop_back();
    Eigen::VectorXd v2;
    double l2 = piece_lambda2(g, piece, &v2);
    if (piece.size() <= 2 || l2 >= 2 * phi) {
      done.emplace_back(std::move(piece), l2);
      continue;
    }
    auto [left, right] = sweep_split(g, piece, full_deg, v2);
    stack.push_back(right);
    stack.push_back(left);
  }

  std::sort(done.begin(), done.end(),
            [](const auto& a, const auto& b) { return a.first.front() < b.first.front(); });
  for (auto& [piece, cert] : done) {
    part.pieces.push_back(std::move(piece));
    part.certificates.push_back(cert);
  }

  std::vector<int> piece_of(static_cast<std::size_t>(g.vertex_count()), -1);
  for (std::size_t i = 0; i < part.pieces.size(); ++i) {
    for (Vertex v : part.pieces[i]) piece_of[static_cast<std::size_t>(v)] = static_cast<int>(i);
  }
  for (const Edge& e : g.edges()) {
    if (piece_of[static_cast<std::size_t>(e.u)] != piece_of[static_cast<std::size_t>(e.v)]) {
      part.boundary_edges.push_back(e.id);
    }
  }
  return part;
}

namespace {

void ns_decompose_rec(const WeightedMultigraph& g, const std::vector<Vertex>& vs,
                      double alpha, EdgeExpanderSplit* out) {
  auto [sub, ids] = g.induced_subgraph(vs);
  // Split into connected components first.
  auto comp = sub.components();
  int nc = sub.vertex_count() ? 1 + *std::max_element(comp.begin(), comp.end()) : 0;
  if (nc > 1) {
    std::vector<std::vector<Vertex>> groups(static_cast<std::size_t>(nc));
    for (int i = 0; i < sub.vertex_count(); ++i) {
      groups[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])].push_back(vs[static_cast<std::size_t>(i)]);
    }
    for (auto& grp : groups) ns_decompose_rec(g, grp, alpha, out);
    return;
  }

  if (vs.size() <= 2) {
    for (EdgeId id : ids) out->sparse_part.push_back(id);
    return;
  }

  Weight dmin = kWeightCap;
  auto sub_deg = sub.weighted_degrees();
  for (Weight d : sub_deg) dmin = std::min(dmin, d);
  double phi_req = alpha / static_cast<double>(dmin);

  // lambda2 with the component's own degrees: the component is standalone.
  std::vector<Vertex> all(static_cast<std::size_t>(sub.vertex_count()));
  std::iota(all.begin(), all.end(), 0);
  Eigen::VectorXd v2;
  double l2 = piece_lambda2(sub, all, &v2);
  if (l2 >= 2 * phi_req) {
    out->dense_components.push_back(vs);
    out->certificates.push_back(l2);
    return;
  }
  auto [left_local, right_local] = sweep_split(sub, all, sub_deg, v2);
  std::vector<char> left_flag(static_cast<std::size_t>(sub.vertex_count()), 0);
  for (Vertex v : left_local) left_flag[static_cast<std::size_t>(v)] = 1;
  for (std::size_t i = 0; i < sub.edges().size(); ++i) {
    const Edge& e = sub.edges()[i];
    if (left_flag[static_cast<std::size_t>(e.u)] != left_flag[static_cast<std::size_t>(e.v)]) {
      out->sparse_part.push_back(ids[i]);
    }
  }
  std::vector<Vertex> left, right;
  for (Vertex v : left_local) left.push_back(vs[static_cast<std::size_t>(v)]);
  for (Vertex v : right_local) right.push_back(vs[static_cast<std::size_t>(v)]);
  ns_decompose_rec(g, left, alpha, out);
  ns_decompose_rec(g, right, alpha, out);
}

}  // namespace

EdgeExpanderSplit ns_style_decompose(const WeightedMultigraph& g, double alpha) {
  if (!(alpha > 0)) throw GraphError("ns_style_decompose: alpha must be positive");
  EdgeExpanderSplit out;
  out.alpha = alpha;
  std::vector<Vertex> all(static_cast<std::size_t>(g.vertex_count()));
  std::iota(all.begin(), all.end(), 0);
  if (!all.empty()) ns_decompose_rec(g, all, alpha, &out);
  std::sort(out.sparse_part.begin(), out.sparse_part.end());
  return out;
}

Vertex lazy_random_walk(const std::vector<std::vector<EdgeId>>& adj,
                        const std::vector<Edge>& edges, Vertex start, int steps,
                        Prng& rng) {
  if (adj[static_cast<std::size_t>(start)].empty()) {
    throw GraphError("lazy_random_walk: isolated start vertex");
  }
  Vertex cur = start;
  for (int i = 0; i < steps; ++i) {
    if (rng.coin()) continue;
    const auto& inc = adj[static_cast<std::size_t>(cur)];
    EdgeId eid = inc[static_cast<std::size_t>(rng.below(inc.size()))];
    const Edge& e = edges[static_cast<std::size_t>(eid)];
    cur = (e.u == cur) ? e.v : e.u;
  }
  return cur;
}

Vertex lazy_random_walk(const WeightedMultigraph& g, Vertex start, int steps,
                        Prng& rng) {
  auto adj = g.adjacency();
  return lazy_random_walk(adj, g.edges(), start, steps, rng);
}

}  // namespace cyclesparse
