#include "cyclesparse/weight_reduce.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace cyclesparse {

namespace {

int ceil_log2_int(int n) {
  int b = 0;
  while ((1LL << b) < n) ++b;
  return b;
}

int bit_width(Weight w) {
  int b = 0;
  while (w >> b) ++b;
  return b;
}

}  // namespace

std::vector<Rat> DirectedRationalGraph::in_degrees() const {
  std::vector<Rat> d(static_cast<std::size_t>(n), Rat(0));
  for (const auto& e : edges) d[static_cast<std::size_t>(e.head)] += e.w;
  return d;
}

std::vector<Rat> DirectedRationalGraph::out_degrees() const {
  std::vector<Rat> d(static_cast<std::size_t>(n), Rat(0));
  for (const auto& e : edges) d[static_cast<std::size_t>(e.tail)] += e.w;
  return d;
}

Eigen::MatrixXd DirectedRationalGraph::laplacian_dense() const {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : edges) {
    double w = rat_to_double(e.w);
    l(e.tail, e.tail) += w;
    l(e.head, e.tail) -= w;
  }
  return l;
}

void DirectedRationalGraph::add(Vertex tail, Vertex head, const Rat& w) {
  edges.push_back(DirectedRatEdge{tail, head, w});
}

void DirectedRationalGraph::compact() {
  std::map<std::pair<Vertex, Vertex>, Rat> acc;
  for (const auto& e : edges) acc[{e.tail, e.head}] += e.w;
  edges.clear();
  for (auto& [key, w] : acc) {
    if (w != Rat(0)) edges.push_back(DirectedRatEdge{key.first, key.second, w});
  }
}

std::vector<DirectedGraph> decompose_bipartite_dir(const DirectedGraph& g) {
  std::vector<DirectedGraph> out;
  if (g.edge_count() == 0) return out;

  struct Task {
    std::vector<EdgeId> edge_ids;
  };
  std::deque<Task> todo;
  {
    Task t;
    for (const auto& e : g.edges()) t.edge_ids.push_back(e.id);
    todo.push_back(std::move(t));
  }
  while (!todo.empty()) {
    Task t = std::move(todo.front());
    todo.pop_front();
    if (t.edge_ids.empty()) continue;
    // Greedy bipartition on the combined undirected weights.
    std::vector<std::tuple<Vertex, Vertex, Weight>> und;
    for (EdgeId id : t.edge_ids) {
      const DirectedEdge& e = g.edge(id);
      und.emplace_back(e.tail, e.head, e.w);
    }
    WeightedMultigraph support = WeightedMultigraph::from_edges(g.vertex_count(), und);
    std::vector<char> side(static_cast<std::size_t>(g.vertex_count()), 0);
    {
      auto adj = support.adjacency();
      for (Vertex v = 0; v < g.vertex_count(); ++v) side[static_cast<std::size_t>(v)] = static_cast<char>(v & 1);
      bool changed = true;
      while (changed) {
        changed = false;
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
          Weight same = 0, cross = 0;
          for (EdgeId id : adj[static_cast<std::size_t>(v)]) {
            const Edge& e = support.edge(id);
            Vertex o = e.u == v ? e.v : e.u;
            (side[static_cast<std::size_t>(o)] == side[static_cast<std::size_t>(v)] ? same : cross) += e.w;
          }
          if (same > cross) {
            side[static_cast<std::size_t>(v)] ^= 1;
            changed = true;
          }
        }
      }
    }
    std::vector<std::tuple<Vertex, Vertex, Weight>> crossing;
    Task left, right;
    for (EdgeId id : t.edge_ids) {
      const DirectedEdge& e = g.edge(id);
      if (side[static_cast<std::size_t>(e.tail)] != side[static_cast<std::size_t>(e.head)]) {
        crossing.emplace_back(e.tail, e.head, e.w);
      } else if (side[static_cast<std::size_t>(e.tail)] == 0) {
        left.edge_ids.push_back(id);
      } else {
        right.edge_ids.push_back(id);
      }
    }
    if (crossing.empty()) {
      // Degenerate split; should not happen (the cut holds at least half the
      // weight), but guard against infinite recursion.
      throw GraphError("decompose_bipartite_dir: empty crossing set");
    }
    out.push_back(DirectedGraph::from_edges(g.vertex_count(), crossing));
    if (!left.edge_ids.empty()) todo.push_back(std::move(left));
    if (!right.edge_ids.empty()) todo.push_back(std::move(right));
  }
  return out;
}

DirectedGraph local_move(const DirectedGraph& g, Vertex u, Vertex x1, Vertex x2,
                         Vertex x3, Weight threshold, bool reverse) {
  const int n = g.vertex_count();
  if (threshold <= 0) {
    double t = std::pow(static_cast<double>(std::max(2, n)), 4.0);
    threshold = t >= static_cast<double>(kWeightCap) ? kWeightCap
                                                     : static_cast<Weight>(t);
  }
  std::map<std::pair<Vertex, Vertex>, Weight> w;
  for (const auto& e : g.edges()) w[{e.tail, e.head}] += e.w;
  auto get = [&](Vertex a, Vertex b) {
    auto it = w.find({a, b});
    return it == w.end() ? Weight{0} : it->second;
  };
  for (auto [a, b] : {std::pair{x1, x2}, std::pair{x2, x1}, std::pair{x2, x3},
                      std::pair{x3, x2}}) {
    if (get(a, b) < threshold) {
      throw GraphError("local_move: path weight below threshold between " +
                       std::to_string(a) + " and " + std::to_string(b));
    }
  }
  auto take = [&](Vertex a, Vertex b) {
    if (get(a, b) < 1) {
      throw GraphError("local_move: no unit weight on required edge " +
                       std::to_string(a) + "->" + std::to_string(b));
    }
    w[{a, b}] -= 1;
  };
  auto give = [&](Vertex a, Vertex b) { w[{a, b}] += 1; };
  if (!reverse) {
    take(u, x1);
    take(x2, x3);
    give(u, x3);
    give(x2, x1);
  } else {
    take(x1, u);
    take(x3, x2);
    give(x3, u);
    give(x1, x2);
  }
  std::vector<std::tuple<Vertex, Vertex, Weight>> edges;
  for (auto& [key, weight] : w) {
    if (weight > 0) edges.emplace_back(key.first, key.second, weight);
    if (weight < 0) throw GraphError("local_move: negative weight produced");
  }
  return DirectedGraph::from_edges(n, edges);
}

// --- powers-of-two reduction ----------------------------------------------------

namespace {

struct TreeDirKey {
  Vertex a, b;
  bool operator<(const TreeDirKey& o) const {
    return std::tie(a, b) < std::tie(o.a, o.b);
  }
};

// Per-component scaled spanning tree with adjustable directed capacities.
struct SupportTree {
  std::map<TreeDirKey, Rat> base;     // sigma * combined weight, both ways
  std::map<TreeDirKey, Rat> current;  // base plus adjustments
  std::vector<Vertex> parent;         // tree structure, -1 at roots
  std::vector<int> depth;
  std::vector<char> color;            // 2-coloring of the support

  Rat cap(Vertex a, Vertex b) const {
    auto it = current.find({a, b});
    return it == current.end() ? Rat(0) : it->second;
  }
  void adjust(Vertex a, Vertex b, const Rat& dw) { current[{a, b}] += dw; }
};

// Builds the maximum-combined-weight spanning forest plus the 2-coloring.
SupportTree build_support_tree(const DirectedGraph& g, const Rat& sigma) {
  const int n = g.vertex_count();
  SupportTree t;
  std::map<std::pair<Vertex, Vertex>, Weight> comb;
  for (const auto& e : g.edges()) {
    Vertex a = std::min(e.tail, e.head), b = std::max(e.tail, e.head);
    comb[{a, b}] += e.w;
  }
  std::vector<std::tuple<Weight, Vertex, Vertex>> sorted;
  for (auto& [key, w] : comb) sorted.emplace_back(w, key.first, key.second);
  std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
    if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
    return std::tie(std::get<1>(x), std::get<2>(x)) <
           std::tie(std::get<1>(y), std::get<2>(y));
  });
  std::vector<int> dsu(static_cast<std::size_t>(n));
  std::iota(dsu.begin(), dsu.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (dsu[static_cast<std::size_t>(x)] != x) {
      dsu[static_cast<std::size_t>(x)] = dsu[static_cast<std::size_t>(dsu[static_cast<std::size_t>(x)])];
      x = dsu[static_cast<std::size_t>(x)];
    }
    return x;
  };
  std::vector<std::vector<std::pair<Vertex, Weight>>> tree_adj(static_cast<std::size_t>(n));
  for (auto& [w, a, b] : sorted) {
    int ra = find(a), rb = find(b);
    if (ra == rb) continue;
    dsu[static_cast<std::size_t>(rb)] = ra;
    Rat tw = sigma * Rat(w);
    t.base[{a, b}] = tw;
    t.base[{b, a}] = tw;
    tree_adj[static_cast<std::size_t>(a)].push_back({b, w});
    tree_adj[static_cast<std::size_t>(b)].push_back({a, w});
  }
  t.current = t.base;

  t.parent.assign(static_cast<std::size_t>(n), -1);
  t.depth.assign(static_cast<std::size_t>(n), 0);
  t.color.assign(static_cast<std::size_t>(n), 0);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (Vertex root = 0; root < n; ++root) {
    if (seen[static_cast<std::size_t>(root)]) continue;
    std::deque<Vertex> q{root};
    seen[static_cast<std::size_t>(root)] = 1;
    while (!q.empty()) {
      Vertex v = q.front();
      q.pop_front();
      for (auto [o, w] : tree_adj[static_cast<std::size_t>(v)]) {
        if (seen[static_cast<std::size_t>(o)]) continue;
        seen[static_cast<std::size_t>(o)] = 1;
        t.parent[static_cast<std::size_t>(o)] = v;
        t.depth[static_cast<std::size_t>(o)] = t.depth[static_cast<std::size_t>(v)] + 1;
        t.color[static_cast<std::size_t>(o)] = static_cast<char>(1 - t.color[static_cast<std::size_t>(v)]);
        q.push_back(o);
      }
    }
  }
  return t;
}

std::vector<Vertex> tree_path(const SupportTree& t, Vertex a, Vertex b) {
  std::vector<Vertex> pa{a}, pb{b};
  Vertex x = a, y = b;
  while (x != y) {
    if (t.depth[static_cast<std::size_t>(x)] >= t.depth[static_cast<std::size_t>(y)]) {
      x = t.parent[static_cast<std::size_t>(x)];
      pa.push_back(x);
    } else {
      y = t.parent[static_cast<std::size_t>(y)];
      pb.push_back(y);
    }
    if (x < 0 || y < 0) throw GraphError("tree_path: endpoints in different trees");
  }
  // pa = [a .. lca], pb = [b .. lca]; append pb reversed without the lca.
  for (auto it = pb.rbegin() + 1; it != pb.rend(); ++it) pa.push_back(*it);
  return pa;
}

// Reroutes `amount` of weight on directed edge (tail -> head) along the tree
// path, absorbing it into the final tree edge. Capacities are checked
// against ratio * amount.
void reroute_trailing(SupportTree& t, Vertex tail, Vertex head, Weight amount,
                      const Rat& ratio, AlmostEqualBudget* budget) {
  std::vector<Vertex> path = tree_path(t, tail, head);
  if (path.size() < 2) throw GraphError("reroute_trailing: degenerate path");
  if (path.size() % 2 != 0) {
    throw GraphError("reroute_trailing: even tree distance (support not bipartite?)");
  }
  Rat amt(amount);
  // Slide the tail two hops at a time: p0 -> p2 -> ... -> p_{L-1}.
  std::size_t i = 0;
  while (path.size() - i > 2) {
    Vertex p0 = path[i], p1 = path[i + 1], p2 = path[i + 2];
    if (t.cap(p2, p1) < amt * ratio) {
      throw GraphError("reroute_trailing: capacity below ratio threshold");
    }
    t.adjust(p2, p1, -amt);
    t.adjust(p0, p1, amt);
    if (budget) ++budget->two_hop_moves;
    i += 2;
  }
  // Tail now adjacent to head; absorb into the tree edge.
  t.adjust(path[i], path[i + 1], amt);
  if (budget) ++budget->tree_absorptions;
}

}  // namespace

PowersOfTwoResult reduce_powers_of_two(const DirectedGraph& g,
                                       bool require_connected) {
  const int n = g.vertex_count();
  if (require_connected && g.edge_count() > 0) {
    auto lab = g.undirected_support_doubled().components();
    std::set<int> touched;
    for (const auto& e : g.edges()) {
      touched.insert(lab[static_cast<std::size_t>(e.tail)]);
    }
    if (touched.size() > 1) {
      throw GraphError("reduce_powers_of_two: disconnected support");
    }
  }

  PowersOfTwoResult out;
  // The trailing/capacity margin needs keep_bits > 8*ceil(log2 n) + 1.
  const int keep_bits =
      std::max({4, static_cast<int>(std::ceil(10.0 * std::log2(std::max(2, n)))),
                8 * ceil_log2_int(std::max(2, n)) + 2});
  out.kept_bits = keep_bits;
  const Rat sigma = pow2_rat(-4 * ceil_log2_int(std::max(2, n)));
  const Rat ratio = pow2_rat(4 * ceil_log2_int(std::max(2, n)));  // n^4-ish

  bool any_trailing = false;
  for (const auto& e : g.edges()) {
    if (bit_width(e.w) > keep_bits) any_trailing = true;
  }

  std::map<int, std::vector<std::tuple<Vertex, Vertex, Weight>>> classes;
  auto add_bits = [&](Vertex tail, Vertex head, Weight head_part) {
    for (int bit = 0; bit < 63; ++bit) {
      if (head_part & (Weight{1} << bit)) {
        classes[bit].emplace_back(tail, head, Weight{1} << bit);
      }
    }
  };

  if (!any_trailing) {
    SupportTree t = build_support_tree(g, sigma);
    for (const auto& e : g.edges()) add_bits(e.tail, e.head, e.w);
    out.tree.n = n;
    out.tree_base.n = n;
    out.budget.tree_additions = static_cast<long long>(t.base.size()) / 2;
    for (auto& [key, w] : t.base) out.tree_base.add(key.a, key.b, w);
    for (auto& [key, w] : t.current) out.tree.add(key.a, key.b, w);
    out.tree.compact();
    out.tree_base.compact();
    for (auto& [bit, edges] : classes) {
      out.classes.emplace_back(bit, DirectedGraph::from_edges(n, edges));
    }
    return out;
  }

  // Trailing bits require parity-safe moves: split into bipartite parts and
  // reroute within each part along its own scaled support forest.
  out.tree.n = n;
  out.tree_base.n = n;
  for (const DirectedGraph& part : decompose_bipartite_dir(g)) {
    SupportTree t = build_support_tree(part, sigma);
    out.budget.tree_additions += static_cast<long long>(t.base.size()) / 2;
    for (const auto& e : part.edges()) {
      int b = bit_width(e.w);
      if (b <= keep_bits) {
        add_bits(e.tail, e.head, e.w);
        continue;
      }
      int shift = b - keep_bits;
      Weight head_part = (e.w >> shift) << shift;
      Weight trail = e.w - head_part;
      add_bits(e.tail, e.head, head_part);
      if (trail > 0) {
        reroute_trailing(t, e.tail, e.head, trail, ratio, &out.budget);
        ++out.rerouted_edges;
      }
    }
    for (auto& [key, w] : t.base) out.tree_base.add(key.a, key.b, w);
    for (auto& [key, w] : t.current) out.tree.add(key.a, key.b, w);
  }
  out.tree.compact();
  out.tree_base.compact();
  for (auto& [bit, edges] : classes) {
    out.classes.emplace_back(bit, DirectedGraph::from_edges(n, edges));
  }
  return out;
}

// --- full reduction ---------------------------------------------------------------

ReduceToUnitResult reduce_to_unit(const DirectedGraph& g, int xi) {
  if (!g.is_eulerian()) throw GraphError("reduce_to_unit: input is not Eulerian");
  const int n = g.vertex_count();
  if (xi <= 0) xi = std::max(2, 4 * ceil_log2_int(std::max(2, n)));

  ReduceToUnitResult out;
  out.xi = xi;
  out.h_sparse.n = n;

  std::map<int, std::vector<std::tuple<Vertex, Vertex, Weight>>> final_classes;

  for (const DirectedGraph& part : decompose_bipartite_dir(g)) {
    PowersOfTwoResult pw = reduce_powers_of_two(part, /*require_connected=*/false);
    out.budget.tree_additions += pw.budget.tree_additions;
    out.budget.two_hop_moves += pw.budget.two_hop_moves;
    out.budget.tree_absorptions += pw.budget.tree_absorptions;
    // Net support-tree perturbation keeps the degree identity exact.
    {
      std::map<std::pair<Vertex, Vertex>, Rat> net;
      for (const auto& e : pw.tree.edges) net[{e.tail, e.head}] += e.w;
      for (const auto& e : pw.tree_base.edges) net[{e.tail, e.head}] -= e.w;
      for (auto& [key, w] : net) {
        if (w != Rat(0)) out.h_sparse.add(key.first, key.second, w);
      }
    }

    // 2-coloring of the part's support for the side representatives.
    std::vector<char> color(static_cast<std::size_t>(n), 0);
    {
      WeightedMultigraph support = part.undirected_support_doubled();
      auto adj = support.adjacency();
      std::vector<char> seen(static_cast<std::size_t>(n), 0);
      for (Vertex root = 0; root < n; ++root) {
        if (seen[static_cast<std::size_t>(root)] || adj[static_cast<std::size_t>(root)].empty()) continue;
        std::deque<Vertex> q{root};
        seen[static_cast<std::size_t>(root)] = 1;
        while (!q.empty()) {
          Vertex v = q.front();
          q.pop_front();
          for (EdgeId id : adj[static_cast<std::size_t>(v)]) {
            const Edge& e = support.edge(id);
            Vertex o = e.u == v ? e.v : e.u;
            if (seen[static_cast<std::size_t>(o)]) {
              if (color[static_cast<std::size_t>(o)] == color[static_cast<std::size_t>(v)]) {
                throw GraphError("reduce_to_unit: part support not bipartite");
              }
              continue;
            }
            seen[static_cast<std::size_t>(o)] = 1;
            color[static_cast<std::size_t>(o)] = static_cast<char>(1 - color[static_cast<std::size_t>(v)]);
            q.push_back(o);
          }
        }
      }
    }

    // Buckets j = i mod xi, classes processed in decreasing i.
    std::map<int, std::vector<int>> buckets;  // j -> class exponents, desc
    std::map<int, const DirectedGraph*> class_by_exp;
    for (auto& [i, cls] : pw.classes) {
      buckets[i % xi].push_back(i);
      class_by_exp[i] = &cls;
    }
    for (auto& [j, exps] : buckets) {
      std::sort(exps.begin(), exps.end(), std::greater<int>());

      // Union-find over higher-class tree edges; bucket-tree capacities.
      std::vector<int> dsu(static_cast<std::size_t>(n));
      std::iota(dsu.begin(), dsu.end(), 0);
      std::function<int(int)> find = [&](int x) {
        while (dsu[static_cast<std::size_t>(x)] != x) {
          dsu[static_cast<std::size_t>(x)] = dsu[static_cast<std::size_t>(dsu[static_cast<std::size_t>(x)])];
          x = dsu[static_cast<std::size_t>(x)];
        }
        return x;
      };
      std::map<std::pair<Vertex, Vertex>, Rat> bucket_tree;  // directed weights
      std::vector<std::vector<Vertex>> tree_adj(static_cast<std::size_t>(n));
      long long bucket_touch = 0;

      for (int i : exps) {
        const DirectedGraph& cls = *class_by_exp[i];
        const Rat wclass = pow2_rat(i);

        // Snapshot components (higher classes only) and representatives.
        std::vector<int> snap(static_cast<std::size_t>(n));
        for (Vertex v = 0; v < n; ++v) snap[static_cast<std::size_t>(v)] = find(v);
        std::map<int, std::array<Vertex, 2>> reps;
        for (Vertex v = 0; v < n; ++v) {
          int r = snap[static_cast<std::size_t>(v)];
          auto it = reps.find(r);
          if (it == reps.end()) reps[r] = {-1, -1};
          auto& pair = reps[r];
          int side = color[static_cast<std::size_t>(v)];
          if (pair[static_cast<std::size_t>(side)] < 0) pair[static_cast<std::size_t>(side)] = v;
        }

        // Tree paths within snapshot components follow higher tree edges.
        // Tail and head moves compensate the tree in mirrored orientations
        // so both in- and out-degrees stay exact.
        auto move_to_rep = [&](Vertex v, bool is_tail) {
          int comp = snap[static_cast<std::size_t>(v)];
          Vertex rep = reps[comp][static_cast<std::size_t>(color[static_cast<std::size_t>(v)])];
          if (rep < 0 || rep == v) return v;
          // BFS path from v to rep over tree_adj within the component.
          std::vector<Vertex> par(static_cast<std::size_t>(n), -2);
          std::deque<Vertex> q{v};
          par[static_cast<std::size_t>(v)] = -1;
          while (!q.empty() && par[static_cast<std::size_t>(rep)] == -2) {
            Vertex x = q.front();
            q.pop_front();
            for (Vertex o : tree_adj[static_cast<std::size_t>(x)]) {
              if (par[static_cast<std::size_t>(o)] != -2) continue;
              par[static_cast<std::size_t>(o)] = x;
              q.push_back(o);
            }
          }
          if (par[static_cast<std::size_t>(rep)] == -2) {
            throw GraphError("reduce_to_unit: representative unreachable");
          }
          std::vector<Vertex> path;
          for (Vertex x = rep; x != -1; x = par[static_cast<std::size_t>(x)]) path.push_back(x);
          std::reverse(path.begin(), path.end());  // v ... rep
          if ((path.size() - 1) % 2 != 0) {
            throw GraphError("reduce_to_unit: odd move distance");
          }
          for (std::size_t t = 0; t + 2 < path.size(); t += 2) {
            // Two-hop slide; capacities are signed bookkeeping.
            ++out.budget.two_hop_moves;
            if (is_tail) {
              bucket_tree[{path[t + 2], path[t + 1]}] -= wclass;
              bucket_tree[{path[t], path[t + 1]}] += wclass;
            } else {
              bucket_tree[{path[t + 1], path[t + 2]}] -= wclass;
              bucket_tree[{path[t + 1], path[t]}] += wclass;
            }
          }
          return rep;
        };

        // Phase 1: Kruskal classification. Tree edges of this class must not
        // serve as routing paths for this class (equal weight), so their
        // adjacency is appended only after the moves.
        std::set<int> touched;
        std::vector<const DirectedEdge*> tree_edges, non_tree;
        for (const auto& e : cls.edges()) {
          int ra = find(e.tail), rb = find(e.head);
          if (ra != rb) {
            dsu[static_cast<std::size_t>(rb)] = ra;
            tree_edges.push_back(&e);
            touched.insert(snap[static_cast<std::size_t>(e.tail)]);
            touched.insert(snap[static_cast<std::size_t>(e.head)]);
          } else {
            non_tree.push_back(&e);
          }
        }
        // Phase 2: move non-tree endpoints to their snapshot representatives
        // along strictly-higher tree edges.
        for (const DirectedEdge* e : non_tree) {
          Vertex na = move_to_rep(e->tail, /*is_tail=*/true);
          Vertex nb = move_to_rep(e->head, /*is_tail=*/false);
          if (na == nb) {
            throw GraphError("reduce_to_unit: self loop after moves");
          }
          if (snap[static_cast<std::size_t>(e->tail)] !=
              snap[static_cast<std::size_t>(e->head)]) {
            touched.insert(snap[static_cast<std::size_t>(e->tail)]);
            touched.insert(snap[static_cast<std::size_t>(e->head)]);
          }
          final_classes[i].emplace_back(na, nb, e->w);
        }
        for (const DirectedEdge* e : tree_edges) {
          bucket_tree[{e->tail, e->head}] += Rat(BigInt(e->w));
          tree_adj[static_cast<std::size_t>(e->tail)].push_back(e->head);
          tree_adj[static_cast<std::size_t>(e->head)].push_back(e->tail);
        }
        bucket_touch += static_cast<long long>(touched.size());
      }
      out.touched_components_max_bucket =
          std::max(out.touched_components_max_bucket, bucket_touch);
      for (auto& [key, w] : bucket_tree) {
        if (w != Rat(0)) out.h_sparse.add(key.first, key.second, w);
      }
    }
  }

  out.h_sparse.compact();
  for (auto& [i, edges] : final_classes) {
    DirectedGraph cls = DirectedGraph::from_edges(n, edges);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (const auto& e : cls.edges()) {
      seen[static_cast<std::size_t>(e.tail)] = 1;
      seen[static_cast<std::size_t>(e.head)] = 1;
    }
    for (char c : seen) out.class_vertex_total += c;
    out.classes.emplace_back(i, std::move(cls));
  }
  return out;
}

}  // namespace cyclesparse
