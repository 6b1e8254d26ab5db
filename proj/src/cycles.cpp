#include "cyclesparse/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

#include "cyclesparse/expander.hpp"

namespace cyclesparse {

namespace {

int ceil_log2(long long n) {
  int b = 0;
  while ((1LL << b) < n) ++b;
  return b;
}

}  // namespace

bool is_closed_walk(const WeightedMultigraph& g, const std::vector<EdgeId>& cycle) {
  if (cycle.size() < 2) return false;
  std::vector<EdgeId> sorted = cycle;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  const Edge& first = g.edge(cycle.front());
  for (Vertex start : {first.u, first.v}) {
    Vertex cur = start;
    bool ok = true;
    for (EdgeId id : cycle) {
      const Edge& e = g.edge(id);
      if (e.u == cur) {
        cur = e.v;
      } else if (e.v == cur) {
        cur = e.u;
      } else {
        ok = false;
        break;
      }
    }
    if (ok && cur == start) return true;
  }
  return false;
}

CycleValidation validate_cycle_decomposition(const WeightedMultigraph& g,
                                             const CycleDecomposition& cd) {
  CycleValidation out;
  auto fail = [&](const std::string& msg) {
    out.ok = false;
    out.message = msg;
    return out;
  };
  std::vector<int> seen(static_cast<std::size_t>(g.edge_count()), 0);
  auto mark = [&](EdgeId id) {
    if (id < 0 || id >= g.edge_count()) return false;
    return ++seen[static_cast<std::size_t>(id)] == 1;
  };
  for (std::size_t ci = 0; ci < cd.cycles.size(); ++ci) {
    const auto& c = cd.cycles[ci];
    if (static_cast<int>(c.size()) > cd.length_bound) {
      return fail("cycle " + std::to_string(ci) + " longer than bound L");
    }
    if (!is_closed_walk(g, c)) {
      return fail("cycle " + std::to_string(ci) + " is not a closed walk with distinct edges");
    }
    for (EdgeId id : c) {
      if (!mark(id)) return fail("edge " + std::to_string(id) + " used twice");
    }
  }
  for (EdgeId id : cd.extras) {
    if (!mark(id)) return fail("extra edge " + std::to_string(id) + " duplicated");
  }
  for (int i = 0; i < g.edge_count(); ++i) {
    if (seen[static_cast<std::size_t>(i)] != 1) {
      return fail("edge " + std::to_string(i) + " not covered exactly once");
    }
  }
  if (static_cast<long long>(cd.extras.size()) > cd.extras_bound) {
    return fail("extras exceed bound mhat");
  }
  return out;
}

std::string cycle_decomposition_to_json(const CycleDecomposition& cd) {
  std::ostringstream os;
  os << "{\"cycles\": [";
  for (std::size_t i = 0; i < cd.cycles.size(); ++i) {
    if (i) os << ", ";
    os << "[";
    for (std::size_t j = 0; j < cd.cycles[i].size(); ++j) {
      if (j) os << ", ";
      os << cd.cycles[i][j];
    }
    os << "]";
  }
  os << "], \"extras\": [";
  for (std::size_t i = 0; i < cd.extras.size(); ++i) {
    if (i) os << ", ";
    os << cd.extras[i];
  }
  os << "], \"L\": " << cd.length_bound << ", \"mhat\": " << cd.extras_bound << "}";
  return os.str();
}

// --- naive decomposition -----------------------------------------------------

namespace {

// Mutable alive-edge view used by the peel/BFS loop.
struct AliveGraph {
  const WeightedMultigraph* g;
  std::vector<std::vector<EdgeId>> adj;
  std::vector<char> edge_alive;
  std::vector<char> vertex_alive;
  std::vector<int> degree;
  int alive_vertices = 0;
  long long alive_edges = 0;

  explicit AliveGraph(const WeightedMultigraph& graph) : g(&graph) {
    adj = graph.adjacency();
    edge_alive.assign(static_cast<std::size_t>(graph.edge_count()), 1);
    vertex_alive.assign(static_cast<std::size_t>(graph.vertex_count()), 1);
    degree.assign(static_cast<std::size_t>(graph.vertex_count()), 0);
    for (const Edge& e : graph.edges()) {
      ++degree[static_cast<std::size_t>(e.u)];
      ++degree[static_cast<std::size_t>(e.v)];
    }
    alive_vertices = graph.vertex_count();
    alive_edges = graph.edge_count();
  }

  Vertex other(EdgeId id, Vertex x) const {
    const Edge& e = g->edge(id);
    return e.u == x ? e.v : e.u;
  }

  void kill_edge(EdgeId id) {
    if (!edge_alive[static_cast<std::size_t>(id)]) return;
    edge_alive[static_cast<std::size_t>(id)] = 0;
    const Edge& e = g->edge(id);
    --degree[static_cast<std::size_t>(e.u)];
    --degree[static_cast<std::size_t>(e.v)];
    --alive_edges;
  }

  void kill_vertex(Vertex v) {
    if (!vertex_alive[static_cast<std::size_t>(v)]) return;
    vertex_alive[static_cast<std::size_t>(v)] = 0;
    --alive_vertices;
  }
};

}  // namespace

CycleDecomposition naive_cycle_decomposition(const WeightedMultigraph& g) {
  if (!g.has_uniform_weight()) {
    throw GraphError("naive_cycle_decomposition expects an equal-weight class");
  }
  const int n = g.vertex_count();
  CycleDecomposition cd;
  cd.length_bound = std::max(2, 2 * ceil_log2(std::max(2, n)));
  cd.extras_bound = 2LL * n;
  if (g.edge_count() == 0) return cd;

  AliveGraph a(g);

  // Parallel pairs become 2-cycles before anything else.
  {
    std::map<std::pair<Vertex, Vertex>, std::vector<EdgeId>> groups;
    for (const Edge& e : g.edges()) {
      groups[{std::min(e.u, e.v), std::max(e.u, e.v)}].push_back(e.id);
    }
    for (auto& [key, ids] : groups) {
      for (std::size_t i = 0; i + 1 < ids.size(); i += 2) {
        cd.cycles.push_back({ids[i], ids[i + 1]});
        a.kill_edge(ids[i]);
        a.kill_edge(ids[i + 1]);
      }
    }
  }

  auto peel = [&]() {
    std::deque<Vertex> q;
    for (Vertex v = 0; v < n; ++v) {
      if (a.vertex_alive[static_cast<std::size_t>(v)] && a.degree[static_cast<std::size_t>(v)] <= 2) q.push_back(v);
    }
    while (!q.empty()) {
      Vertex v = q.front();
      q.pop_front();
      if (!a.vertex_alive[static_cast<std::size_t>(v)] || a.degree[static_cast<std::size_t>(v)] > 2) continue;
      for (EdgeId id : a.adj[static_cast<std::size_t>(v)]) {
        if (!a.edge_alive[static_cast<std::size_t>(id)]) continue;
        Vertex o = a.other(id, v);
        cd.extras.push_back(id);
        a.kill_edge(id);
        if (a.vertex_alive[static_cast<std::size_t>(o)] && a.degree[static_cast<std::size_t>(o)] <= 2) q.push_back(o);
      }
      a.kill_vertex(v);
    }
    // Degree-0 leftovers.
    for (Vertex v = 0; v < n; ++v) {
      if (a.vertex_alive[static_cast<std::size_t>(v)] && a.degree[static_cast<std::size_t>(v)] == 0) a.kill_vertex(v);
    }
  };

  std::vector<int> parent_edge(static_cast<std::size_t>(n));
  std::vector<Vertex> parent(static_cast<std::size_t>(n));
  std::vector<int> visit_mark(static_cast<std::size_t>(n), -1);
  int epoch = 0;

  while (true) {
    peel();
    if (a.alive_edges == 0) break;

    // BFS from the smallest alive vertex until the first non-tree edge.
    Vertex root = -1;
    for (Vertex v = 0; v < n; ++v) {
      if (a.vertex_alive[static_cast<std::size_t>(v)] && a.degree[static_cast<std::size_t>(v)] > 0) {
        root = v;
        break;
      }
    }
    if (root < 0) break;

    ++epoch;
    std::deque<Vertex> q{root};
    visit_mark[static_cast<std::size_t>(root)] = epoch;
    parent[static_cast<std::size_t>(root)] = -1;
    parent_edge[static_cast<std::size_t>(root)] = -1;
    EdgeId found_edge = -1;
    Vertex fu = -1, fv = -1;
    while (!q.empty() && found_edge < 0) {
      Vertex u = q.front();
      q.pop_front();
      for (EdgeId id : a.adj[static_cast<std::size_t>(u)]) {
        if (!a.edge_alive[static_cast<std::size_t>(id)]) continue;
        if (id == parent_edge[static_cast<std::size_t>(u)]) continue;
        Vertex w = a.other(id, u);
        if (visit_mark[static_cast<std::size_t>(w)] != epoch) {
          visit_mark[static_cast<std::size_t>(w)] = epoch;
          parent[static_cast<std::size_t>(w)] = u;
          parent_edge[static_cast<std::size_t>(w)] = id;
          q.push_back(w);
        } else {
          found_edge = id;
          fu = u;
          fv = w;
          break;
        }
      }
    }
    if (found_edge < 0) {
      // Min degree 3 guarantees a cycle; reaching here means the component
      // was exhausted. Treat remaining edges as extras defensively.
      for (Vertex v = 0; v < n; ++v) {
        if (!a.vertex_alive[static_cast<std::size_t>(v)]) continue;
        for (EdgeId id : a.adj[static_cast<std::size_t>(v)]) {
          if (a.edge_alive[static_cast<std::size_t>(id)]) {
            cd.extras.push_back(id);
            a.kill_edge(id);
          }
        }
      }
      break;
    }

    // Cycle = non-tree edge + the two root paths up to the LCA.
    std::vector<EdgeId> path_u, path_v;
    std::vector<Vertex> anc_u;
    {
      Vertex x = fu;
      while (x != -1) {
        anc_u.push_back(x);
        x = parent[static_cast<std::size_t>(x)];
      }
    }
    std::vector<char> on_u_path(static_cast<std::size_t>(n), 0);
    for (Vertex x : anc_u) on_u_path[static_cast<std::size_t>(x)] = 1;
    Vertex lca = fv;
    while (!on_u_path[static_cast<std::size_t>(lca)]) {
      path_v.push_back(parent_edge[static_cast<std::size_t>(lca)]);
      lca = parent[static_cast<std::size_t>(lca)];
    }
    {
      Vertex x = fu;
      while (x != lca) {
        path_u.push_back(parent_edge[static_cast<std::size_t>(x)]);
        x = parent[static_cast<std::size_t>(x)];
      }
    }
    // Traversal order: lca -> fu (reversed path_u), edge, fv -> lca (path_v).
    std::vector<EdgeId> cycle(path_u.rbegin(), path_u.rend());
    cycle.push_back(found_edge);
    for (EdgeId id : path_v) cycle.push_back(id);
    for (EdgeId id : cycle) a.kill_edge(id);
    cd.cycles.push_back(std::move(cycle));
  }

  std::sort(cd.extras.begin(), cd.extras.end());
  return cd;
}

// --- bounded-degree extraction ----------------------------------------------

BoundedDegreeGraph extract_bounded_degree(const WeightedMultigraph& g, int delta,
                                          bool enforce_min_degree) {
  if (delta < 1) throw GraphError("extract_bounded_degree: delta must be >= 1");
  const int n = g.vertex_count();
  auto adj = g.adjacency();
  if (enforce_min_degree) {
    for (Vertex v = 0; v < n; ++v) {
      if (static_cast<int>(adj[static_cast<std::size_t>(v)].size()) < delta) {
        throw GraphError("extract_bounded_degree: vertex " + std::to_string(v) +
                         " has degree below delta");
      }
    }
  }

  std::vector<char> chosen(static_cast<std::size_t>(g.edge_count()), 0);
  for (Vertex v = 0; v < n; ++v) {
    int take = std::min<std::size_t>(static_cast<std::size_t>(delta), adj[static_cast<std::size_t>(v)].size());
    for (int i = 0; i < take; ++i) chosen[static_cast<std::size_t>(adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)])] = 1;
  }

  std::vector<int> hdeg(static_cast<std::size_t>(n), 0);
  for (const Edge& e : g.edges()) {
    if (!chosen[static_cast<std::size_t>(e.id)]) continue;
    ++hdeg[static_cast<std::size_t>(e.u)];
    ++hdeg[static_cast<std::size_t>(e.v)];
  }

  // Assign slots: vertices with degree > 2*delta split into floor(deg/delta)
  // copies with nearly equal shares, edges distributed in ascending id order.
  std::vector<int> slot_base(static_cast<std::size_t>(n), 0);
  std::vector<int> slot_count(static_cast<std::size_t>(n), 1);
  int next = 0;
  BoundedDegreeGraph out;
  for (Vertex v = 0; v < n; ++v) {
    slot_base[static_cast<std::size_t>(v)] = next;
    int q = 1;
    if (hdeg[static_cast<std::size_t>(v)] > 2 * delta) q = hdeg[static_cast<std::size_t>(v)] / delta;
    slot_count[static_cast<std::size_t>(v)] = q;
    next += q;
    for (int i = 0; i < q; ++i) out.vertex_map.push_back(v);
  }

  // Per-vertex share sizes, as even as possible.
  std::vector<int> filled(static_cast<std::size_t>(next), 0);
  std::vector<std::vector<int>> share(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) {
    int q = slot_count[static_cast<std::size_t>(v)];
    int d = hdeg[static_cast<std::size_t>(v)];
    share[static_cast<std::size_t>(v)].assign(static_cast<std::size_t>(q), d / q);
    for (int i = 0; i < d % q; ++i) ++share[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)];
  }
  std::vector<int> cursor(static_cast<std::size_t>(n), 0);
  auto assign_slot = [&](Vertex v) {
    int q = slot_count[static_cast<std::size_t>(v)];
    int c = cursor[static_cast<std::size_t>(v)];
    while (c < q - 1 && filled[static_cast<std::size_t>(slot_base[static_cast<std::size_t>(v)] + c)] >=
                            share[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)]) {
      ++c;
    }
    cursor[static_cast<std::size_t>(v)] = c;
    int slot = slot_base[static_cast<std::size_t>(v)] + c;
    ++filled[static_cast<std::size_t>(slot)];
    return slot;
  };

  std::vector<Edge> hedges;
  for (const Edge& e : g.edges()) {
    if (!chosen[static_cast<std::size_t>(e.id)]) continue;
    Vertex a = static_cast<Vertex>(assign_slot(e.u));
    Vertex b = static_cast<Vertex>(assign_slot(e.v));
    hedges.push_back(Edge{static_cast<EdgeId>(hedges.size()), a, b, e.w});
    out.edge_map.push_back(e.id);
  }
  out.h = WeightedMultigraph(next, std::move(hedges));
  return out;
}

// --- porting edges onto S -----------------------------------------------------

namespace {

// Lazy walk that stops at the first S-hit, recording traversed edge ids.
// Returns true on a hit within the step cap; the path is loop-erased and
// contains no internal S vertices.
bool walk_to_targets(const std::vector<std::vector<EdgeId>>& adj,
                     const WeightedMultigraph& g, const std::vector<char>& in_s,
                     Vertex start, EdgeId forbidden, int max_steps, Prng& rng,
                     std::vector<EdgeId>* path_out,
                     std::vector<long long>* congestion) {
  Vertex cur = start;
  std::vector<std::pair<Vertex, EdgeId>> trace;  // (vertex reached, via edge)
  trace.reserve(64);
  for (int step = 0; step < max_steps; ++step) {
    if (rng.coin()) continue;
    const auto& inc = adj[static_cast<std::size_t>(cur)];
    if (inc.empty()) return false;
    EdgeId eid = inc[static_cast<std::size_t>(rng.below(inc.size()))];
    if (eid == forbidden) return false;  // paper discards walks using e
    const Edge& e = g.edge(eid);
    cur = (e.u == cur) ? e.v : e.u;
    trace.emplace_back(cur, eid);
    if (congestion) ++(*congestion)[static_cast<std::size_t>(eid)];
    if (in_s[static_cast<std::size_t>(cur)]) {
      // Loop-erase: keep the first-visit prefix per vertex. The walk stopped
      // at its first S-hit, so the erased path ends at that vertex and has
      // no internal S vertices.
      std::map<Vertex, std::size_t> pos;  // vertex -> entries up to and incl. it
      std::vector<std::pair<Vertex, EdgeId>> path;
      pos[start] = 0;
      for (auto& [v, id] : trace) {
        auto it = pos.find(v);
        if (it != pos.end()) {
          while (path.size() > it->second) {
            pos.erase(path.back().first);
            path.pop_back();
          }
        } else {
          path.emplace_back(v, id);
          pos[v] = path.size();
        }
      }
      path_out->clear();
      for (auto& [v, id] : path) path_out->push_back(id);
      return !path_out->empty();
    }
  }
  return false;
}

}  // namespace

MoveEdgesResult move_edges_expander(const WeightedMultigraph& g, double phi,
                                    int k, Prng& rng,
                                    const MoveEdgesOptions& opts) {
  if (g.vertex_count() == 0 || g.edge_count() == 0) {
    throw GraphError("move_edges_expander: empty graph");
  }
  if (k < 1) throw GraphError("move_edges_expander: k must be >= 1");
  if (!(phi > 0)) throw GraphError("move_edges_expander: phi must be positive");

  MoveEdgesResult res;
  const int n = g.vertex_count();
  const long long m = g.edge_count();
  const double logn = std::max(1.0, std::log2(static_cast<double>(std::max(2, n))));
  auto adj = g.adjacency();

  int dmin = g.edge_count();
  for (Vertex v = 0; v < n; ++v) {
    dmin = std::min(dmin, static_cast<int>(adj[static_cast<std::size_t>(v)].size()));
  }
  if (k < 10 * logn) {
    res.diag.warnings.push_back("k below 10*log2(n)");
  }
  if (static_cast<double>(k) > phi * phi * dmin / (100.0 * logn)) {
    res.diag.warnings.push_back("k above phi^2*dmin/(100 log n)");
  }

  // Step 1: pair parallel edges.
  std::vector<char> used(static_cast<std::size_t>(g.edge_count()), 0);
  std::vector<PartialCycle> pair_cycles;
  {
    std::map<std::pair<Vertex, Vertex>, std::vector<EdgeId>> groups;
    for (const Edge& e : g.edges()) {
      groups[{std::min(e.u, e.v), std::max(e.u, e.v)}].push_back(e.id);
    }
    for (auto& [key, ids] : groups) {
      for (std::size_t i = 0; i + 1 < ids.size(); i += 2) {
        PartialCycle c;
        c.edges = {ids[i], ids[i + 1]};
        c.closed = true;
        pair_cycles.push_back(std::move(c));
        used[static_cast<std::size_t>(ids[i])] = 1;
        used[static_cast<std::size_t>(ids[i + 1])] = 1;
      }
    }
  }

  // Step 2: S = top-degree vertices.
  int s_size = static_cast<int>((n + k - 1) / k);
  std::vector<Vertex> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    return adj[static_cast<std::size_t>(a)].size() > adj[static_cast<std::size_t>(b)].size();
  });
  std::vector<Vertex> s(order.begin(), order.begin() + s_size);
  std::sort(s.begin(), s.end());
  std::vector<char> in_s(static_cast<std::size_t>(n), 0);
  for (Vertex v : s) in_s[static_cast<std::size_t>(v)] = 1;

  const int walk_len = static_cast<int>(std::min<double>(
      opts.max_walk_steps,
      std::ceil(opts.walk_len_mult * logn / (phi * phi))));
  const int walks_per_endpoint = opts.walks_per_endpoint * k;

  double req = std::pow(phi, 4) * static_cast<double>(m) /
               (2e3 * static_cast<double>(k) * logn * logn);
  long long required = req > 0 ? static_cast<long long>(std::ceil(req)) : 0;
  res.diag.required_cycles = required;

  std::vector<long long> congestion(static_cast<std::size_t>(g.edge_count()), 0);
  std::vector<PartialCycle> chosen;
  for (int attempt = 0;; ++attempt) {
    if (attempt > opts.retry_budget) {
      throw GraphError(
          "move_edges_expander: retry budget exhausted (found " +
          std::to_string(chosen.size()) + " of " + std::to_string(required) +
          " cycles)");
    }
    if (attempt > 0) ++res.diag.retries;
    if (attempt == opts.halve_after + 1 && required > 1) {
      required = (required + 1) / 2;
      res.diag.count_halved = true;
      res.diag.warnings.push_back("cycle-count threshold halved after retries");
    }

    // Step 3: candidate cycles from paired walks.
    struct Candidate {
      std::vector<EdgeId> edges;
      Vertex s1, s2;
      EdgeId anchor;
    };
    std::vector<Candidate> cands;
    for (const Edge& e : g.edges()) {
      if (used[static_cast<std::size_t>(e.id)]) continue;
      if (in_s[static_cast<std::size_t>(e.u)] && in_s[static_cast<std::size_t>(e.v)]) continue;
      bool ok = true;
      std::vector<EdgeId> path_u, path_v;
      Vertex a1 = e.u, a2 = e.v;
      for (int side = 0; side < 2 && ok; ++side) {
        Vertex ep = side == 0 ? e.u : e.v;
        auto* path = side == 0 ? &path_u : &path_v;
        if (in_s[static_cast<std::size_t>(ep)]) continue;
        bool hit = false;
        for (int t = 0; t < walks_per_endpoint && !hit; ++t) {
          hit = walk_to_targets(adj, g, in_s, ep, e.id, walk_len, rng, path,
                                &congestion);
        }
        ok = hit;
      }
      if (!ok) continue;
      // Attachment points are the final vertices of the paths.
      auto end_vertex = [&](Vertex from, const std::vector<EdgeId>& path) {
        Vertex cur = from;
        for (EdgeId id : path) {
          const Edge& pe = g.edge(id);
          cur = (pe.u == cur) ? pe.v : pe.u;
        }
        return cur;
      };
      a1 = in_s[static_cast<std::size_t>(e.u)] ? e.u : end_vertex(e.u, path_u);
      a2 = in_s[static_cast<std::size_t>(e.v)] ? e.v : end_vertex(e.v, path_v);
      // Traversal a1 -> u (path_u reversed), e, v -> a2 (path_v).
      Candidate c;
      c.edges.assign(path_u.rbegin(), path_u.rend());
      c.edges.push_back(e.id);
      for (EdgeId id : path_v) c.edges.push_back(id);
      std::vector<EdgeId> dedupe = c.edges;
      std::sort(dedupe.begin(), dedupe.end());
      if (std::adjacent_find(dedupe.begin(), dedupe.end()) != dedupe.end()) continue;
      c.s1 = a1;
      c.s2 = a2;
      c.anchor = e.id;
      cands.push_back(std::move(c));
    }

    // Step 4: greedy edge-disjoint selection, shortest first.
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
      return a.edges.front() < b.edges.front();
    });
    std::vector<char> used_round = used;
    chosen.clear();
    for (const Candidate& c : cands) {
      bool free = true;
      for (EdgeId id : c.edges) {
        if (used_round[static_cast<std::size_t>(id)]) {
          free = false;
          break;
        }
      }
      if (!free) continue;
      for (EdgeId id : c.edges) used_round[static_cast<std::size_t>(id)] = 1;
      PartialCycle pc;
      pc.edges = c.edges;
      pc.closed = (c.s1 == c.s2);
      if (!pc.closed) {
        pc.s1 = c.s1;
        pc.s2 = c.s2;
      }
      chosen.push_back(std::move(pc));
    }

    if (static_cast<long long>(chosen.size()) + static_cast<long long>(pair_cycles.size()) >= required) {
      break;
    }
  }

  res.targets = s;
  res.partial.targets = s;
  res.partial.cycles = pair_cycles;
  for (auto& c : chosen) res.partial.cycles.push_back(std::move(c));
  res.partial.length_bound = 1 + 2 * walk_len;
  res.diag.found_cycles = static_cast<long long>(res.partial.cycles.size());
  res.diag.max_edge_congestion =
      congestion.empty() ? 0 : *std::max_element(congestion.begin(), congestion.end());
  return res;
}

MoveEdgesResult move_edges(const WeightedMultigraph& g, int k, Prng& rng,
                           const MoveEdgesOptions& opts) {
  if (g.edge_count() == 0) throw GraphError("move_edges: empty graph");
  auto adj = g.adjacency();
  std::size_t dmin = adj.empty() ? 0 : adj[0].size();
  for (const auto& inc : adj) dmin = std::min(dmin, inc.size());

  double alpha = static_cast<double>(std::max<std::size_t>(dmin, 1)) / (4.0 * opts.gamma_ns);
  EdgeExpanderSplit split = ns_style_decompose(g, alpha);

  MoveEdgesResult res;
  res.diag.alpha = alpha;
  res.diag.measured_gamma =
      alpha > 0 && g.vertex_count() > 0
          ? static_cast<double>(split.sparse_part.size()) /
                (alpha * static_cast<double>(g.vertex_count()))
          : 0;

  for (std::size_t ci = 0; ci < split.dense_components.size(); ++ci) {
    const auto& comp = split.dense_components[ci];
    auto [sub, ids] = g.induced_subgraph(comp);
    if (sub.edge_count() == 0) continue;
    if (static_cast<int>(comp.size()) <= k) {
      CycleDecomposition cd = naive_cycle_decomposition(sub);
      for (const auto& cyc : cd.cycles) {
        PartialCycle pc;
        pc.closed = true;
        for (EdgeId id : cyc) pc.edges.push_back(ids[static_cast<std::size_t>(id)]);
        res.partial.cycles.push_back(std::move(pc));
      }
      res.partial.length_bound = std::max(res.partial.length_bound, cd.length_bound);
    } else {
      double phi = split.certificates[ci] / 2.0;
      if (!(phi > 1e-9)) continue;
      Prng sub_rng = rng.split(ci);
      MoveEdgesResult inner = move_edges_expander(sub, phi, k, sub_rng, opts);
      for (Vertex v : inner.targets) res.targets.push_back(comp[static_cast<std::size_t>(v)]);
      for (auto& pc : inner.partial.cycles) {
        PartialCycle mapped;
        mapped.closed = pc.closed;
        for (EdgeId id : pc.edges) mapped.edges.push_back(ids[static_cast<std::size_t>(id)]);
        if (!pc.closed) {
          mapped.s1 = comp[static_cast<std::size_t>(pc.s1)];
          mapped.s2 = comp[static_cast<std::size_t>(pc.s2)];
        }
        res.partial.cycles.push_back(std::move(mapped));
      }
      res.partial.length_bound =
          std::max(res.partial.length_bound, inner.partial.length_bound);
      for (const auto& w : inner.diag.warnings) res.diag.warnings.push_back(w);
      res.diag.retries += inner.diag.retries;
      res.diag.max_edge_congestion =
          std::max(res.diag.max_edge_congestion, inner.diag.max_edge_congestion);
    }
  }
  std::sort(res.targets.begin(), res.targets.end());
  res.partial.targets = res.targets;
  res.diag.found_cycles = static_cast<long long>(res.partial.cycles.size());
  return res;
}

AuxGraph build_aux_graph(const WeightedMultigraph& g,
                         const PartialCycleDecomposition& partial) {
  AuxGraph aux;
  aux.s_vertices = partial.targets;
  std::vector<int> local(static_cast<std::size_t>(g.vertex_count()), -1);
  for (std::size_t i = 0; i < partial.targets.size(); ++i) {
    local[static_cast<std::size_t>(partial.targets[i])] = static_cast<int>(i);
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < partial.cycles.size(); ++i) {
    const PartialCycle& pc = partial.cycles[i];
    if (pc.closed) continue;
    int a = local[static_cast<std::size_t>(pc.s1)];
    int b = local[static_cast<std::size_t>(pc.s2)];
    if (a < 0 || b < 0) throw GraphError("partial cycle attaches outside S");
    edges.push_back(Edge{static_cast<EdgeId>(edges.size()), static_cast<Vertex>(a),
                         static_cast<Vertex>(b), 1});
    aux.open_cycle_index.push_back(i);
  }
  aux.gs = WeightedMultigraph(static_cast<int>(partial.targets.size()), std::move(edges));
  return aux;
}

std::vector<std::vector<EdgeId>> extend_partial(
    const WeightedMultigraph& g, const std::vector<Vertex>& s,
    const PartialCycleDecomposition& partial, const AuxGraph& aux,
    const std::vector<std::vector<EdgeId>>& cycles_on_gs) {
  (void)s;
  std::vector<std::vector<EdgeId>> out;
  for (const auto& gs_cycle : cycles_on_gs) {
    if (gs_cycle.empty()) continue;
    // Orient the walk through the aux cycle, then splice each path in.
    std::vector<EdgeId> big;
    const Edge& first = aux.gs.edge(gs_cycle.front());
    for (Vertex start : {first.u, first.v}) {
      big.clear();
      Vertex cur = start;
      bool ok = true;
      for (EdgeId aid : gs_cycle) {
        const Edge& ae = aux.gs.edge(aid);
        Vertex nxt;
        if (ae.u == cur) {
          nxt = ae.v;
        } else if (ae.v == cur) {
          nxt = ae.u;
        } else {
          ok = false;
          break;
        }
        std::size_t open_idx = aux.open_cycle_index.at(static_cast<std::size_t>(ae.id));
        const PartialCycle& pc = partial.cycles[open_idx];
        // pc.edges runs s1 -> s2; reverse when traversing s2 -> s1.
        Vertex cur_g = aux.s_vertices[static_cast<std::size_t>(cur)];
        if (pc.s1 == cur_g) {
          for (EdgeId id : pc.edges) big.push_back(id);
        } else {
          for (auto it = pc.edges.rbegin(); it != pc.edges.rend(); ++it) big.push_back(*it);
        }
        cur = nxt;
      }
      if (ok && cur == start) break;
      ok = false;
      big.clear();
    }
    if (big.empty()) {
      throw GraphError("extend_partial: auxiliary cycle does not close");
    }
    out.push_back(std::move(big));
  }
  (void)g;
  return out;
}

// --- recursive construction ---------------------------------------------------

CycleDecomposition short_cycle_decomposition(const WeightedMultigraph& g, int l,
                                             int k, Prng& rng,
                                             const ShortCycleOptions& opts) {
  if (!g.has_uniform_weight()) {
    throw GraphError("short_cycle_decomposition expects a unit-weight class");
  }
  if (l < 0) throw GraphError("short_cycle_decomposition: l must be >= 0");
  if (k < 1) throw GraphError("short_cycle_decomposition: k must be >= 1");
  const int n = g.vertex_count();
  if (l == 0 || n < k) return naive_cycle_decomposition(g);

  double logn2 = std::log2(2.0 * std::max(2, n));
  long long delta_cfg;
  if (opts.paper_delta) {
    double gamma = opts.move.gamma_ns;
    double base = 64e6 * std::pow(gamma, 4) * logn2 * logn2;
    delta_cfg = static_cast<long long>(std::min(1e18, std::pow(base, l) * k));
  } else {
    delta_cfg = static_cast<long long>(std::ceil(opts.delta_factor * k));
  }
  delta_cfg = std::max<long long>(delta_cfg, 3);

  AliveGraph a(g);
  CycleDecomposition cd;
  cd.extras_bound = (delta_cfg + 2) * static_cast<long long>(std::max(1, n));

  std::uint64_t round = 0;
  while (true) {
    // The configured threshold capped at the smallest remaining positive
    // degree; a threshold above every degree would peel the whole graph.
    long long min_deg = delta_cfg;
    for (Vertex v = 0; v < n; ++v) {
      if (a.vertex_alive[static_cast<std::size_t>(v)] &&
          a.degree[static_cast<std::size_t>(v)] > 0) {
        min_deg = std::min<long long>(min_deg, a.degree[static_cast<std::size_t>(v)]);
      }
    }
    long long delta = std::max<long long>(3, std::min(delta_cfg, min_deg));

    // Peel below delta.
    std::deque<Vertex> q;
    for (Vertex v = 0; v < n; ++v) {
      if (a.vertex_alive[static_cast<std::size_t>(v)] &&
          a.degree[static_cast<std::size_t>(v)] < delta) {
        q.push_back(v);
      }
    }
    bool progressed = false;
    while (!q.empty()) {
      Vertex v = q.front();
      q.pop_front();
      if (!a.vertex_alive[static_cast<std::size_t>(v)] ||
          a.degree[static_cast<std::size_t>(v)] >= delta) {
        continue;
      }
      for (EdgeId id : a.adj[static_cast<std::size_t>(v)]) {
        if (!a.edge_alive[static_cast<std::size_t>(id)]) continue;
        Vertex o = a.other(id, v);
        cd.extras.push_back(id);
        a.kill_edge(id);
        progressed = true;
        if (a.vertex_alive[static_cast<std::size_t>(o)] &&
            a.degree[static_cast<std::size_t>(o)] < delta) {
          q.push_back(o);
        }
      }
      a.kill_vertex(v);
      progressed = true;
    }
    if (a.alive_edges == 0) break;

    // Alive subgraph, renumbered.
    std::vector<Vertex> alive_vs;
    for (Vertex v = 0; v < n; ++v) {
      if (a.vertex_alive[static_cast<std::size_t>(v)]) alive_vs.push_back(v);
    }
    std::vector<int> to_local(static_cast<std::size_t>(n), -1);
    for (std::size_t i = 0; i < alive_vs.size(); ++i) {
      to_local[static_cast<std::size_t>(alive_vs[i])] = static_cast<int>(i);
    }
    std::vector<Edge> sub_edges;
    std::vector<EdgeId> sub_ids;
    for (const Edge& e : g.edges()) {
      if (!a.edge_alive[static_cast<std::size_t>(e.id)]) continue;
      sub_edges.push_back(Edge{static_cast<EdgeId>(sub_edges.size()),
                               static_cast<Vertex>(to_local[static_cast<std::size_t>(e.u)]),
                               static_cast<Vertex>(to_local[static_cast<std::size_t>(e.v)]),
                               e.w});
      sub_ids.push_back(e.id);
    }
    WeightedMultigraph sub(static_cast<int>(alive_vs.size()), std::move(sub_edges));

    BoundedDegreeGraph bdg = extract_bounded_degree(sub, static_cast<int>(delta));
    Prng walk_rng = rng.split(0x4d00ULL + round);
    MoveEdgesResult moved = move_edges(bdg.h, k, walk_rng, opts.move);

    // Map cycles from h back to g edge ids.
    auto to_g = [&](EdgeId h_id) { return sub_ids[static_cast<std::size_t>(bdg.edge_map[static_cast<std::size_t>(h_id)])]; };

    std::vector<std::vector<EdgeId>> accepted;
    PartialCycleDecomposition open_in_h;
    open_in_h.targets = moved.partial.targets;
    for (auto& pc : moved.partial.cycles) {
      if (pc.closed) {
        std::vector<EdgeId> cyc;
        for (EdgeId id : pc.edges) cyc.push_back(to_g(id));
        accepted.push_back(std::move(cyc));
      } else {
        open_in_h.cycles.push_back(pc);
      }
    }

    if (!open_in_h.cycles.empty()) {
      AuxGraph aux = build_aux_graph(bdg.h, open_in_h);
      Prng rec_rng = rng.split(0x9ecced0aULL + round);
      CycleDecomposition rec =
          short_cycle_decomposition(aux.gs, l - 1, k, rec_rng, opts);
      auto extended =
          extend_partial(bdg.h, moved.targets, open_in_h, aux, rec.cycles);
      for (auto& cyc_h : extended) {
        std::vector<EdgeId> cyc;
        for (EdgeId id : cyc_h) cyc.push_back(to_g(id));
        accepted.push_back(std::move(cyc));
      }
    }

    for (auto& cyc : accepted) {
      for (EdgeId id : cyc) a.kill_edge(id);
      progressed = true;
      cd.cycles.push_back(std::move(cyc));
    }

    if (!progressed) {
      // No peel and no cycles this round: finish with the direct routine.
      std::vector<Edge> rest_edges;
      std::vector<EdgeId> rest_ids;
      for (const Edge& e : g.edges()) {
        if (!a.edge_alive[static_cast<std::size_t>(e.id)]) continue;
        rest_edges.push_back(Edge{static_cast<EdgeId>(rest_edges.size()), e.u, e.v, e.w});
        rest_ids.push_back(e.id);
      }
      WeightedMultigraph rest(n, std::move(rest_edges));
      CycleDecomposition tail = naive_cycle_decomposition(rest);
      for (auto& cyc : tail.cycles) {
        std::vector<EdgeId> mapped;
        for (EdgeId id : cyc) mapped.push_back(rest_ids[static_cast<std::size_t>(id)]);
        cd.cycles.push_back(std::move(mapped));
      }
      for (EdgeId id : tail.extras) cd.extras.push_back(rest_ids[static_cast<std::size_t>(id)]);
      break;
    }
    ++round;
  }

  int max_len = 2;
  for (const auto& c : cd.cycles) max_len = std::max(max_len, static_cast<int>(c.size()));
  cd.length_bound = max_len;
  std::sort(cd.extras.begin(), cd.extras.end());
  return cd;
}

}  // namespace cyclesparse
