#include "cyclesparse/biclique.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "cyclesparse/expander.hpp"
#include "cyclesparse/linalg.hpp"
#include "json.hpp"

namespace cyclesparse {

long long BicliqueCollection::vertex_total() const {
  long long t = 0;
  for (const auto& k : parts) t += static_cast<long long>(k.a.size() + k.b.size());
  return t;
}

long long BicliqueCollection::edge_total() const {
  long long t = 0;
  for (const auto& k : parts) t += static_cast<long long>(k.a.size()) * static_cast<long long>(k.b.size());
  return t;
}

std::vector<Rat> BicliqueCollection::degrees() const {
  std::vector<Rat> d(static_cast<std::size_t>(n), Rat(0));
  for (const auto& k : parts) {
    Rat w = pow2_rat(k.log2w);
    Rat da = w * Rat(static_cast<long long>(k.b.size()));
    Rat db = w * Rat(static_cast<long long>(k.a.size()));
    for (Vertex u : k.a) d[static_cast<std::size_t>(u)] += da;
    for (Vertex v : k.b) d[static_cast<std::size_t>(v)] += db;
  }
  return d;
}

bool BicliqueCollection::unit_weight() const {
  for (const auto& k : parts) {
    if (k.log2w != 0) return false;
  }
  return true;
}

std::vector<Rat> RationalGraph::weighted_degrees() const {
  std::vector<Rat> d(static_cast<std::size_t>(n), Rat(0));
  for (const RatEdge& e : edges) {
    d[static_cast<std::size_t>(e.u)] += e.w;
    d[static_cast<std::size_t>(e.v)] += e.w;
  }
  return d;
}

Eigen::MatrixXd RationalGraph::laplacian_dense() const {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (const RatEdge& e : edges) {
    double w = rat_to_double(e.w);
    l(e.u, e.u) += w;
    l(e.v, e.v) += w;
    l(e.u, e.v) -= w;
    l(e.v, e.u) -= w;
  }
  return l;
}

RationalGraph materialize(const BicliqueCollection& k) {
  RationalGraph g;
  g.n = k.n;
  for (const auto& part : k.parts) {
    Rat w = pow2_rat(part.log2w);
    for (Vertex u : part.a) {
      for (Vertex v : part.b) {
        if (u == v) throw GraphError("biclique sides overlap");
        g.edges.push_back(RatEdge{u, v, w});
      }
    }
  }
  return g;
}

std::string biclique_collection_to_json(const BicliqueCollection& k) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& part : k.parts) {
    nlohmann::ordered_json item;
    item["A"] = part.a;
    item["B"] = part.b;
    item["w"] = "2^" + std::to_string(part.log2w);
    arr.push_back(item);
  }
  return arr.dump();
}

BicliqueCollection biclique_collection_from_json(const std::string& text, int n) {
  auto arr = nlohmann::json::parse(text);
  BicliqueCollection out;
  out.n = n;
  for (const auto& item : arr) {
    Biclique k;
    k.a = item.at("A").get<std::vector<Vertex>>();
    k.b = item.at("B").get<std::vector<Vertex>>();
    std::string w = item.at("w").get<std::string>();
    if (w.rfind("2^", 0) != 0) throw ParseError("biclique weight must be 2^k");
    k.log2w = std::stoi(w.substr(2));
    out.parts.push_back(std::move(k));
  }
  return out;
}

std::string weighted_bicliques_to_json(const std::vector<VertexWeightedBiclique>& ks) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& k : ks) {
    nlohmann::ordered_json weights = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < k.a.size(); ++i) {
      weights[std::to_string(k.a[i])] = k.wa[i];
    }
    for (std::size_t i = 0; i < k.b.size(); ++i) {
      weights[std::to_string(k.b[i])] = k.wb[i];
    }
    nlohmann::ordered_json item;
    item["A"] = k.a;
    item["B"] = k.b;
    item["w"] = nlohmann::ordered_json{{"vertex_weights", weights}};
    arr.push_back(item);
  }
  return arr.dump();
}

std::vector<VertexWeightedBiclique> weighted_bicliques_from_json(
    const std::string& text) {
  auto arr = nlohmann::json::parse(text);
  std::vector<VertexWeightedBiclique> out;
  for (const auto& item : arr) {
    VertexWeightedBiclique k;
    k.a = item.at("A").get<std::vector<Vertex>>();
    k.b = item.at("B").get<std::vector<Vertex>>();
    const auto& weights = item.at("w").at("vertex_weights");
    for (Vertex v : k.a) k.wa.push_back(weights.at(std::to_string(v)).get<double>());
    for (Vertex v : k.b) k.wb.push_back(weights.at(std::to_string(v)).get<double>());
    out.push_back(std::move(k));
  }
  return out;
}

// --- balancing ----------------------------------------------------------------

namespace {

// Splits vs into consecutive groups whose sizes are the binary digits of
// |vs|, largest first.
std::vector<std::vector<Vertex>> power_of_two_groups(const std::vector<Vertex>& vs) {
  std::vector<std::vector<Vertex>> groups;
  std::size_t want = vs.size(), at = 0;
  for (int bit = 62; bit >= 0; --bit) {
    std::size_t sz = std::size_t{1} << bit;
    if (want & sz) {
      groups.emplace_back(vs.begin() + static_cast<std::ptrdiff_t>(at),
                          vs.begin() + static_cast<std::ptrdiff_t>(at + sz));
      at += sz;
    }
  }
  return groups;
}

}  // namespace

std::vector<Biclique> make_balanced(const Biclique& k) {
  std::vector<Biclique> out;
  if (k.a.empty() || k.b.empty()) return out;
  auto ga = power_of_two_groups(k.a);
  auto gb = power_of_two_groups(k.b);
  for (const auto& sa : ga) {
    for (const auto& sb : gb) {
      // Split the larger side into blocks of the smaller side's size.
      const auto& small = sa.size() <= sb.size() ? sa : sb;
      const auto& large = sa.size() <= sb.size() ? sb : sa;
      bool small_is_a = sa.size() <= sb.size();
      std::size_t r = small.size();
      for (std::size_t at = 0; at < large.size(); at += r) {
        Biclique bal;
        bal.log2w = k.log2w;
        std::vector<Vertex> block(large.begin() + static_cast<std::ptrdiff_t>(at),
                                  large.begin() + static_cast<std::ptrdiff_t>(at + r));
        bal.a = small_is_a ? small : block;
        bal.b = small_is_a ? block : small;
        out.push_back(std::move(bal));
      }
    }
  }
  return out;
}

RationalGraph sample_matchings(const BicliqueCollection& kr, long long s, Prng& rng) {
  if (s < 1) throw GraphError("sample_matchings: s must be >= 1");
  RationalGraph h;
  h.n = kr.n;
  long long r = -1;
  for (const auto& k : kr.parts) {
    if (k.a.size() != k.b.size()) {
      throw GraphError("sample_matchings: biclique not balanced");
    }
    if (r < 0) r = static_cast<long long>(k.a.size());
    if (r != static_cast<long long>(k.a.size())) {
      throw GraphError("sample_matchings: bicliques must share one size");
    }
  }
  if (r <= 0) return h;
  for (const auto& k : kr.parts) {
    Rat w = Rat(r, s) * pow2_rat(k.log2w);
    std::vector<Vertex> perm(k.b);
    for (long long t = 0; t < s; ++t) {
      rng.shuffle(perm);
      for (std::size_t i = 0; i < k.a.size(); ++i) {
        h.edges.push_back(RatEdge{k.a[i], perm[i], w});
      }
    }
  }
  return h;
}

// --- degree-bucketed sampling ---------------------------------------------------

RationalGraph sample_bicliques(const BicliqueCollection& kb, double eps, Prng& rng,
                               const SampleBicliquesOptions& opts,
                               SampleBicliquesDiag* diag) {
  if (!kb.unit_weight()) {
    throw GraphError("sample_bicliques: collection must be unit weight");
  }
  if (!(eps > 0 && eps <= 1)) throw GraphError("sample_bicliques: eps in (0,1]");
  RationalGraph h;
  h.n = kb.n;

  // Unit degrees of G(K_B).
  std::vector<long long> deg(static_cast<std::size_t>(kb.n), 0);
  for (const auto& k : kb.parts) {
    for (Vertex u : k.a) deg[static_cast<std::size_t>(u)] += static_cast<long long>(k.b.size());
    for (Vertex v : k.b) deg[static_cast<std::size_t>(v)] += static_cast<long long>(k.a.size());
  }

  const double low_cut = std::pow(eps, -1.5);
  std::vector<char> removed(static_cast<std::size_t>(kb.n), 0);
  std::vector<Biclique> live = kb.parts;
  for (Vertex u = 0; u < kb.n; ++u) {
    if (deg[static_cast<std::size_t>(u)] == 0 ||
        static_cast<double>(deg[static_cast<std::size_t>(u)]) > low_cut) {
      continue;
    }
    for (auto& k : live) {
      bool in_a = std::find(k.a.begin(), k.a.end(), u) != k.a.end();
      bool in_b = std::find(k.b.begin(), k.b.end(), u) != k.b.end();
      if (in_a) {
        for (Vertex v : k.b) {
          h.edges.push_back(RatEdge{u, v, Rat(1)});
          if (diag) ++diag->explicit_low_degree_edges;
        }
        k.a.erase(std::remove(k.a.begin(), k.a.end(), u), k.a.end());
      }
      if (in_b) {
        for (Vertex v : k.a) {
          h.edges.push_back(RatEdge{u, v, Rat(1)});
          if (diag) ++diag->explicit_low_degree_edges;
        }
        k.b.erase(std::remove(k.b.begin(), k.b.end(), u), k.b.end());
      }
    }
    removed[static_cast<std::size_t>(u)] = 1;
  }

  // Bucket j holds vertices with degree in [2^{j-1}, 2^j - 1].
  auto bucket_of = [&](Vertex v) {
    long long d = deg[static_cast<std::size_t>(v)];
    int j = 0;
    while ((1LL << j) <= d) ++j;
    return j;  // 2^{j-1} <= d < 2^j
  };
  int max_bucket = 0;
  for (Vertex v = 0; v < kb.n; ++v) {
    if (!removed[static_cast<std::size_t>(v)] && deg[static_cast<std::size_t>(v)] > 0) {
      max_bucket = std::max(max_bucket, bucket_of(v));
    }
  }

  const double sqrt_cut = std::pow(eps, -0.5);
  std::uint64_t stream = 0;
  for (int j = 1; j <= max_bucket; ++j) {
    // Split each biclique into the two parts covering edges whose min
    // endpoint degree lands in bucket j.
    std::map<long long, BicliqueCollection> by_r;
    auto add_parts = [&](std::vector<Vertex> sa, std::vector<Vertex> sb) {
      if (sa.empty() || sb.empty()) return;
      Biclique piece;
      piece.a = std::move(sa);
      piece.b = std::move(sb);
      for (Biclique& bal : make_balanced(piece)) {
        long long r = static_cast<long long>(bal.a.size());
        auto& coll = by_r[r];
        coll.n = kb.n;
        coll.parts.push_back(std::move(bal));
      }
    };
    for (const auto& k : live) {
      std::vector<Vertex> s_a, s_b, t_a_minus, t_b;
      for (Vertex u : k.a) {
        int bu = bucket_of(u);
        if (bu == j) s_a.push_back(u);
        if (bu >= j && bu != j) t_a_minus.push_back(u);  // T_A \ S_A
      }
      for (Vertex v : k.b) {
        int bv = bucket_of(v);
        if (bv == j) s_b.push_back(v);
        if (bv >= j) t_b.push_back(v);
      }
      add_parts(s_a, t_b);
      add_parts(s_b, t_a_minus);
    }

    for (auto& [r, coll] : by_r) {
      if (static_cast<double>(r) <= sqrt_cut) {
        for (const auto& k : coll.parts) {
          for (std::size_t i = 0; i < k.a.size(); ++i) {
            for (std::size_t t = 0; t < k.b.size(); ++t) {
              h.edges.push_back(RatEdge{k.a[i], k.b[t], Rat(1)});
              if (diag) ++diag->explicit_small_r_edges;
            }
          }
        }
        continue;
      }
      double s_real;
      if (opts.alternative_s) {
        s_real = std::max(sqrt_cut, static_cast<double>(r) * std::pow(eps, -1.5) /
                                        std::pow(2.0, j));
      } else {
        s_real = std::max(sqrt_cut, 4.0 * static_cast<double>(r) / eps /
                                        std::pow(2.0, j));
      }
      long long s = static_cast<long long>(std::ceil(s_real));
      Prng sub = rng.split(stream++);
      RationalGraph part = sample_matchings(coll, s, sub);
      for (auto& e : part.edges) {
        h.edges.push_back(std::move(e));
        if (diag) ++diag->sampled_edges;
      }
    }
  }
  return h;
}

// --- partition interaction ------------------------------------------------------

namespace {

void boundary_rec(const std::vector<Vertex>& a, const std::vector<Vertex>& b,
                  const std::vector<int>& piece_of, int log2w,
                  std::vector<Biclique>* out) {
  if (a.empty() && b.empty()) return;
  // Pieces present in this sub-biclique.
  std::map<int, long long> count;
  for (Vertex v : a) ++count[piece_of[static_cast<std::size_t>(v)]];
  for (Vertex v : b) ++count[piece_of[static_cast<std::size_t>(v)]];
  if (count.size() <= 1) return;  // fully inside one piece
  long long total = static_cast<long long>(a.size() + b.size());

  auto restrict_to = [&](const std::vector<Vertex>& vs, auto pred) {
    std::vector<Vertex> r;
    for (Vertex v : vs) {
      if (pred(piece_of[static_cast<std::size_t>(v)])) r.push_back(v);
    }
    return r;
  };
  auto emit = [&](std::vector<Vertex> sa, std::vector<Vertex> sb) {
    if (sa.empty() || sb.empty()) return;
    Biclique k;
    k.a = std::move(sa);
    k.b = std::move(sb);
    k.log2w = log2w;
    out->push_back(std::move(k));
  };

  // A piece holding more than a third of the vertices peels off first.
  for (auto& [p, c] : count) {
    if (3 * c > total) {
      emit(restrict_to(a, [&](int q) { return q == p; }),
           restrict_to(b, [&](int q) { return q != p; }));
      emit(restrict_to(a, [&](int q) { return q != p; }),
           restrict_to(b, [&](int q) { return q == p; }));
      boundary_rec(restrict_to(a, [&](int q) { return q != p; }),
                   restrict_to(b, [&](int q) { return q != p; }), piece_of, log2w,
                   out);
      return;
    }
  }
  // Otherwise group pieces into two halves, each at most 2/3 of the total.
  std::vector<int> side1;
  long long acc = 0;
  for (auto& [p, c] : count) {
    if (3 * acc >= total) break;
    side1.push_back(p);
    acc += c;
  }
  auto in1 = [&](int p) { return std::find(side1.begin(), side1.end(), p) != side1.end(); };
  emit(restrict_to(a, [&](int q) { return in1(q); }),
       restrict_to(b, [&](int q) { return !in1(q); }));
  emit(restrict_to(a, [&](int q) { return !in1(q); }),
       restrict_to(b, [&](int q) { return in1(q); }));
  boundary_rec(restrict_to(a, in1), restrict_to(b, in1), piece_of, log2w, out);
  boundary_rec(restrict_to(a, [&](int q) { return !in1(q); }),
               restrict_to(b, [&](int q) { return !in1(q); }), piece_of, log2w, out);
}

}  // namespace

BicliqueSplit biclique_split_by_partition(
    const BicliqueCollection& k, const std::vector<std::vector<Vertex>>& pieces) {
  std::vector<int> piece_of(static_cast<std::size_t>(k.n), -1);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (Vertex v : pieces[i]) {
      if (piece_of[static_cast<std::size_t>(v)] != -1) {
        throw GraphError("biclique_split_by_partition: pieces overlap");
      }
      piece_of[static_cast<std::size_t>(v)] = static_cast<int>(i);
    }
  }
  for (int v = 0; v < k.n; ++v) {
    if (piece_of[static_cast<std::size_t>(v)] < 0) {
      throw GraphError("biclique_split_by_partition: pieces must cover V");
    }
  }

  BicliqueSplit out;
  out.per_piece.assign(pieces.size(), BicliqueCollection{});
  for (auto& coll : out.per_piece) coll.n = k.n;
  out.boundary.n = k.n;

  for (const auto& part : k.parts) {
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      Biclique r;
      r.log2w = part.log2w;
      for (Vertex v : part.a) {
        if (piece_of[static_cast<std::size_t>(v)] == static_cast<int>(i)) r.a.push_back(v);
      }
      for (Vertex v : part.b) {
        if (piece_of[static_cast<std::size_t>(v)] == static_cast<int>(i)) r.b.push_back(v);
      }
      if (!r.a.empty() && !r.b.empty()) out.per_piece[i].parts.push_back(std::move(r));
    }
    boundary_rec(part.a, part.b, piece_of, part.log2w, &out.boundary.parts);
  }
  return out;
}

ImplicitPartitionResult implicit_partition_and_sample(
    const BicliqueCollection& kr, double eps, double phi, Prng& rng,
    const ImplicitPartitionOptions& opts) {
  ImplicitPartitionResult out;
  if (kr.parts.empty()) {
    out.sketch.n = kr.n;
    std::vector<Vertex> all(static_cast<std::size_t>(kr.n));
    std::iota(all.begin(), all.end(), 0);
    out.pieces.push_back(all);
    return out;
  }

  // Crude sparsifier: C_S log n matchings per biclique, then treat the
  // uniform-weight union as a unit multigraph for partitioning.
  long long s = static_cast<long long>(std::ceil(
      opts.crude_cs * std::log2(std::max(2.0, static_cast<double>(kr.n)))));
  Prng crude_rng = rng.split(0);
  RationalGraph crude = sample_matchings(kr, s, crude_rng);
  std::vector<std::tuple<Vertex, Vertex, Weight>> unit_edges;
  unit_edges.reserve(crude.edges.size());
  for (const RatEdge& e : crude.edges) unit_edges.emplace_back(e.u, e.v, 1);
  WeightedMultigraph gtil = WeightedMultigraph::from_edges(kr.n, unit_edges);

  ExpanderPartition part = expander_decompose(gtil, phi);
  out.pieces = part.pieces;
  out.measured_gamma = part.measured_gamma(gtil.edge_count());

  BicliqueSplit split = biclique_split_by_partition(kr, part.pieces);
  out.sketch.n = kr.n;
  std::uint64_t stream = 1;
  long long inside = 0;
  for (const auto& coll : split.per_piece) {
    inside += coll.edge_total();
    if (coll.parts.empty()) continue;
    Prng piece_rng = rng.split(stream++);
    RationalGraph h = sample_bicliques(coll, eps, piece_rng, opts.sample);
    for (auto& e : h.edges) out.sketch.edges.push_back(std::move(e));
  }
  out.boundary_edge_total = kr.edge_total() - inside;
  return out;
}

RationalGraph implicit_sketch_bicliques(const BicliqueCollection& kb, double eps,
                                        double phi, int q, Prng& rng,
                                        const ImplicitPartitionOptions& opts) {
  if (q < 0) throw GraphError("implicit_sketch_bicliques: q must be >= 0");
  if (q == 0) return materialize(kb);

  RationalGraph h;
  h.n = kb.n;
  // Balance, bucket by r.
  std::map<long long, BicliqueCollection> by_r;
  for (const auto& part : kb.parts) {
    for (Biclique& bal : make_balanced(part)) {
      long long r = static_cast<long long>(bal.a.size());
      auto& coll = by_r[r];
      coll.n = kb.n;
      coll.parts.push_back(std::move(bal));
    }
  }
  std::uint64_t stream = 0;
  for (auto& [r, coll] : by_r) {
    Prng level_rng = rng.split(stream++);
    ImplicitPartitionResult res =
        implicit_partition_and_sample(coll, eps, phi, level_rng, opts);
    for (auto& e : res.sketch.edges) h.edges.push_back(std::move(e));
    BicliqueSplit split = biclique_split_by_partition(coll, res.pieces);
    if (!split.boundary.parts.empty()) {
      Prng rec_rng = rng.split(0x8000000ULL + stream);
      RationalGraph rec =
          implicit_sketch_bicliques(split.boundary, eps, phi, q - 1, rec_rng, opts);
      for (auto& e : rec.edges) h.edges.push_back(std::move(e));
    }
  }
  return h;
}

// --- Schur step -----------------------------------------------------------------

Eigen::MatrixXd schur_complement_dense(const Eigen::MatrixXd& l,
                                       const std::vector<Vertex>& f,
                                       const std::vector<Vertex>& c) {
  const int nf = static_cast<int>(f.size());
  const int nc = static_cast<int>(c.size());
  if (nf == 0) {
    Eigen::MatrixXd out(nc, nc);
    for (int i = 0; i < nc; ++i) {
      for (int j = 0; j < nc; ++j) out(i, j) = l(c[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(j)]);
    }
    return out;
  }
  Eigen::MatrixXd lff(nf, nf), lfc(nf, nc), lcc(nc, nc);
  for (int i = 0; i < nf; ++i) {
    for (int j = 0; j < nf; ++j) lff(i, j) = l(f[static_cast<std::size_t>(i)], f[static_cast<std::size_t>(j)]);
    for (int j = 0; j < nc; ++j) lfc(i, j) = l(f[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(j)]);
  }
  for (int i = 0; i < nc; ++i) {
    for (int j = 0; j < nc; ++j) lcc(i, j) = l(c[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(j)]);
  }
  Eigen::MatrixXd lff_pinv = pseudo_inverse(lff);
  return lcc - lfc.transpose() * lff_pinv * lfc;
}

SchurStepResult schur_step_cliques(const WeightedMultigraph& g,
                                   const std::vector<Vertex>& f,
                                   const std::vector<Vertex>& c) {
  const int n = g.vertex_count();
  std::vector<int> side(static_cast<std::size_t>(n), -1);  // 0 = F, 1 = C
  for (Vertex v : f) side[static_cast<std::size_t>(v)] = 0;
  for (Vertex v : c) {
    if (side[static_cast<std::size_t>(v)] == 0) throw GraphError("F and C overlap");
    side[static_cast<std::size_t>(v)] = 1;
  }
  for (int v = 0; v < n; ++v) {
    if (side[static_cast<std::size_t>(v)] < 0) throw GraphError("F and C must partition V");
  }

  auto deg = g.weighted_degrees();
  for (Vertex v : f) {
    if (deg[static_cast<std::size_t>(v)] == 0) {
      throw GraphError("isolated F vertex " + std::to_string(v));
    }
  }

  // Summed adjacency per eliminated vertex.
  auto adj = g.adjacency();
  SchurStepResult out;
  out.blocks.f = f;
  out.blocks.c = c;
  for (Vertex fv : f) {
    std::map<Vertex, double> acc;
    for (EdgeId id : adj[static_cast<std::size_t>(fv)]) {
      const Edge& e = g.edge(id);
      Vertex o = e.u == fv ? e.v : e.u;
      acc[o] += static_cast<double>(e.w);
    }
    double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(deg[static_cast<std::size_t>(fv)]));
    VertexWeightedClique on_f, on_c;
    VertexWeightedBiclique spanning;
    for (auto& [o, w] : acc) {
      double wv = w * inv_sqrt_d;
      if (side[static_cast<std::size_t>(o)] == 0) {
        on_f.support.push_back(o);
        on_f.w.push_back(wv);
        spanning.a.push_back(o);
        spanning.wa.push_back(wv);
      } else {
        on_c.support.push_back(o);
        on_c.w.push_back(wv);
        spanning.b.push_back(o);
        spanning.wb.push_back(wv);
      }
    }
    if (on_f.support.size() >= 2) out.cliques_on_f.push_back(on_f);
    if (on_c.support.size() >= 2) out.cliques_on_c.push_back(on_c);
    if (!spanning.a.empty() && !spanning.b.empty()) {
      out.bicliques_fc.push_back(std::move(spanning));
    }
  }

  for (const Edge& e : g.edges()) {
    int su = side[static_cast<std::size_t>(e.u)], sv = side[static_cast<std::size_t>(e.v)];
    if (su == 1 && sv == 1) {
      out.boundary_terms.emplace_back(e.u, e.v, 2.0 * static_cast<double>(e.w));
    } else if (su != sv) {
      out.boundary_terms.emplace_back(e.u, e.v, static_cast<double>(e.w));
    }
  }
  return out;
}

Eigen::MatrixXd laplacian_dense(const VertexWeightedClique& k, int n) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < k.support.size(); ++i) {
    for (std::size_t j = i + 1; j < k.support.size(); ++j) {
      double w = k.w[i] * k.w[j];
      Vertex u = k.support[i], v = k.support[j];
      l(u, u) += w;
      l(v, v) += w;
      l(u, v) -= w;
      l(v, u) -= w;
    }
  }
  return l;
}

Eigen::MatrixXd laplacian_dense(const VertexWeightedBiclique& k, int n) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < k.a.size(); ++i) {
    for (std::size_t j = 0; j < k.b.size(); ++j) {
      double w = k.wa[i] * k.wb[j];
      Vertex u = k.a[i], v = k.b[j];
      l(u, u) += w;
      l(v, v) += w;
      l(u, v) -= w;
      l(v, u) -= w;
    }
  }
  return l;
}

Eigen::MatrixXd SchurStepResult::reconstruct_dense(int n) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& k : cliques_on_f) m += laplacian_dense(k, n);
  for (const auto& k : cliques_on_c) m += laplacian_dense(k, n);
  for (const auto& k : bicliques_fc) m += laplacian_dense(k, n);
  for (auto& [u, v, w] : boundary_terms) {
    m(u, u) += w;
    m(v, v) += w;
    m(u, v) -= w;
    m(v, u) -= w;
  }
  return m;
}

std::pair<std::vector<Vertex>, std::vector<Vertex>> greedy_dd_split(
    const WeightedMultigraph& g, const std::vector<Vertex>& f_candidates) {
  const int n = g.vertex_count();
  std::vector<char> in_f(static_cast<std::size_t>(n), 0);
  for (Vertex v : f_candidates) in_f[static_cast<std::size_t>(v)] = 1;
  auto deg = g.weighted_degrees();
  auto adj = g.adjacency();
  bool changed = true;
  while (changed) {
    changed = false;
    for (Vertex v = 0; v < n; ++v) {
      if (!in_f[static_cast<std::size_t>(v)]) continue;
      Weight to_c = 0;
      for (EdgeId id : adj[static_cast<std::size_t>(v)]) {
        const Edge& e = g.edge(id);
        Vertex o = e.u == v ? e.v : e.u;
        if (!in_f[static_cast<std::size_t>(o)]) to_c += e.w;
      }
      // Keep v in F only if at least 10% of its degree leaves the set.
      if (10 * to_c < deg[static_cast<std::size_t>(v)] || deg[static_cast<std::size_t>(v)] == 0) {
        in_f[static_cast<std::size_t>(v)] = 0;
        changed = true;
      }
    }
  }
  std::vector<Vertex> f, c;
  for (Vertex v = 0; v < n; ++v) {
    (in_f[static_cast<std::size_t>(v)] ? f : c).push_back(v);
  }
  return {f, c};
}

std::vector<VertexWeightedBiclique> clique_to_bicliques(const VertexWeightedClique& k) {
  std::vector<VertexWeightedBiclique> out;
  // Halving recursion over the support list.
  struct Item {
    std::size_t lo, hi;
  };
  std::vector<Item> stack{{0, k.support.size()}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    if (hi - lo < 2) continue;
    std::size_t mid = lo + (hi - lo) / 2;
    VertexWeightedBiclique b;
    for (std::size_t i = lo; i < mid; ++i) {
      b.a.push_back(k.support[i]);
      b.wa.push_back(k.w[i]);
    }
    for (std::size_t i = mid; i < hi; ++i) {
      b.b.push_back(k.support[i]);
      b.wb.push_back(k.w[i]);
    }
    out.push_back(std::move(b));
    stack.push_back({lo, mid});
    stack.push_back({mid, hi});
  }
  return out;
}

std::vector<Biclique> biclique_to_unit(const VertexWeightedBiclique& k, int bits) {
  if (bits < 1) throw GraphError("biclique_to_unit: bits must be >= 1");
  // Per-vertex binary expansion keeping the top `bits` bits.
  auto expand = [&](const std::vector<Vertex>& vs, const std::vector<double>& ws) {
    std::map<int, std::vector<Vertex>> groups;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      double w = ws[i];
      if (!(w > 0)) throw GraphError("biclique_to_unit: weights must be positive");
      int e = static_cast<int>(std::floor(std::log2(w)));
      double rem = w;
      for (int t = 0; t < bits; ++t) {
        int p = e - t;
        double val = std::ldexp(1.0, p);
        if (rem >= val * (1 - 1e-12)) {
          groups[p].push_back(vs[i]);
          rem -= val;
        }
      }
    }
    return groups;
  };
  auto ga = expand(k.a, k.wa);
  auto gb = expand(k.b, k.wb);
  std::vector<Biclique> out;
  for (auto& [pa, va] : ga) {
    for (auto& [pb, vb] : gb) {
      Biclique u;
      u.a = va;
      u.b = vb;
      u.log2w = pa + pb;
      out.push_back(std::move(u));
    }
  }
  return out;
}

}  // namespace cyclesparse
