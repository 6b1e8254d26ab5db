#include "cyclesparse/graph.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace cyclesparse {

namespace {

void check_vertex(Vertex x, int n, const char* what) {
  if (x < 0 || x >= n) {
    throw GraphError(std::string(what) + " vertex id " + std::to_string(x) +
                     " out of range [0, " + std::to_string(n) + ")");
  }
}

void check_weight(Weight w) {
  if (w < 1) throw GraphError("non-positive weight " + std::to_string(w));
  if (w > kWeightCap) {
    throw GraphError("weight " + std::to_string(w) + " exceeds cap 2^62");
  }
}

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

Weight checked_weight_sum(Weight a, Weight b) {
  Weight s = a + b;
  if (s > kWeightCap) throw GraphError("combined weight exceeds cap 2^62");
  return s;
}

WeightedMultigraph::WeightedMultigraph(int n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
  if (n < 0) throw GraphError("negative vertex count");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.id != static_cast<EdgeId>(i)) throw GraphError("edge ids must be dense 0..m-1");
    check_vertex(e.u, n_, "edge");
    check_vertex(e.v, n_, "edge");
    if (e.u == e.v) throw GraphError("self-loop at vertex " + std::to_string(e.u));
    check_weight(e.w);
  }
}

WeightedMultigraph WeightedMultigraph::from_edges(
    int n, const std::vector<std::tuple<Vertex, Vertex, Weight>>& edges) {
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [u, v, w] = edges[i];
    es.push_back(Edge{static_cast<EdgeId>(i), u, v, w});
  }
  return WeightedMultigraph(n, std::move(es));
}

std::vector<Weight> WeightedMultigraph::weighted_degrees() const {
  std::vector<Weight> d(static_cast<std::size_t>(n_), 0);
  for (const Edge& e : edges_) {
    d[static_cast<std::size_t>(e.u)] += e.w;
    d[static_cast<std::size_t>(e.v)] += e.w;
  }
  return d;
}

Weight WeightedMultigraph::total_weight() const {
  Weight s = 0;
  for (const Edge& e : edges_) s += e.w;
  return s;
}

std::vector<std::vector<EdgeId>> WeightedMultigraph::adjacency() const {
  std::vector<std::vector<EdgeId>> adj(static_cast<std::size_t>(n_));
  for (const Edge& e : edges_) {
    adj[static_cast<std::size_t>(e.u)].push_back(e.id);
    adj[static_cast<std::size_t>(e.v)].push_back(e.id);
  }
  return adj;
}

std::vector<int> WeightedMultigraph::components() const {
  Dsu dsu(n_);
  for (const Edge& e : edges_) dsu.unite(e.u, e.v);
  std::vector<int> label(static_cast<std::size_t>(n_), -1);
  int next = 0;
  for (int v = 0; v < n_; ++v) {
    int r = dsu.find(v);
    if (label[static_cast<std::size_t>(r)] < 0) label[static_cast<std::size_t>(r)] = next++;
    label[static_cast<std::size_t>(v)] = label[static_cast<std::size_t>(r)];
  }
  return label;
}

int WeightedMultigraph::component_count() const {
  if (n_ == 0) return 0;
  auto lab = components();
  return 1 + *std::max_element(lab.begin(), lab.end());
}

bool WeightedMultigraph::has_uniform_weight() const {
  for (const Edge& e : edges_) {
    if (e.w != edges_.front().w) return false;
  }
  return true;
}

bool WeightedMultigraph::is_simple() const {
  std::vector<std::pair<Vertex, Vertex>> seen;
  seen.reserve(edges_.size());
  for (const Edge& e : edges_) {
    Vertex a = std::min(e.u, e.v), b = std::max(e.u, e.v);
    seen.emplace_back(a, b);
  }
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

std::pair<WeightedMultigraph, std::vector<EdgeId>>
WeightedMultigraph::induced_subgraph(const std::vector<Vertex>& vertices) const {
  std::vector<Vertex> to_new(static_cast<std::size_t>(n_), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    check_vertex(vertices[i], n_, "subgraph");
    if (to_new[static_cast<std::size_t>(vertices[i])] != -1) {
      throw GraphError("duplicate vertex in induced_subgraph");
    }
    to_new[static_cast<std::size_t>(vertices[i])] = static_cast<Vertex>(i);
  }
  std::vector<Edge> es;
  std::vector<EdgeId> old_ids;
  for (const Edge& e : edges_) {
    Vertex nu = to_new[static_cast<std::size_t>(e.u)];
    Vertex nv = to_new[static_cast<std::size_t>(e.v)];
    if (nu >= 0 && nv >= 0) {
      es.push_back(Edge{static_cast<EdgeId>(es.size()), nu, nv, e.w});
      old_ids.push_back(e.id);
    }
  }
  return {WeightedMultigraph(static_cast<int>(vertices.size()), std::move(es)),
          std::move(old_ids)};
}

DirectedGraph::DirectedGraph(int n, std::vector<DirectedEdge> edges)
    : n_(n), edges_(std::move(edges)) {
  if (n < 0) throw GraphError("negative vertex count");
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const DirectedEdge& e = edges_[i];
    if (e.id != static_cast<EdgeId>(i)) throw GraphError("edge ids must be dense 0..m-1");
    check_vertex(e.tail, n_, "edge");
    check_vertex(e.head, n_, "edge");
    if (e.tail == e.head) throw GraphError("self-loop at vertex " + std::to_string(e.tail));
    check_weight(e.w);
  }
}

DirectedGraph DirectedGraph::from_edges(
    int n, const std::vector<std::tuple<Vertex, Vertex, Weight>>& edges) {
  std::vector<DirectedEdge> es;
  es.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [t, h, w] = edges[i];
    es.push_back(DirectedEdge{static_cast<EdgeId>(i), t, h, w});
  }
  return DirectedGraph(n, std::move(es));
}

std::vector<Weight> DirectedGraph::out_degrees() const {
  std::vector<Weight> d(static_cast<std::size_t>(n_), 0);
  for (const DirectedEdge& e : edges_) d[static_cast<std::size_t>(e.tail)] += e.w;
  return d;
}

std::vector<Weight> DirectedGraph::in_degrees() const {
  std::vector<Weight> d(static_cast<std::size_t>(n_), 0);
  for (const DirectedEdge& e : edges_) d[static_cast<std::size_t>(e.head)] += e.w;
  return d;
}

bool DirectedGraph::is_eulerian() const { return in_degrees() == out_degrees(); }

WeightedMultigraph DirectedGraph::undirected_support_doubled() const {
  std::vector<Edge> es;
  es.reserve(edges_.size());
  for (const DirectedEdge& e : edges_) {
    es.push_back(Edge{e.id, e.tail, e.head, e.w});
  }
  return WeightedMultigraph(n_, std::move(es));
}

// --- text format -----------------------------------------------------------

namespace {

struct Header {
  int n = -1;
  int directed = -1;
  bool present = false;
};

Header parse_header(const std::string& line, int lineno) {
  Header h;
  if (line.empty() || line[0] != '#') return h;
  h.present = true;
  std::istringstream ss(line.substr(1));
  std::string tok;
  while (ss >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(lineno) + ": bad header token '" + tok + "'");
    }
    std::string key = tok.substr(0, eq);
    std::string val = tok.substr(eq + 1);
    int x = 0;
    auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), x);
    if (ec != std::errc() || p != val.data() + val.size()) {
      throw ParseError("line " + std::to_string(lineno) + ": bad header value '" + val + "'");
    }
    if (key == "n") {
      h.n = x;
    } else if (key == "directed") {
      h.directed = x;
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unknown header key '" + key + "'");
    }
  }
  return h;
}

std::vector<std::tuple<Vertex, Vertex, Weight>> parse_edges(
    const std::string& text, Header* header) {
  std::vector<std::tuple<Vertex, Vertex, Weight>> edges;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first && line[0] == '#') {
      *header = parse_header(line, lineno);
      first = false;
      continue;
    }
    first = false;
    long long u, v, w;
    std::istringstream ls(line);
    if (!(ls >> u >> v >> w)) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 'u v w'");
    }
    std::string extra;
    if (ls >> extra) {
      throw ParseError("line " + std::to_string(lineno) + ": trailing token '" + extra + "'");
    }
    if (u < 0 || v < 0) {
      throw ParseError("line " + std::to_string(lineno) + ": negative vertex id");
    }
    if (u == v) {
      throw ParseError("line " + std::to_string(lineno) + ": self-loop");
    }
    if (w < 1) {
      throw ParseError("line " + std::to_string(lineno) + ": non-positive weight");
    }
    if (w > kWeightCap) {
      throw ParseError("line " + std::to_string(lineno) + ": weight exceeds cap 2^62");
    }
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v),
                       static_cast<Weight>(w));
  }
  return edges;
}

int resolve_n(const Header& h,
              const std::vector<std::tuple<Vertex, Vertex, Weight>>& edges) {
  Vertex mx = -1;
  for (auto& [u, v, w] : edges) mx = std::max({mx, u, v});
  if (h.n >= 0) {
    if (mx >= h.n) throw ParseError("vertex id exceeds header n");
    return h.n;
  }
  return static_cast<int>(mx + 1);
}

}  // namespace

bool sniff_directed(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == '#') {
      Header h = parse_header(line, 1);
      return h.directed == 1;
    }
  }
  return false;
}

WeightedMultigraph load_undirected(const std::string& text) {
  Header h;
  auto edges = parse_edges(text, &h);
  if (h.present && h.directed == 1) {
    throw ParseError("header declares directed=1 for undirected load");
  }
  return WeightedMultigraph::from_edges(resolve_n(h, edges), edges);
}

DirectedGraph load_directed(const std::string& text) {
  Header h;
  auto edges = parse_edges(text, &h);
  if (h.present && h.directed == 0) {
    throw ParseError("header declares directed=0 for directed load");
  }
  return DirectedGraph::from_edges(resolve_n(h, edges), edges);
}

std::string save_graph(const WeightedMultigraph& g) {
  std::string out = "# n=" + std::to_string(g.vertex_count()) + " directed=0\n";
  for (const Edge& e : g.edges()) {
    out += std::to_string(e.u) + " " + std::to_string(e.v) + " " + std::to_string(e.w) + "\n";
  }
  return out;
}

std::string save_graph(const DirectedGraph& g) {
  std::string out = "# n=" + std::to_string(g.vertex_count()) + " directed=1\n";
  for (const DirectedEdge& e : g.edges()) {
    out += std::to_string(e.tail) + " " + std::to_string(e.head) + " " +
           std::to_string(e.w) + "\n";
  }
  return out;
}

std::string save_graph_json(const WeightedMultigraph& g) {
  nlohmann::ordered_json doc;
  doc["n"] = g.vertex_count();
  doc["directed"] = 0;
  auto edges = nlohmann::ordered_json::array();
  for (const Edge& e : g.edges()) {
    edges.push_back(nlohmann::ordered_json::array({e.u, e.v, e.w}));
  }
  doc["edges"] = edges;
  return doc.dump() + "\n";
}

std::string save_graph_json(const DirectedGraph& g) {
  nlohmann::ordered_json doc;
  doc["n"] = g.vertex_count();
  doc["directed"] = 1;
  auto edges = nlohmann::ordered_json::array();
  for (const DirectedEdge& e : g.edges()) {
    edges.push_back(nlohmann::ordered_json::array({e.tail, e.head, e.w}));
  }
  doc["edges"] = edges;
  return doc.dump() + "\n";
}

std::vector<Weight> weighted_degrees(const WeightedMultigraph& g) {
  return g.weighted_degrees();
}

std::pair<std::vector<Weight>, std::vector<Weight>> weighted_degrees(
    const DirectedGraph& g) {
  return {g.in_degrees(), g.out_degrees()};
}

std::vector<std::pair<int, WeightedMultigraph>> binary_split(
    const WeightedMultigraph& g) {
  std::map<int, std::vector<std::tuple<Vertex, Vertex, Weight>>> classes;
  for (const Edge& e : g.edges()) {
    for (int bit = 0; bit < 63; ++bit) {
      if (e.w & (Weight{1} << bit)) {
        classes[bit].emplace_back(e.u, e.v, Weight{1} << bit);
      }
    }
  }
  std::vector<std::pair<int, WeightedMultigraph>> out;
  for (auto& [bit, edges] : classes) {
    out.emplace_back(bit, WeightedMultigraph::from_edges(g.vertex_count(), edges));
  }
  return out;
}

std::vector<std::pair<int, DirectedGraph>> binary_split(const DirectedGraph& g) {
  std::map<int, std::vector<std::tuple<Vertex, Vertex, Weight>>> classes;
  for (const DirectedEdge& e : g.edges()) {
    for (int bit = 0; bit < 63; ++bit) {
      if (e.w & (Weight{1} << bit)) {
        classes[bit].emplace_back(e.tail, e.head, Weight{1} << bit);
      }
    }
  }
  std::vector<std::pair<int, DirectedGraph>> out;
  for (auto& [bit, edges] : classes) {
    out.emplace_back(bit, DirectedGraph::from_edges(g.vertex_count(), edges));
  }
  return out;
}

namespace {

// Shared merge loop: key = (a, b) pair; values = multiset of weights.
// Equal weights merge pairwise until all distinct, like binary addition.
std::vector<Weight> merge_weights(std::vector<Weight> ws) {
  std::sort(ws.begin(), ws.end());
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i + 1 < ws.size(); ++i) {
      if (ws[i] == ws[i + 1]) {
        ws[i] = checked_weight_sum(ws[i], ws[i + 1]);
        ws.erase(ws.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        std::sort(ws.begin(), ws.end());
        merged = true;
        break;
      }
    }
  }
  return ws;
}

}  // namespace

WeightedMultigraph combine_parallel_edges(const WeightedMultigraph& g) {
  std::map<std::pair<Vertex, Vertex>, std::vector<Weight>> buckets;
  for (const Edge& e : g.edges()) {
    Vertex a = std::min(e.u, e.v), b = std::max(e.u, e.v);
    buckets[{a, b}].push_back(e.w);
  }
  std::vector<std::tuple<Vertex, Vertex, Weight>> edges;
  for (auto& [key, ws] : buckets) {
    for (Weight w : merge_weights(std::move(ws))) {
      edges.emplace_back(key.first, key.second, w);
    }
  }
  return WeightedMultigraph::from_edges(g.vertex_count(), edges);
}

DirectedGraph combine_parallel_edges(const DirectedGraph& g) {
  std::map<std::pair<Vertex, Vertex>, std::vector<Weight>> buckets;
  for (const DirectedEdge& e : g.edges()) {
    buckets[{e.tail, e.head}].push_back(e.w);
  }
  std::vector<std::tuple<Vertex, Vertex, Weight>> edges;
  for (auto& [key, ws] : buckets) {
    for (Weight w : merge_weights(std::move(ws))) {
      edges.emplace_back(key.first, key.second, w);
    }
  }
  return DirectedGraph::from_edges(g.vertex_count(), edges);
}

}  // namespace cyclesparse
