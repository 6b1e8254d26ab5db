#include "cyclesparse/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cyclesparse/biclique.hpp"
#include "cyclesparse/cycles.hpp"
#include "cyclesparse/graph.hpp"
#include "cyclesparse/linalg.hpp"
#include "cyclesparse/report.hpp"
#include "cyclesparse/resistance.hpp"
#include "cyclesparse/sketch.hpp"
#include "cyclesparse/sparsify.hpp"
#include "cyclesparse/weight_reduce.hpp"

namespace cyclesparse {

namespace {

struct InvariantFailure {
  std::string check;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << bytes;
}

struct CommonFlags {
  std::string input;
  std::string report_path;
  std::string output_path;
  std::uint64_t seed = 0;
  double eps = 0.5;
  std::string cycle_algo = "naive";
  double phi = 0;
  int k = 16;
  int levels = 1;
  std::string format = "edgelist";
};

void add_common(CLI::App* cmd, CommonFlags* fl, bool with_eps = true) {
  cmd->add_option("--input", fl->input, "edge-list input file")->required();
  cmd->add_option("--seed", fl->seed, "rng seed");
  if (with_eps) cmd->add_option("--eps", fl->eps, "target error");
  cmd->add_option("--cycle-algo", fl->cycle_algo, "naive|short")
      ->check(CLI::IsMember({"naive", "short"}));
  cmd->add_option("--phi", fl->phi, "conductance target");
  cmd->add_option("--k", fl->k, "reduction factor");
  cmd->add_option("--levels", fl->levels, "recursion levels");
  cmd->add_option("--report", fl->report_path, "report JSON path");
  cmd->add_option("--output", fl->output_path, "result path");
  cmd->add_option("--format", fl->format, "edgelist|json")
      ->check(CLI::IsMember({"edgelist", "json"}));
}

// Canonical replayable argument list: computation flags only, no paths.
template <class T>
void push_arg(std::vector<std::string>* args, const std::string& flag, T value) {
  std::ostringstream ss;
  ss << value;
  args->push_back(flag);
  args->push_back(ss.str());
}

OrderedJson round_json(const SparsifyReport& rep) {
  OrderedJson rounds = OrderedJson::array();
  for (const auto& r : rep.rounds) {
    OrderedJson item;
    item["edges_before"] = r.edges_before;
    item["edges_after"] = r.edges_after;
    item["predicted_error"] = ApproxReport::round_sig(r.predicted_error);
    if (r.measured_certificate >= 0) {
      item["certificate"] = ApproxReport::round_sig(r.measured_certificate);
    }
    rounds.push_back(item);
  }
  return rounds;
}

int finish(const ApproxReport& report, const CommonFlags& fl, std::ostream& out,
           std::string* report_out, double wall_ms, std::ostream& err) {
  std::string doc = report.serialize();
  if (report_out) *report_out = doc;
  if (!fl.report_path.empty()) write_file(fl.report_path, doc);
  out << doc;
  err << "wall_clock_ms " << wall_ms << "\n";
  return 0;
}

CycleAlgo parse_algo(const std::string& s) {
  return s == "short" ? CycleAlgo::kShort : CycleAlgo::kNaive;
}

int run_decompose(const CommonFlags& fl, const std::string& algo,
                  std::ostream& out, std::ostream& err, std::string* report_out) {
  auto t0 = std::chrono::steady_clock::now();
  std::string bytes = read_file(fl.input);
  WeightedMultigraph g = load_undirected(bytes);

  ApproxReport report("decompose", fl.seed, bytes);
  report.set_flag("algo", algo);
  std::vector<std::string> args = {"decompose", "--algo", algo};
  push_arg(&args, "--seed", fl.seed);

  CycleDecomposition cd;
  if (algo == "short") {
    push_arg(&args, "--k", fl.k);
    push_arg(&args, "--levels", fl.levels);
    report.set_flag("k", fl.k);
    report.set_flag("levels", fl.levels);
    Prng rng = Prng::stream(fl.seed, "cycle-decomp", "short");
    cd = short_cycle_decomposition(g, fl.levels, fl.k, rng);
  } else {
    cd = naive_cycle_decomposition(g);
  }
  report.set("args", args);

  CycleValidation v = validate_cycle_decomposition(g, cd);
  report.set("cycle_count", cd.cycles.size());
  report.set("extras", cd.extras.size());
  report.set("length_bound", cd.length_bound);
  report.set("extras_bound", cd.extras_bound);
  long long max_len = 0;
  for (const auto& c : cd.cycles) max_len = std::max(max_len, static_cast<long long>(c.size()));
  report.set("max_cycle_length", max_len);
  report.set("cycle_valid", v.ok);

  if (!fl.output_path.empty()) {
    write_file(fl.output_path, cycle_decomposition_to_json(cd) + "\n");
  }
  if (!v.ok) throw InvariantFailure{"cycle-validity: " + v.message};
  double ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  return finish(report, fl, out, report_out, ms, err);
}

int run_sparsify(const CommonFlags& fl, int force_rounds, std::ostream& out,
                 std::ostream& err, std::string* report_out) {
  auto t0 = std::chrono::steady_clock::now();
  std::string bytes = read_file(fl.input);
  WeightedMultigraph g = load_undirected(bytes);

  SparsifyConfig cfg;
  cfg.eps = fl.eps;
  cfg.seed = fl.seed;
  cfg.cycle_algo = parse_algo(fl.cycle_algo);
  cfg.short_k = fl.k;
  cfg.short_l = fl.levels;
  cfg.force_rounds = force_rounds;

  ApproxReport report("sparsify", fl.seed, bytes);
  std::vector<std::string> args = {"sparsify"};
  push_arg(&args, "--eps", fl.eps);
  push_arg(&args, "--seed", fl.seed);
  push_arg(&args, "--cycle-algo", fl.cycle_algo);
  push_arg(&args, "--force-rounds", force_rounds);
  report.set("args", args);
  report.set_flag("eps", fl.eps);
  report.set_flag("cycle_algo", fl.cycle_algo);
  report.set_flag("force_rounds", force_rounds);

  SparsifyReport rep;
  WeightedMultigraph h = degree_preserving_sparsify(g, cfg, &rep);

  report.set("edges_in", g.edge_count());
  report.set("edges_out", h.edge_count());
  report.set("stop_threshold", rep.stop_threshold);
  report.set("rounds", round_json(rep));
  report.set("degrees_exact", rep.degrees_exact);
  report.set("estimate_refreshes", rep.estimate_refreshes);
  {
    auto d = h.weighted_degrees();
    std::string blob;
    for (Weight w : d) blob += std::to_string(w) + ",";
    report.set("degrees_hash", ApproxReport::hash_bytes(blob));
  }
  if (g.vertex_count() <= 200) {
    report.set_real("certificate_eps", rep.certificate_eps);
  }
  if (!fl.output_path.empty()) {
    write_file(fl.output_path,
               fl.format == "json" ? save_graph_json(h) : save_graph(h));
  }
  if (!rep.degrees_exact) throw InvariantFailure{"degree-exactness"};
  double ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  return finish(report, fl, out, report_out, ms, err);
}

int run_sparsify_eulerian(const CommonFlags& fl, int force_rounds,
                          std::ostream& out, std::ostream& err,
                          std::string* report_out) {
  auto t0 = std::chrono::steady_clock::now();
  std::string bytes = read_file(fl.input);
  DirectedGraph g = load_directed(bytes);

  SparsifyConfig cfg;
  cfg.eps = fl.eps;
  cfg.seed = fl.seed;
  cfg.cycle_algo = parse_algo(fl.cycle_algo);
  cfg.short_k = fl.k;
  cfg.short_l = fl.levels;
  cfg.force_rounds = force_rounds;

  ApproxReport report("sparsify-eulerian", fl.seed, bytes);
  std::vector<std::string> args = {"sparsify-eulerian"};
  push_arg(&args, "--eps", fl.eps);
  push_arg(&args, "--seed", fl.seed);
  push_arg(&args, "--cycle-algo", fl.cycle_algo);
  push_arg(&args, "--force-rounds", force_rounds);
  report.set("args", args);
  report.set_flag("eps", fl.eps);
  report.set_flag("cycle_algo", fl.cycle_algo);
  report.set_flag("force_rounds", force_rounds);

  SparsifyReport rep;
  DirectedGraph h = eulerian_sparsify(g, cfg, &rep);

  report.set("edges_in", g.edge_count());
  report.set("edges_out", h.edge_count());
  report.set("stop_threshold", rep.stop_threshold);
  report.set("rounds", round_json(rep));
  report.set("eulerian_exact", rep.degrees_exact);
  if (g.vertex_count() <= 200) {
    report.set_real("asym_error_norm", rep.certificate_eps);
  }
  if (!fl.output_path.empty()) {
    write_file(fl.output_path,
               fl.format == "json" ? save_graph_json(h) : save_graph(h));
  }
  if (!rep.degrees_exact) throw InvariantFailure{"eulerian-degree-invariant"};
  double ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  return finish(report, fl, out, report_out, ms, err);
}

int run_sketch(const CommonFlags& fl, double alpha_scale,
               const std::string& vectors_path, std::ostream& out,
               std::ostream& err, std::string* report_out) {
  auto t0 = std::chrono::steady_clock::now();
  std::string bytes = read_file(fl.input);
  WeightedMultigraph g = load_undirected(bytes);

  SketchConfig cfg;
  cfg.eps = fl.eps;
  cfg.seed = fl.seed;
  cfg.alpha_scale = alpha_scale;
  cfg.phi = fl.phi;
  cfg.cycle_algo = parse_algo(fl.cycle_algo);
  cfg.short_k = fl.k;
  cfg.short_l = fl.levels;

  ApproxReport report("sketch", fl.seed, bytes);
  std::vector<std::string> args = {"sketch"};
  push_arg(&args, "--eps", fl.eps);
  push_arg(&args, "--seed", fl.seed);
  push_arg(&args, "--alpha-scale", alpha_scale);
  if (!vectors_path.empty()) push_arg(&args, "--vectors", vectors_path);
  report.set("args", args);
  report.set_flag("eps", fl.eps);
  report.set_flag("alpha_scale", alpha_scale);

  SketchReport rep;
  WeightedMultigraph h = spectral_sketch(g, cfg, &rep);

  OrderedJson rounds = OrderedJson::array();
  for (const auto& r : rep.rounds) {
    OrderedJson item;
    item["edges_before"] = r.edges_before;
    item["edges_after"] = r.edges_after;
    item["alpha"] = ApproxReport::round_sig(r.alpha);
    item["phi"] = ApproxReport::round_sig(r.phi);
    item["measured_gamma"] = ApproxReport::round_sig(r.measured_gamma);
    item["boundary_edges"] = r.boundary_edges;
    rounds.push_back(item);
  }
  report.set("rounds", rounds);
  report.set("edges_in", g.edge_count());
  report.set("edges_out", h.edge_count());
  report.set("degrees_exact", rep.degrees_exact);

  // Fixed-vector trials replayed from a stored vector file: one vector per
  // line, n whitespace-separated reals.
  if (!vectors_path.empty()) {
    std::istringstream vs(read_file(vectors_path));
    OrderedJson trials = OrderedJson::array();
    std::string line;
    while (std::getline(vs, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      Eigen::VectorXd x(g.vertex_count());
      for (int i = 0; i < g.vertex_count(); ++i) {
        if (!(ls >> x[i])) throw std::runtime_error("bad vector line");
      }
      double gx = 0, hx = 0;
      for (const Edge& e : g.edges()) {
        double d = x[e.u] - x[e.v];
        gx += static_cast<double>(e.w) * d * d;
      }
      for (const Edge& e : h.edges()) {
        double d = x[e.u] - x[e.v];
        hx += static_cast<double>(e.w) * d * d;
      }
      OrderedJson item;
      item["quad_in"] = ApproxReport::round_sig(gx);
      item["quad_out"] = ApproxReport::round_sig(hx);
      item["within_eps"] = std::abs(hx - gx) <= fl.eps * gx;
      trials.push_back(item);
    }
    report.set("vector_trials", trials);
  }

  if (!fl.output_path.empty()) {
    write_file(fl.output_path,
               fl.format == "json" ? save_graph_json(h) : save_graph(h));
  }
  if (!rep.degrees_exact) throw InvariantFailure{"degree-exactness"};
  double ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  return finish(report, fl, out, report_out, ms, err);
}

int run_resistances(const CommonFlags& fl, bool exact, double theta,
                    const std::vector<std::string>& pair_specs, std::ostream& out,
                    std::ostream& err, std::string* report_out) {
  auto t0 = std::chrono::steady_clock::now();
  std::string bytes = read_file(fl.input);
  WeightedMultigraph g = load_undirected(bytes);

  ApproxReport report("resistances", fl.seed, bytes);
  std::vector<std::string> args = {"resistances"};
  if (exact) args.push_back("--exact");
  if (!exact) push_arg(&args, "--theta", theta);
  push_arg(&args, "--seed", fl.seed);
  for (const auto& p : pair_specs) push_arg(&args, "--pair", p);
  report.set("args", args);
  report.set_flag("exact", exact);
  if (!exact) report.set_flag("theta", theta);

  std::string lines;
  if (!pair_specs.empty()) {
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (const auto& spec : pair_specs) {
      auto comma = spec.find(',');
      if (comma == std::string::npos) throw std::runtime_error("--pair wants 'u,v'");
      pairs.emplace_back(std::stoi(spec.substr(0, comma)),
                         std::stoi(spec.substr(comma + 1)));
    }
    auto r = exact_effective_resistances(g, pairs);
    OrderedJson vals = OrderedJson::array();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      lines += std::to_string(pairs[i].first) + " " + std::to_string(pairs[i].second) +
               " " + std::to_string(ApproxReport::round_sig(r[i])) + "\n";
      vals.push_back(ApproxReport::round_sig(r[i]));
    }
    report.set("pair_resistances", vals);
  } else {
    ResistanceEstimates est;
    if (exact) {
      est = exact_edge_resistances(g);
    } else {
      Prng rng = Prng::stream(fl.seed, "resistance", "projected");
      est = approx_effective_resistances(g, theta, rng);
    }
    for (const Edge& e : g.edges()) {
      lines += std::to_string(e.u) + " " + std::to_string(e.v) + " " +
               std::to_string(ApproxReport::round_sig(est.r[static_cast<std::size_t>(e.id)])) + "\n";
    }
    double residual = foster_residual(g, est);
    report.set_real("foster_residual", residual);
    report.set("method", exact ? "exact" : "projected");
    if (exact && std::abs(residual) > 1e-6 * g.vertex_count()) {
      throw InvariantFailure{"foster-identity"};
    }
  }
  if (!fl.output_path.empty()) write_file(fl.output_path, lines);
  out << lines;
  double ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  return finish(report, fl, out, report_out, ms, err);
}

int run_schur_step(const CommonFlags& fl, const std::string& f_spec, bool auto_dd,
                   std::ostream& out, std::ostream& err, std::string* report_out) {
  auto t0 = std::chrono::steady_clock::now();
  std::string bytes = read_file(fl.input);
  WeightedMultigraph g = load_undirected(bytes);

  std::vector<Vertex> f, c;
  if (auto_dd) {
    std::vector<Vertex> cand;
    for (Vertex v = 0; v < g.vertex_count(); v += 2) cand.push_back(v);
    std::tie(f, c) = greedy_dd_split(g, cand);
  } else {
    std::istringstream ss(f_spec);
    std::string tok;
    std::vector<char> in_f(static_cast<std::size_t>(g.vertex_count()), 0);
    while (std::getline(ss, tok, ',')) {
      Vertex v = static_cast<Vertex>(std::stoi(tok));
      in_f[static_cast<std::size_t>(v)] = 1;
    }
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      (in_f[static_cast<std::size_t>(v)] ? f : c).push_back(v);
    }
  }

  ApproxReport report("schur-step", fl.seed, bytes);
  std::vector<std::string> args = {"schur-step"};
  if (auto_dd) {
    args.push_back("--auto-dd");
  } else {
    push_arg(&args, "--f", f_spec);
  }
  push_arg(&args, "--seed", fl.seed);
  report.set("args", args);
  report.set("f_size", f.size());
  report.set("c_size", c.size());

  SchurStepResult res = schur_step_cliques(g, f, c);
  report.set("cliques_on_f", res.cliques_on_f.size());
  report.set("cliques_on_c", res.cliques_on_c.size());
  report.set("bicliques_fc", res.bicliques_fc.size());
  report.set("boundary_terms", res.boundary_terms.size());

  if (g.vertex_count() <= 200) {
    Eigen::MatrixXd l = laplacian_dense(g);
    Eigen::MatrixXd sc = schur_complement_dense(l, f, c);
    Eigen::MatrixXd m = res.reconstruct_dense(g.vertex_count());
    Eigen::MatrixXd sc2 = schur_complement_dense(m, f, c);
    double residual = (sc - 0.5 * sc2).cwiseAbs().maxCoeff();
    report.set_real("identity_residual", residual);
    if (residual > 1e-8) throw InvariantFailure{"schur-squaring-identity"};
  }

  if (!fl.output_path.empty()) {
    OrderedJson doc;
    OrderedJson arr = OrderedJson::array();
    auto emit_clique = [&](const VertexWeightedClique& k) {
      OrderedJson item;
      OrderedJson weights = OrderedJson::object();
      for (std::size_t i = 0; i < k.support.size(); ++i) {
        weights[std::to_string(k.support[i])] = ApproxReport::round_sig(k.w[i]);
      }
      item["clique"] = k.support;
      item["w"] = OrderedJson{{"vertex_weights", weights}};
      arr.push_back(item);
    };
    for (const auto& k : res.cliques_on_f) emit_clique(k);
    for (const auto& k : res.cliques_on_c) emit_clique(k);
    for (const auto& k : res.bicliques_fc) {
      OrderedJson weights = OrderedJson::object();
      for (std::size_t i = 0; i < k.a.size(); ++i) {
        weights[std::to_string(k.a[i])] = ApproxReport::round_sig(k.wa[i]);
      }
      for (std::size_t i = 0; i < k.b.size(); ++i) {
        weights[std::to_string(k.b[i])] = ApproxReport::round_sig(k.wb[i]);
      }
      OrderedJson item;
      item["A"] = k.a;
      item["B"] = k.b;
      item["w"] = OrderedJson{{"vertex_weights", weights}};
      arr.push_back(item);
    }
    doc["cliques"] = arr;
    OrderedJson boundary = OrderedJson::array();
    for (auto& [u, v, w] : res.boundary_terms) {
      boundary.push_back(OrderedJson::array({u, v, ApproxReport::round_sig(w)}));
    }
    doc["boundary"] = boundary;
    write_file(fl.output_path, doc.dump(2) + "\n");
  }
  double ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  return finish(report, fl, out, report_out, ms, err);
}

int run_reduce_weights(const CommonFlags& fl, int xi, std::ostream& out,
                       std::ostream& err, std::string* report_out) {
  auto t0 = std::chrono::steady_clock::now();
  std::string bytes = read_file(fl.input);
  DirectedGraph g = load_directed(bytes);

  ApproxReport report("reduce-weights", fl.seed, bytes);
  std::vector<std::string> args = {"reduce-weights"};
  push_arg(&args, "--xi", xi);
  push_arg(&args, "--seed", fl.seed);
  report.set("args", args);
  report.set_flag("xi", xi);

  ReduceToUnitResult res = reduce_to_unit(g, xi);

  // Exact degree identity of the decomposition.
  std::vector<Rat> in(static_cast<std::size_t>(g.vertex_count()), Rat(0));
  std::vector<Rat> outd(static_cast<std::size_t>(g.vertex_count()), Rat(0));
  for (auto& [i, cls] : res.classes) {
    for (const auto& e : cls.edges()) {
      in[static_cast<std::size_t>(e.head)] += Rat(BigInt(e.w));
      outd[static_cast<std::size_t>(e.tail)] += Rat(BigInt(e.w));
    }
  }
  for (const auto& e : res.h_sparse.edges) {
    in[static_cast<std::size_t>(e.head)] += e.w;
    outd[static_cast<std::size_t>(e.tail)] += e.w;
  }
  bool degrees_exact = true;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (in[static_cast<std::size_t>(v)] != Rat(BigInt(g.in_degrees()[static_cast<std::size_t>(v)])) ||
        outd[static_cast<std::size_t>(v)] != Rat(BigInt(g.out_degrees()[static_cast<std::size_t>(v)]))) {
      degrees_exact = false;
    }
  }
  report.set("degrees_exact", degrees_exact);
  report.set("xi_used", res.xi);
  report.set("class_count", res.classes.size());
  report.set("class_vertex_total", res.class_vertex_total);
  report.set("sparse_edges", res.h_sparse.edges.size());
  report.set("touched_components_max_bucket", res.touched_components_max_bucket);
  if (g.vertex_count() <= 60) {
    Eigen::MatrixXd sum = res.h_sparse.laplacian_dense();
    for (auto& [i, cls] : res.classes) sum += laplacian_dense(cls);
    Eigen::MatrixXd sym = symmetrized_laplacian_dense(g);
    report.set_real("asym_error_norm",
                    asym_error_norm(sym, laplacian_dense(g), sum).value);
  }
  if (!degrees_exact) throw InvariantFailure{"degree-exactness"};
  double ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  return finish(report, fl, out, report_out, ms, err);
}

int run_verify(const std::string& certificate_path, const std::string& input_path,
               std::ostream& out, std::ostream& err, std::string* report_out) {
  std::string stored = read_file(certificate_path);
  auto doc = nlohmann::json::parse(stored);
  if (doc.at("schema") != "cyclesparse-report/1") {
    throw std::runtime_error("unknown report schema");
  }
  std::vector<std::string> args = doc.at("args").get<std::vector<std::string>>();
  args.push_back("--input");
  args.push_back(input_path);
  std::ostringstream sink;
  std::string replayed;
  int rc = run_cli(args, sink, err, &replayed);
  if (rc != 0) throw InvariantFailure{"replay-subcommand-exit-" + std::to_string(rc)};
  if (replayed != stored) throw InvariantFailure{"replay-bit-identity"};
  out << "verify: replay is bit-identical\n";
  if (report_out) *report_out = replayed;
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err, std::string* report_out) {
  CLI::App app{"short-cycle sparsification toolkit"};
  app.require_subcommand(1);

  CommonFlags fl;
  std::string algo = "naive";
  int force_rounds = 0;
  double alpha_scale = 4.0;
  std::string vectors_path;
  bool exact = false;
  double theta = 0.4054651081081644;
  std::vector<std::string> pair_specs;
  std::string f_spec;
  bool auto_dd = false;
  int xi = 0;
  std::string certificate_path, verify_input;

  auto* cmd_decompose = app.add_subcommand("decompose", "short cycle decomposition");
  add_common(cmd_decompose, &fl, false);
  cmd_decompose->add_option("--algo", algo, "naive|short")
      ->check(CLI::IsMember({"naive", "short"}));

  auto* cmd_sparsify = app.add_subcommand("sparsify", "degree-preserving sparsifier");
  add_common(cmd_sparsify, &fl);
  cmd_sparsify->add_option("--force-rounds", force_rounds, "minimum rounds");

  auto* cmd_eulerian =
      app.add_subcommand("sparsify-eulerian", "Eulerian directed sparsifier");
  add_common(cmd_eulerian, &fl);
  cmd_eulerian->add_option("--force-rounds", force_rounds, "minimum rounds");

  auto* cmd_sketch = app.add_subcommand("sketch", "graphical spectral sketch");
  add_common(cmd_sketch, &fl);
  cmd_sketch->add_option("--alpha-scale", alpha_scale, "degree threshold scale");
  cmd_sketch->add_option("--vectors", vectors_path, "fixed-vector trial file");

  auto* cmd_resist = app.add_subcommand("resistances", "effective resistances");
  add_common(cmd_resist, &fl, false);
  cmd_resist->add_flag("--exact", exact, "dense-exact values");
  cmd_resist->add_option("--theta", theta, "projection accuracy");
  cmd_resist->add_option("--pair", pair_specs, "query pair 'u,v'");

  auto* cmd_schur = app.add_subcommand("schur-step", "one squaring step");
  add_common(cmd_schur, &fl, false);
  cmd_schur->add_option("--f", f_spec, "eliminated vertices 'v1,v2,...'");
  cmd_schur->add_flag("--auto-dd", auto_dd, "greedy 1.1-DD subset");

  auto* cmd_reduce = app.add_subcommand("reduce-weights", "power-of-two reduction");
  add_common(cmd_reduce, &fl, false);
  cmd_reduce->add_option("--xi", xi, "bucket modulus (0 = auto)");

  auto* cmd_verify = app.add_subcommand("verify", "replay a stored report");
  cmd_verify->add_option("--certificate", certificate_path, "stored report")->required();
  cmd_verify->add_option("--input", verify_input, "original input file")->required();

  std::vector<std::string> argv = args;
  argv.insert(argv.begin(), "cyclesparse");
  std::vector<const char*> cargv;
  for (const auto& a : argv) cargv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;  // --help
    }
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (cmd_decompose->parsed()) return run_decompose(fl, algo, out, err, report_out);
    if (cmd_sparsify->parsed()) return run_sparsify(fl, force_rounds, out, err, report_out);
    if (cmd_eulerian->parsed()) {
      return run_sparsify_eulerian(fl, force_rounds, out, err, report_out);
    }
    if (cmd_sketch->parsed()) {
      return run_sketch(fl, alpha_scale, vectors_path, out, err, report_out);
    }
    if (cmd_resist->parsed()) {
      return run_resistances(fl, exact, theta, pair_specs, out, err, report_out);
    }
    if (cmd_schur->parsed()) {
      return run_schur_step(fl, f_spec, auto_dd, out, err, report_out);
    }
    if (cmd_reduce->parsed()) return run_reduce_weights(fl, xi, out, err, report_out);
    if (cmd_verify->parsed()) {
      return run_verify(certificate_path, verify_input, out, err, report_out);
    }
  } catch (const InvariantFailure& f) {
    err << "invariant failed: " << f.check << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "usage error: no subcommand\n";
  return 2;
}

}  // namespace cyclesparse
