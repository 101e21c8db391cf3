// Command-line front end: gen-power, radius, verify, regular-root.
//
// Exit codes: 0 ok, 1 usage, 2 input/parse error, 3 invalid (k, s),
// 4 non-convergence, 5 Laplacian on a non-odd-bipartite hypergraph,
// 6 monotonicity assertion failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyperpower/hyperpower.hpp"

namespace hp = hyperpower;
using hp::json;

namespace {

enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kBadParams = 3,
  kNoConvergence = 4,
  kNotOddBipartite = 5,
  kAssertion = 6,
};

class Timer {
 public:
  long long elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void emit_report(const std::string& command, json inputs, json outputs, const Timer& timer) {
  json report{{"command", command},
              {"inputs", std::move(inputs)},
              {"outputs", std::move(outputs)},
              {"timing_ms", timer.elapsed_ms()}};
  std::cout << report.dump(2) << '\n';
}

// "A:B:STEP" or a single value "A".
std::vector<std::size_t> parse_range(const std::string& text) {
  std::vector<long long> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t colon = text.find(':', pos);
    const std::string piece = text.substr(pos, colon == std::string::npos ? std::string::npos : colon - pos);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(piece, &used);
    } catch (const std::exception&) {
      throw hp::ParseError("bad range \"" + text + "\"");
    }
    if (used != piece.size() || v < 0) throw hp::ParseError("bad range \"" + text + "\"");
    parts.push_back(v);
    if (colon == std::string::npos) break;
    pos = colon + 1;
  }
  if (parts.size() == 1) return {static_cast<std::size_t>(parts[0])};
  if (parts.size() != 3 || parts[2] <= 0 || parts[1] < parts[0]) throw hp::ParseError("bad range \"" + text + "\"");
  std::vector<std::size_t> out;
  for (long long v = parts[0]; v <= parts[1]; v += parts[2]) out.push_back(static_cast<std::size_t>(v));
  return out;
}

struct GenPowerArgs {
  std::string graph;
  std::size_t k = 0;
  std::size_t s = 0;
  std::string out;
  std::string labeling;
};

int run_gen_power(const GenPowerArgs& a) {
  Timer timer;
  const hp::Graph g = hp::read_graph_file(a.graph);
  const auto power = hp::build_generalized_power(g, a.k, a.s);
  const std::string labeling_path =
      a.labeling.empty() ? (std::filesystem::path(a.out).replace_extension(".labeling.json")).string() : a.labeling;
  {
    std::ofstream out(a.out);
    if (!out) throw hp::ParseError("cannot write " + a.out);
    out << hp::to_json(power.hypergraph).dump() << '\n';
  }
  {
    std::ofstream out(labeling_path);
    if (!out) throw hp::ParseError("cannot write " + labeling_path);
    out << hp::to_json(power.labeling).dump() << '\n';
  }
  emit_report("gen-power", {{"graph", a.graph}, {"k", a.k}, {"s", a.s}},
              {{"n", power.hypergraph.n()},
               {"m", power.hypergraph.m()},
               {"hypergraph", a.out},
               {"labeling", labeling_path}},
              timer);
  return kOk;
}

struct RadiusArgs {
  std::string hypergraph;
  std::string graph;
  std::size_t k = 0;
  std::size_t s = 0;
  bool quotient = false;
  std::string tensor = "Q";
  double tol = 1e-10;
  long max_iter = 1'000'000;
  std::size_t threads = 1;
};

int run_radius(const RadiusArgs& a) {
  Timer timer;
  hp::SolverConfig cfg;
  cfg.tol = a.tol;
  cfg.max_iter = a.max_iter;
  cfg.threads = a.threads;
  const hp::TensorKind kind = a.tensor == "A"   ? hp::TensorKind::Adjacency
                              : a.tensor == "L" ? hp::TensorKind::Laplacian
                                                : hp::TensorKind::SignlessLaplacian;

  json inputs{{"tensor", a.tensor}, {"tol", a.tol}, {"quotient", a.quotient}};
  std::optional<hp::GeneralizedPower> power;
  std::optional<hp::Graph> graph;
  std::optional<hp::Hypergraph> h;
  if (!a.hypergraph.empty()) {
    inputs["hypergraph"] = a.hypergraph;
    h = hp::hypergraph_from_json(hp::read_json_file(a.hypergraph));
  } else {
    inputs["graph"] = a.graph;
    inputs["k"] = a.k;
    inputs["s"] = a.s;
    graph = hp::read_graph_file(a.graph);
    power = hp::build_generalized_power(*graph, a.k, a.s);
    h = power->hypergraph;
  }

  json outputs;
  if (a.quotient) {
    const hp::EigenPair pair = hp::quotient_radius(*graph, a.k, a.s, cfg);
    hp::DenseVector lifted = hp::lift_eigenvector(hp::natural_partition(power->labeling), pair.vector);
    outputs = hp::to_json(pair);
    if (kind == hp::TensorKind::Laplacian) {
      const auto cert = hp::is_odd_bipartite(*h);
      if (!cert) throw hp::NotOddBipartite("G^{k,s} is not odd-bipartite");
      for (std::size_t v : cert->first) lifted[v] = -lifted[v];
      outputs["odd_bipartite_v1"] = cert->first;
    }
    outputs["lifted"] = hp::rounded(lifted);
    outputs["lifted_residual"] = hp::round12(hp::residual(hp::HypergraphOperator(*h, kind), pair.lambda, lifted));
  } else if (kind == hp::TensorKind::Laplacian) {
    const hp::LaplacianPair lp = hp::laplacian_radius_odd_bipartite(*h, cfg);
    outputs = hp::to_json(lp.signless);
    outputs["signed_vector"] = hp::rounded(lp.signed_vector);
    outputs["laplacian_residual"] = hp::round12(lp.laplacian_residual);
    outputs["odd_bipartite_v1"] = lp.certificate.first;
  } else {
    outputs = hp::to_json(hp::hypergraph_radius(*h, kind, cfg));
  }
  emit_report("radius", std::move(inputs), std::move(outputs), timer);
  return kOk;
}

struct VerifyArgs {
  std::string graph;
  std::string k_range;
  std::string s_range;
  double tol = 1e-10;
};

int run_verify(const VerifyArgs& a) {
  const hp::Graph g = hp::read_graph_file(a.graph);
  hp::SolverConfig cfg;
  cfg.tol = a.tol;
  const auto report = hp::verify_monotonicity(g, parse_range(a.k_range), parse_range(a.s_range), cfg);
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  std::cout << "k,s,lambda,residual,iterations,delta_gap\n";
  for (const auto& pt : report.points)
    std::cout << pt.k << ',' << pt.s << ',' << num(pt.pair.lambda) << ',' << num(pt.pair.residual) << ','
              << pt.pair.iterations << ',' << num(pt.delta_gap) << '\n';
  for (const auto& c : report.checks)
    std::cout << "# " << (c.passed ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : " : " + c.detail)
              << '\n';
  return report.passed() ? kOk : kAssertion;
}

struct RootArgs {
  std::size_t d = 0;
  std::size_t k = 0;
  std::size_t s = 0;
};

int run_regular_root(const RootArgs& a) {
  Timer timer;
  const hp::RegularRoot r = hp::regular_root(a.d, a.k, a.s);
  emit_report("regular-root", {{"d", a.d}, {"k", a.k}, {"s", a.s}},
              {{"root", hp::round12(r.root)}, {"bracket", {hp::round12(r.lower), hp::round12(r.upper)}}}, timer);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized power hypergraphs and largest H-eigenvalues"};
  app.require_subcommand(1);

  GenPowerArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-power", "Build G^{k,s} from a graph file");
  gen_cmd->add_option("--graph", gen.graph, "Graph file (\"n m\" then edges)")->required();
  gen_cmd->add_option("-k", gen.k, "Edge size k")->required();
  gen_cmd->add_option("-s", gen.s, "Vertex blow-up s")->required();
  gen_cmd->add_option("--out", gen.out, "Hypergraph JSON output")->required();
  gen_cmd->add_option("--labeling", gen.labeling, "Labeling JSON output (default <out>.labeling.json)");

  RadiusArgs rad;
  auto* rad_cmd = app.add_subcommand("radius", "Largest H-eigenvalue of A, Q or L");
  auto* hyper_opt = rad_cmd->add_option("--hypergraph", rad.hypergraph, "Hypergraph JSON");
  auto* graph_opt = rad_cmd->add_option("--graph", rad.graph, "Graph file; builds G^{k,s}");
  hyper_opt->excludes(graph_opt);
  rad_cmd->add_option("-k", rad.k, "Edge size k")->needs(graph_opt);
  rad_cmd->add_option("-s", rad.s, "Vertex blow-up s")->needs(graph_opt);
  rad_cmd->add_flag("--quotient", rad.quotient, "Solve on the quotient B^{k,s} and lift")->needs(graph_opt);
  rad_cmd->add_option("--tensor", rad.tensor, "A, Q or L")->check(CLI::IsMember({"A", "Q", "L"}));
  rad_cmd->add_option("--tol", rad.tol, "Bracket width tolerance")->check(CLI::PositiveNumber);
  rad_cmd->add_option("--max-iter", rad.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
  rad_cmd->add_option("--threads", rad.threads, "Threads for operator applies")->check(CLI::PositiveNumber);

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "Monotonicity table of lambda(B^{k,s}) over a grid");
  ver_cmd->add_option("--graph", ver.graph, "Graph file")->required();
  ver_cmd->add_option("--k-range", ver.k_range, "A:B:STEP or a single k")->required();
  ver_cmd->add_option("--s-range", ver.s_range, "A:B:STEP or a single s")->required();
  ver_cmd->add_option("--tol", ver.tol, "Solver tolerance")->check(CLI::PositiveNumber);

  RootArgs root;
  auto* root_cmd = app.add_subcommand("regular-root", "Closed-form lambda(Q^{k,s}) of a d-regular graph");
  root_cmd->add_option("-d", root.d, "Degree d >= 1")->required();
  root_cmd->add_option("-k", root.k, "Edge size k")->required();
  root_cmd->add_option("-s", root.s, "Vertex blow-up s")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen_cmd) return run_gen_power(gen);
    if (*rad_cmd) {
      if (rad.hypergraph.empty() && rad.graph.empty()) {
        std::cerr << "radius: one of --hypergraph or --graph is required\n";
        return kUsage;
      }
      if (!rad.graph.empty() && (rad.k == 0 || rad.s == 0)) {
        std::cerr << "radius: --graph needs -k and -s\n";
        return kUsage;
      }
      if (rad.quotient && rad.tensor == "A") {
        std::cerr << "radius: --quotient is available for Q and L only\n";
        return kUsage;
      }
      return run_radius(rad);
    }
    if (*ver_cmd) return run_verify(ver);
    if (*root_cmd) return run_regular_root(root);
  } catch (const hp::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const hp::ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadParams;
  } catch (const hp::NotConverged& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const hp::NotOddBipartite& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNotOddBipartite;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  }
  return kUsage;
}
