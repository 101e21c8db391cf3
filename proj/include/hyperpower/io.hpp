#pragma once

// File formats:
//   graph       plain text, "n m" then m lines "u v" (0-based)
//   hypergraph  {"k": int, "n": int, "edges": [[v, ...], ...]}
//   tensor      {"order": k, "dim": n, "entries": [[i1, ..., ik, value], ...]}
//   partition   {"blocks": [[...], ...]}
//   eigenpair   {"lambda", "vector", "residual", "iterations", "bracket": [a, b]}

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperpower/error.hpp"
#include "hyperpower/hypergraph.hpp"
#include "hyperpower/partition.hpp"
#include "hyperpower/power.hpp"
#include "hyperpower/solver.hpp"
#include "hyperpower/tensor.hpp"

namespace hyperpower {

using json = nlohmann::json;

/// Rounds to 12 significant digits, the precision of every emitted number.
inline double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::stod(buf);
}

inline json rounded(std::span<const double> xs) {
  json out = json::array();
  for (double x : xs) out.push_back(round12(x));
  return out;
}

inline Graph read_graph(std::istream& in) {
  std::size_t n = 0, m = 0;
  if (!(in >> n >> m)) throw ParseError("graph file: expected header line \"n m\"");
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    long long u = -1, v = -1;
    if (!(in >> u >> v)) throw ParseError("graph file: expected " + std::to_string(m) + " edge lines, got " + std::to_string(i));
    if (u < 0 || v < 0) throw ParseError("graph file: negative vertex id");
    edges.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
  }
  std::string extra;
  if (in >> extra) throw ParseError("graph file: trailing content after " + std::to_string(m) + " edges");
  try {
    return Graph(n, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("graph file: ") + e.what());
  }
}

inline void write_graph(std::ostream& out, const Graph& g) {
  out << g.n() << ' ' << g.m() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

inline json to_json(const Hypergraph& h) {
  return json{{"k", h.k()}, {"n", h.n()}, {"edges", h.edges()}};
}

inline Hypergraph hypergraph_from_json(const json& j) {
  try {
    return Hypergraph(j.at("n").get<std::size_t>(), j.at("k").get<std::size_t>(),
                      j.at("edges").get<std::vector<std::vector<std::size_t>>>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("hypergraph JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("hypergraph JSON: ") + e.what());
  }
}

inline json to_json(const SparseTensor& t) {
  json entries = json::array();
  for (const auto& [idx, v] : t.entries()) {
    json row = json::array();
    for (std::size_t i : idx) row.push_back(i);
    row.push_back(v);
    entries.push_back(std::move(row));
  }
  return json{{"order", t.order()}, {"dim", t.dim()}, {"entries", std::move(entries)}};
}

inline SparseTensor tensor_from_json(const json& j) {
  try {
    const auto order = j.at("order").get<std::size_t>();
    SparseTensor t(order, j.at("dim").get<std::size_t>());
    for (const auto& row : j.at("entries")) {
      if (row.size() != order + 1) throw ParseError("tensor JSON: entry needs order+1 fields");
      Index idx(order);
      for (std::size_t m = 0; m < order; ++m) idx[m] = row[m].get<std::size_t>();
      t.add(idx, row[order].get<double>());
    }
    return t;
  } catch (const json::exception& e) {
    throw ParseError(std::string("tensor JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("tensor JSON: ") + e.what());
  }
}

inline json to_json(const Partition& p) { return json{{"blocks", p.blocks()}}; }

inline Partition partition_from_json(const json& j) {
  try {
    return Partition(j.at("blocks").get<std::vector<std::vector<std::size_t>>>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("partition JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("partition JSON: ") + e.what());
  }
}

inline json to_json(const GenPowerLabeling& lab) {
  return json{{"k", lab.k},
              {"s", lab.s},
              {"vertex_blocks", lab.vertex_blocks},
              {"edge_blocks", lab.edge_blocks}};
}

inline json to_json(const EigenPair& e) {
  return json{{"lambda", round12(e.lambda)},
              {"vector", rounded(e.vector)},
              {"residual", round12(e.residual)},
              {"iterations", e.iterations},
              {"bracket", {round12(e.bracket.lower), round12(e.bracket.upper)}}};
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_graph(in);
}

}  // namespace hyperpower
