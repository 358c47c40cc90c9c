// Copyright 2026 The noisy-lll Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nlll/error.hpp"
#include "nlll/rng.hpp"

namespace nlll {

using NodeId = std::size_t;

// Undirected edge record. Stored once per unordered pair with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double weight = 1.0;
  double kappa = 1.0;  // per-edge reliability, 1 when not assigned

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Incidence entry: the neighbor and the index of the connecting edge.
struct Incidence {
  NodeId neighbor = 0;
  std::size_t edge = 0;
};

// Immutable undirected weighted graph. Edges are kept as a canonical sorted
// list of (min, max) records plus a per-node adjacency index.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  // Builds the canonical form. Endpoints may be given in either order;
  // self-loops, duplicates, negative weights and kappa outside (0,1] are
  // rejected.
  WeightedGraph(std::size_t n, std::vector<Edge> edges,
                bool has_reliabilities = false)
      : n_(n), edges_(std::move(edges)), has_reliabilities_(has_reliabilities) {
    for (auto& e : edges_) {
      require(e.u < n_ && e.v < n_, ErrorKind::kInvalidTopology,
              "edge endpoint out of range");
      require(e.u != e.v, ErrorKind::kInvalidTopology, "self-loop");
      require(e.weight >= 0.0, ErrorKind::kInvalidParameter,
              "negative edge weight");
      require(e.kappa > 0.0 && e.kappa <= 1.0, ErrorKind::kInvalidParameter,
              "edge reliability outside (0,1]");
      if (e.u > e.v) std::swap(e.u, e.v);
      if (!has_reliabilities_) e.kappa = 1.0;
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
      return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (std::size_t k = 1; k < edges_.size(); ++k) {
      require(edges_[k - 1].u != edges_[k].u || edges_[k - 1].v != edges_[k].v,
              ErrorKind::kInvalidTopology, "duplicate edge");
    }
    adjacency_.assign(n_, {});
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      adjacency_[edges_[k].u].push_back({edges_[k].v, k});
      adjacency_[edges_[k].v].push_back({edges_[k].u, k});
    }
  }

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t k) const { return edges_.at(k); }

  std::span<const Incidence> neighbors(NodeId i) const {
    require(i < n_, ErrorKind::kInvalidInput, "node out of range");
    return adjacency_[i];
  }
  std::size_t degree(NodeId i) const { return neighbors(i).size(); }

  std::size_t max_degree() const noexcept {
    std::size_t d = 0;
    for (const auto& adj : adjacency_) d = std::max(d, adj.size());
    return d;
  }

  // Sum of incident weights.
  double weighted_degree(NodeId i) const {
    double s = 0.0;
    for (const auto& inc : neighbors(i)) s += edges_[inc.edge].weight;
    return s;
  }

  bool has_reliabilities() const noexcept { return has_reliabilities_; }

  // True when some stored reliability differs from 1.
  bool is_heterogeneous() const noexcept {
    return std::any_of(edges_.begin(), edges_.end(),
                       [](const Edge& e) { return e.kappa != 1.0; });
  }

  // Same edges and weights with the given per-edge reliabilities.
  WeightedGraph with_reliabilities(std::span<const double> kappas) const {
    require(kappas.size() == edges_.size(), ErrorKind::kDimension,
            "one reliability per edge required");
    std::vector<Edge> edges = edges_;
    for (std::size_t k = 0; k < edges.size(); ++k) edges[k].kappa = kappas[k];
    return WeightedGraph(n_, std::move(edges), true);
  }

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
    return a.n_ == b.n_ && a.has_reliabilities_ == b.has_reliabilities_ &&
           a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  bool has_reliabilities_ = false;
};

// Benchmark topologies. All use unit weights.

inline WeightedGraph ring(std::size_t n) {
  require(n >= 3, ErrorKind::kInvalidTopology, "ring needs n >= 3");
  std::vector<Edge> edges;
  edges.reserve(n);
  for (NodeId i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return WeightedGraph(n, std::move(edges));
}

// 4-neighbor lattice; node (r, c) has index r * cols + c.
inline WeightedGraph grid(std::size_t rows, std::size_t cols) {
  require(rows >= 2 && cols >= 2, ErrorKind::kInvalidTopology,
          "grid needs rows >= 2 and cols >= 2");
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const NodeId id = r * cols + c;
      if (c + 1 < cols) edges.push_back({id, id + 1});
      if (r + 1 < rows) edges.push_back({id, id + cols});
    }
  }
  return WeightedGraph(rows * cols, std::move(edges));
}

// G(n, q): each unordered pair (i < j), visited in lexicographic order,
// is included when a uniform draw falls below q.
inline WeightedGraph erdos_renyi(std::size_t n, double q, std::uint64_t seed) {
  require(q >= 0.0 && q <= 1.0, ErrorKind::kInvalidParameter,
          "edge probability outside [0,1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (rng.uniform() < q) edges.push_back({i, j});
    }
  }
  return WeightedGraph(n, std::move(edges));
}

// Node 0 is the hub.
inline WeightedGraph star(std::size_t n) {
  require(n >= 2, ErrorKind::kInvalidTopology, "star needs n >= 2");
  std::vector<Edge> edges;
  for (NodeId i = 1; i < n; ++i) edges.push_back({0, i});
  return WeightedGraph(n, std::move(edges));
}

// Draws kappa_ij ~ U[kappa_min, kappa_max] independently per edge. Edge k
// uses its own stream seeded with (seed XOR k), so the draw for an edge does
// not depend on iteration order.
inline WeightedGraph assign_heterogeneous_reliabilities(const WeightedGraph& g,
                                                        double kappa_min,
                                                        double kappa_max,
                                                        std::uint64_t seed) {
  require(kappa_min > 0.0 && kappa_min <= kappa_max && kappa_max <= 1.0,
          ErrorKind::kInvalidParameter,
          "reliability range must satisfy 0 < min <= max <= 1");
  std::vector<double> kappas(g.num_edges());
  for (std::size_t k = 0; k < kappas.size(); ++k) {
    Rng rng(seed ^ static_cast<std::uint64_t>(k));
    kappas[k] = kappa_min + (kappa_max - kappa_min) * rng.uniform();
  }
  return g.with_reliabilities(kappas);
}

// 17 significant digits, enough to round-trip any double.
// Shortest decimal form that parses back to the same double.
inline std::string format_double(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// Plain-text edge list: "n <count>" then one "i j v kappa" line per edge in
// canonical order. A graph without assigned reliabilities is written with
// kappa = 1; parsing always yields a graph carrying reliabilities.
inline void write_edge_list(std::ostream& os, const WeightedGraph& g) {
  os << "n " << g.num_nodes() << '\n';
  for (const auto& e : g.edges()) {
    os << e.u << ' ' << e.v << ' ' << format_double(e.weight) << ' '
       << format_double(e.kappa) << '\n';
  }
}

inline std::string to_edge_list(const WeightedGraph& g) {
  std::ostringstream os;
  write_edge_list(os, g);
  return os.str();
}

inline WeightedGraph read_edge_list(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  };
  auto parse_error = [&](const std::string& what) {
    fail(ErrorKind::kParse, "edge list line " + std::to_string(line_no) +
                                ": " + what);
  };

  if (!next_line()) parse_error("missing header");
  std::size_t n = 0;
  {
    std::istringstream hs(line);
    std::string tag;
    if (!(hs >> tag >> n) || tag != "n") parse_error("expected 'n <count>'");
  }
  std::vector<Edge> edges;
  while (next_line()) {
    std::istringstream ls(line);
    Edge e;
    std::string extra;
    if (!(ls >> e.u >> e.v >> e.weight >> e.kappa))
      parse_error("expected 'i j v kappa'");
    if (ls >> extra) parse_error("trailing field '" + extra + "'");
    edges.push_back(e);
  }
  try {
    return WeightedGraph(n, std::move(edges), true);
  } catch (const Error& err) {
    parse_error(err.what());
  }
  return {};
}

inline WeightedGraph from_edge_list(const std::string& text) {
  std::istringstream is(text);
  return read_edge_list(is);
}

}  // namespace nlll
