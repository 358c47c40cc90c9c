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
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "nlll/error.hpp"
#include "nlll/graph.hpp"

namespace nlll {

// Index of a joint profile in {0,1}^n; bit i holds x_i (little-endian).
using StateIndex = std::uint64_t;

inline constexpr std::size_t kMaxIndexedNodes = 63;

// Joint binary action profile x = (x_0, ..., x_{n-1}).
class ActionProfile {
 public:
  ActionProfile() = default;
  explicit ActionProfile(std::size_t n, int value = 0)
      : bits_(n, static_cast<std::uint8_t>(value ? 1 : 0)) {}
  ActionProfile(std::initializer_list<int> bits) {
    bits_.reserve(bits.size());
    for (int b : bits) {
      require(b == 0 || b == 1, ErrorKind::kInvalidInput, "action not binary");
      bits_.push_back(static_cast<std::uint8_t>(b));
    }
  }

  static ActionProfile from_index(StateIndex s, std::size_t n) {
    require(n <= kMaxIndexedNodes, ErrorKind::kDimension,
            "profile too long for a state index");
    ActionProfile x(n);
    for (std::size_t i = 0; i < n; ++i) x.bits_[i] = (s >> i) & 1U;
    return x;
  }

  StateIndex index() const {
    require(size() <= kMaxIndexedNodes, ErrorKind::kDimension,
            "profile too long for a state index");
    StateIndex s = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      s |= static_cast<StateIndex>(bits_[i]) << i;
    }
    return s;
  }

  std::size_t size() const noexcept { return bits_.size(); }
  int operator[](std::size_t i) const { return bits_[i]; }
  void set(std::size_t i, int b) { bits_[i] = static_cast<std::uint8_t>(b); }

  ActionProfile flipped() const {
    ActionProfile y = *this;
    for (auto& b : y.bits_) b ^= 1U;
    return y;
  }

  friend bool operator==(const ActionProfile&, const ActionProfile&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// Read-only profile view over a state index, for the exact engine.
struct IndexedProfile {
  StateIndex state = 0;
  std::size_t n = 0;

  std::size_t size() const noexcept { return n; }
  int operator[](std::size_t i) const {
    return static_cast<int>((state >> i) & 1U);
  }
};

template <class P>
concept Profile = requires(const P& x, std::size_t i) {
  { x.size() } -> std::convertible_to<std::size_t>;
  { x[i] } -> std::convertible_to<int>;
};

namespace detail {

template <Profile P>
void check_dimension(const WeightedGraph& g, const P& x) {
  require(x.size() == g.num_nodes(), ErrorKind::kDimension,
          "profile length does not match node count");
}

inline void check_node(const WeightedGraph& g, NodeId i) {
  require(i < g.num_nodes(), ErrorKind::kInvalidInput, "node out of range");
}

inline void check_reliabilities(const WeightedGraph& g) {
  require(g.has_reliabilities(), ErrorKind::kConfiguration,
          "graph has no per-edge reliabilities");
}

}  // namespace detail

// Phi(x) = sum over edges of v_ij 1{x_i = x_j}.
template <Profile P>
double potential(const WeightedGraph& g, const P& x) {
  detail::check_dimension(g, x);
  double phi = 0.0;
  for (const auto& e : g.edges()) {
    if (x[e.u] == x[e.v]) phi += e.weight;
  }
  return phi;
}

// Potential with effective weights w_ij = v_ij kappa_ij.
template <Profile P>
double effective_potential(const WeightedGraph& g, const P& x) {
  detail::check_reliabilities(g);
  detail::check_dimension(g, x);
  double phi = 0.0;
  for (const auto& e : g.edges()) {
    if (x[e.u] == x[e.v]) phi += e.weight * e.kappa;
  }
  return phi;
}

// m_i(b; x): weight of neighbors of i currently playing b.
template <Profile P>
double local_match(const WeightedGraph& g, NodeId i, int b, const P& x) {
  detail::check_node(g, i);
  detail::check_dimension(g, x);
  double m = 0.0;
  for (const auto& inc : g.neighbors(i)) {
    if (x[inc.neighbor] == b) m += g.edge(inc.edge).weight;
  }
  return m;
}

template <Profile P>
double effective_local_match(const WeightedGraph& g, NodeId i, int b,
                             const P& x) {
  detail::check_reliabilities(g);
  detail::check_node(g, i);
  detail::check_dimension(g, x);
  double m = 0.0;
  for (const auto& inc : g.neighbors(i)) {
    const auto& e = g.edge(inc.edge);
    if (x[inc.neighbor] == b) m += e.weight * e.kappa;
  }
  return m;
}

// Phi(1, x_-i) - Phi(0, x_-i), evaluated locally as m_i(1;x) - m_i(0;x).
template <Profile P>
double delta_phi(const WeightedGraph& g, NodeId i, const P& x) {
  detail::check_node(g, i);
  detail::check_dimension(g, x);
  double d = 0.0;
  for (const auto& inc : g.neighbors(i)) {
    const double v = g.edge(inc.edge).weight;
    d += x[inc.neighbor] ? v : -v;
  }
  return d;
}

// m_i^eff(1;x) - m_i^eff(0;x).
template <Profile P>
double effective_delta_phi(const WeightedGraph& g, NodeId i, const P& x) {
  detail::check_reliabilities(g);
  detail::check_node(g, i);
  detail::check_dimension(g, x);
  double d = 0.0;
  for (const auto& inc : g.neighbors(i)) {
    const auto& e = g.edge(inc.edge);
    d += x[inc.neighbor] ? e.weight * e.kappa : -e.weight * e.kappa;
  }
  return d;
}

// 1 / (1 + e^{-t}), evaluated without overflow for large |t|.
inline double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// Largest potential over all profiles, by enumeration.
inline double max_potential(const WeightedGraph& g) {
  require(g.num_nodes() <= 30, ErrorKind::kEnumerationInfeasible,
          "max_potential enumerates 2^n profiles");
  double best = 0.0;
  const StateIndex count = StateIndex{1} << g.num_nodes();
  for (StateIndex s = 0; s < count; ++s) {
    best = std::max(best, potential(g, IndexedProfile{s, g.num_nodes()}));
  }
  return best;
}

}  // namespace nlll
