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

#include <catch_amalgamated.hpp>

#include <cmath>

#include "nlll/game.hpp"
#include "nlll/graph.hpp"
#include "nlll/rng.hpp"

using nlll::ActionProfile;
using nlll::IndexedProfile;
using nlll::WeightedGraph;
using Catch::Matchers::WithinAbs;

namespace {

WeightedGraph random_weighted(std::size_t n, double q, std::uint64_t seed) {
  const auto base = nlll::erdos_renyi(n, q, seed);
  nlll::Rng rng(seed + 1000);
  std::vector<nlll::Edge> edges;
  for (auto e : base.edges()) {
    e.weight = 0.25 + 2.0 * rng.uniform();
    e.kappa = 0.1 + 0.9 * rng.uniform();
    edges.push_back(e);
  }
  return WeightedGraph(n, edges, true);
}

bool connected(const WeightedGraph& g) {
  std::vector<int> seen(g.num_nodes(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const auto i = stack.back();
    stack.pop_back();
    for (const auto& inc : g.neighbors(i)) {
      if (!seen[inc.neighbor]) {
        seen[inc.neighbor] = 1;
        ++count;
        stack.push_back(inc.neighbor);
      }
    }
  }
  return count == g.num_nodes();
}

}  // namespace

TEST_CASE("state index encoding is little-endian", "[game]") {
  const auto x = ActionProfile::from_index(0b1101, 4);
  REQUIRE(x == ActionProfile{1, 0, 1, 1});
  REQUIRE(x.index() == 0b1101);
  for (nlll::StateIndex s = 0; s < 64; ++s) {
    REQUIRE(ActionProfile::from_index(s, 6).index() == s);
    REQUIRE(ActionProfile::from_index(s, 6).flipped().index() == (63 ^ s));
  }
  REQUIRE_THROWS_AS(ActionProfile::from_index(0, 64), nlll::Error);
  REQUIRE_THROWS_AS((ActionProfile{0, 2}), nlll::Error);
}

TEST_CASE("potential examples", "[game]") {
  const WeightedGraph edge(2, {{0, 1}});
  REQUIRE(nlll::potential(edge, ActionProfile{0, 0}) == 1.0);
  REQUIRE(nlll::potential(edge, ActionProfile{0, 1}) == 0.0);
  REQUIRE(nlll::potential(nlll::ring(3), ActionProfile{0, 0, 1}) == 1.0);
  REQUIRE(nlll::potential(nlll::ring(4), ActionProfile{0, 1, 0, 1}) == 0.0);
  REQUIRE(nlll::potential(nlll::ring(4), ActionProfile{0, 0, 0, 0}) == 4.0);
  try {
    nlll::potential(nlll::ring(4), ActionProfile{0, 0, 0});
    FAIL("length mismatch accepted");
  } catch (const nlll::Error& e) {
    REQUIRE(e.kind() == nlll::ErrorKind::kDimension);
  }
}

TEST_CASE("effective potential examples", "[game]") {
  const auto ring4 = nlll::from_edge_list(nlll::to_edge_list(nlll::ring(4)));
  for (nlll::StateIndex s = 0; s < 16; ++s) {
    const IndexedProfile x{s, 4};
    REQUIRE(nlll::effective_potential(ring4, x) == nlll::potential(ring4, x));
  }
  const WeightedGraph single(2, {{0, 1, 1.0, 0.6}}, true);
  REQUIRE(nlll::effective_potential(single, ActionProfile{1, 1}) == 0.6);
  const WeightedGraph tri(3, {{0, 1, 1.0, 0.5}, {1, 2, 1.0, 0.5}, {0, 2, 1.0, 1.0}}, true);
  REQUIRE_THAT(nlll::effective_potential(tri, ActionProfile{0, 0, 0}), WithinAbs(2.0, 1e-15));
  try {
    nlll::effective_potential(nlll::ring(3), ActionProfile{0, 0, 0});
    FAIL("missing reliabilities accepted");
  } catch (const nlll::Error& e) {
    REQUIRE(e.kind() == nlll::ErrorKind::kConfiguration);
  }
}

TEST_CASE("local match and advantage", "[game]") {
  const auto s5 = nlll::star(5);
  const ActionProfile x{0, 1, 1, 0, 0};
  REQUIRE(nlll::local_match(s5, 0, 1, x) == 2.0);
  REQUIRE(nlll::local_match(s5, 0, 0, x) == 2.0);
  REQUIRE(nlll::delta_phi(s5, 0, x) == 0.0);

  const WeightedGraph isolated(3, {{0, 1}});
  REQUIRE(nlll::local_match(isolated, 2, 0, ActionProfile{1, 1, 1}) == 0.0);
  REQUIRE(nlll::local_match(isolated, 2, 1, ActionProfile{1, 1, 1}) == 0.0);
  REQUIRE_THROWS_AS(nlll::local_match(isolated, 3, 0, ActionProfile{1, 1, 1}), nlll::Error);

  const auto g = random_weighted(9, 0.5, 3);
  const ActionProfile ones(9, 1);
  for (std::size_t i = 0; i < 9; ++i) {
    REQUIRE_THAT(nlll::delta_phi(g, i, ones), WithinAbs(g.weighted_degree(i), 1e-12));
  }

  const WeightedGraph single(2, {{0, 1, 1.0, 0.6}}, true);
  REQUIRE(nlll::effective_local_match(single, 0, 1, ActionProfile{0, 1}) ==
          0.6 * nlll::local_match(single, 0, 1, ActionProfile{0, 1}));
}

TEST_CASE("single-site identity, exhaustive on small graphs", "[game][property]") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const std::size_t n = 3 + seed % 4;  // 3..6
    const auto g = random_weighted(n, 0.6, seed);
    const nlll::StateIndex count = nlll::StateIndex{1} << n;
    for (nlll::StateIndex s = 0; s < count; ++s) {
      const IndexedProfile x{s, n};
      for (std::size_t i = 0; i < n; ++i) {
        const IndexedProfile x1{s | (nlll::StateIndex{1} << i), n};
        const IndexedProfile x0{s & ~(nlll::StateIndex{1} << i), n};
        double total = 0.0;
        for (const auto& inc : g.neighbors(i)) total += g.edge(inc.edge).weight;
        const double m1 = nlll::local_match(g, i, 1, x);
        const double m0 = nlll::local_match(g, i, 0, x);
        REQUIRE_THAT(m0 + m1, WithinAbs(total, 1e-12));
        REQUIRE_THAT(nlll::potential(g, x1) - nlll::potential(g, x0), WithinAbs(m1 - m0, 1e-12));
        REQUIRE_THAT(nlll::delta_phi(g, i, x), WithinAbs(m1 - m0, 1e-12));
        REQUIRE_THAT(nlll::effective_potential(g, x1) - nlll::effective_potential(g, x0),
                     WithinAbs(nlll::effective_delta_phi(g, i, x), 1e-12));
        // Independent summation over the edge list.
        double me1 = 0.0;
        for (const auto& e : g.edges()) {
          if (e.u == i && x[e.v] == 1) me1 += e.weight * e.kappa;
          if (e.v == i && x[e.u] == 1) me1 += e.weight * e.kappa;
        }
        REQUIRE_THAT(nlll::effective_local_match(g, i, 1, x), WithinAbs(me1, 1e-12));
      }
    }
  }
}

TEST_CASE("flip symmetry of the potentials", "[game][property]") {
  const auto g = random_weighted(8, 0.5, 21);
  for (nlll::StateIndex s = 0; s < 256; ++s) {
    const auto x = ActionProfile::from_index(s, 8);
    REQUIRE(nlll::potential(g, x) == nlll::potential(g, x.flipped()));
    REQUIRE(nlll::effective_potential(g, x) == nlll::effective_potential(g, x.flipped()));
  }
}

TEST_CASE("consensus maximizes the potential", "[game][property]") {
  std::vector<WeightedGraph> graphs{nlll::ring(12), nlll::grid(3, 4), nlll::star(10)};
  for (std::uint64_t seed = 1; graphs.size() < 8; ++seed) {
    auto g = random_weighted(10, 0.35, seed);
    if (connected(g)) graphs.push_back(std::move(g));
  }
  for (const auto& g : graphs) {
    const std::size_t n = g.num_nodes();
    double total = 0.0;
    for (const auto& e : g.edges()) total += e.weight;
    REQUIRE_THAT(nlll::max_potential(g), WithinAbs(total, 1e-12));
    const nlll::StateIndex last = (nlll::StateIndex{1} << n) - 1;
    for (nlll::StateIndex s = 1; s < last; ++s) {
      REQUIRE(nlll::potential(g, IndexedProfile{s, n}) < total - 1e-12);
    }
  }
}

TEST_CASE("logistic", "[game]") {
  REQUIRE(nlll::logistic(0.0) == 0.5);
  for (int k = -500; k <= 500; ++k) {
    const double t = 0.1 * k;
    REQUIRE_THAT(nlll::logistic(t) + nlll::logistic(-t), WithinAbs(1.0, 1e-15));
  }
  for (double t : {1e-2, 1e-3, -1e-2, -1e-3}) {
    REQUIRE(std::abs(nlll::logistic(t) - (0.5 + t / 4)) <= std::abs(t * t * t) / 8);
  }
  REQUIRE(nlll::logistic(1000.0) == 1.0);
  REQUIRE(nlll::logistic(-1000.0) == 0.0);
  REQUIRE(std::isfinite(nlll::logistic(-745.0)));
}
