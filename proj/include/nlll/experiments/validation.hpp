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
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "nlll/analysis.hpp"
#include "nlll/channel.hpp"
#include "nlll/distribution.hpp"
#include "nlll/error.hpp"
#include "nlll/game.hpp"
#include "nlll/graph.hpp"
#include "nlll/kernel.hpp"
#include "nlll/rng.hpp"

namespace nlll::experiments {

struct Check {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation;  // how measured is compared with threshold
  bool passed = false;
};

struct ValidationReport {
  std::string suite;
  std::vector<Check> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const Check& c) { return c.passed; });
  }

  void write(std::ostream& os) const {
    for (const auto& c : checks) {
      os << (c.passed ? "PASS " : "FAIL ") << suite << ": " << c.name
         << "  measured=" << format_double(c.measured) << ' '
         << c.relation << ' ' << format_double(c.threshold) << '\n';
    }
  }
};

namespace detail {

inline Check at_most(std::string name, double measured, double threshold) {
  return {std::move(name), measured, threshold, "<=", measured <= threshold};
}
inline Check above(std::string name, double measured, double threshold) {
  return {std::move(name), measured, threshold, ">", measured > threshold};
}
inline Check within(std::string name, double measured, double lo, double hi) {
  Check c{std::move(name), measured, hi,
          "in [" + format_double(lo) + ",", measured >= lo && measured <= hi};
  c.relation += "]";
  return c;
}

struct NamedGraph {
  std::string name;
  WeightedGraph graph;
};

inline std::vector<NamedGraph> gibbs_graphs() {
  return {{"ring(8)", ring(8)},
          {"grid(2x4)", grid(2, 4)},
          {"er(8;0.4;seed=7)", erdos_renyi(8, 0.4, 7)}};
}

inline WeightedGraph heterogeneous_triangle() {
  return WeightedGraph(3, {{0, 1, 1.0, 0.5}, {1, 2, 1.0, 0.5}, {0, 2, 1.0, 1.0}}, true);
}

// Probability that agent i chooses 1 after K uses per neighbor, by
// enumerating every raw received-symbol tuple and forming the empirical
// match frequencies literally.
inline double brute_force_choice_one(const WeightedGraph& g, const LinkModel& link,
                                     std::size_t uses, double beta, StateIndex s,
                                     NodeId i) {
  const auto nbrs = g.neighbors(i);
  const std::size_t slots = nbrs.size() * uses;
  require(slots <= 13, ErrorKind::kEnumerationInfeasible, "brute force too large");
  std::vector<int> digit(slots, 0);
  const Symbol alphabet[3] = {Symbol::kZero, Symbol::kOne, Symbol::kErasure};
  double total = 0.0;
  while (true) {
    double prob = 1.0;
    double adv = 0.0;
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
      const auto& e = g.edge(nbrs[j].edge);
      const ChannelSpec c = link.channel_for(e);
      const int sent = (s >> nbrs[j].neighbor) & 1U;
      double q1 = 0.0, q0 = 0.0;
      for (std::size_t k = 0; k < uses; ++k) {
        const Symbol y = alphabet[digit[j * uses + k]];
        prob *= symbol_probability(c, sent, y);
        q1 += matches(y, 1) ? 1.0 : 0.0;
        q0 += matches(y, 0) ? 1.0 : 0.0;
      }
      adv += e.weight * (q1 / static_cast<double>(uses) - q0 / static_cast<double>(uses));
    }
    if (prob > 0.0) total += prob * logistic(beta * adv);
    std::size_t pos = 0;
    while (pos < slots && ++digit[pos] == 3) digit[pos++] = 0;
    if (pos == slots) break;
  }
  return total;
}

}  // namespace detail

inline ValidationReport validate_gibbs() {
  ValidationReport r{"gibbs", {}};
  for (const auto& [name, g] : detail::gibbs_graphs()) {
    for (double beta : {0.5, 2.0}) {
      for (double p : {0.05, 0.2}) {
        const auto link = LinkModel::homogeneous(ChannelSpec::bsc(p));
        const auto k = fast_kernel(g, link, beta);
        const auto pi = stationary_distribution(k);
        const auto gibbs = gibbs_distribution(g, kappa(link.homogeneous_channel()), beta);
        const std::string tag = name + " beta=" + format_double(beta) +
                                " p=" + format_double(p);
        r.checks.push_back(detail::at_most("TV(stationary, Gibbs) " + tag,
                                           tv_distance(pi, gibbs), 1e-10));
        r.checks.push_back(detail::at_most("detailed balance " + tag,
                                           detailed_balance_residual(k, gibbs), 1e-10));
      }
    }
  }
  const auto tri = detail::heterogeneous_triangle();
  for (auto kind : {ChannelKind::kBsc, ChannelKind::kBec}) {
    const auto link = LinkModel::per_edge(kind);
    const auto k = fast_kernel(tri, link, 2.0);
    const auto pi = stationary_distribution(k);
    const auto gibbs = gibbs_distribution(tri, 1.0, 2.0, true);
    r.checks.push_back(detail::at_most(
        "TV(stationary, Gibbs(Phi_eff)) heterogeneous triangle " + link.describe(),
        tv_distance(pi, gibbs), 1e-10));
  }
  return r;
}

inline ValidationReport validate_k_convergence() {
  ValidationReport r{"k-convergence", {}};
  const auto g = ring(6);
  const auto link = LinkModel::homogeneous(ChannelSpec::bsc(0.2));
  const double beta = 2.0;
  const std::vector<std::size_t> ks{1, 2, 4, 8, 16, 32, 64};
  const auto profile = stationary_convergence_profile(g, link, beta, ks);
  for (const auto& pt : profile.points) {
    require(pt.tv.has_value(), ErrorKind::kNumericalFailure, pt.error);
  }
  const double tv1 = *profile.points.front().tv;
  const double tv64 = *profile.points.back().tv;
  r.checks.push_back(detail::at_most("TV(pi_K=64, pi^F) ring(6) p=0.2 beta=2", tv64, 0.02));
  r.checks.push_back({"TV at K=64 below TV at K=1", tv64, tv1, "<", tv64 < tv1});
  const double gap64 = std::abs(*profile.points.back().expected_potential -
                                profile.fast_expected_potential);
  const double gap1 = std::abs(*profile.points.front().expected_potential -
                               profile.fast_expected_potential);
  r.checks.push_back({"|E_K[Phi] - E_F[Phi]| at K=64 below K=1", gap64, gap1, "<",
                      gap64 < gap1});
  for (auto c : {ChannelSpec::bsc(0.2), ChannelSpec::bec(0.5)}) {
    const auto l = LinkModel::homogeneous(c);
    r.checks.push_back(detail::at_most(
        "max |P_{beta,1} - P^S| ring(6) " + l.describe(),
        finite_k_kernel(g, l, 1, beta).max_abs_difference(snapshot_kernel(g, l, beta)),
        1e-12));
  }
  return r;
}

// The snapshot choice probability minus its first-order expansion decays as
// beta^3 (sigma - 1/2 is odd), so the residual ratio between beta = 1e-2 and
// beta = 1e-3 sits near 1000.
inline ValidationReport validate_high_temp() {
  ValidationReport r{"high-temp", {}};
  struct Instance {
    std::string name;
    WeightedGraph graph;
    LinkModel link;
  };
  std::vector<Instance> cases{
      {"ring(4) bsc(0.2)", ring(4), LinkModel::homogeneous(ChannelSpec::bsc(0.2))},
      {"ring(4) bec(0.5)", ring(4), LinkModel::homogeneous(ChannelSpec::bec(0.5))},
      {"triangle bsc-per-edge", detail::heterogeneous_triangle(),
       LinkModel::per_edge(ChannelKind::kBsc)},
      {"triangle bec-per-edge", detail::heterogeneous_triangle(),
       LinkModel::per_edge(ChannelKind::kBec)}};
  for (const auto& c : cases) {
    const std::size_t n = c.graph.num_nodes();
    double lo = INFINITY, hi = 0.0, at_zero = 0.0;
    for (StateIndex s = 0; s < state_count(n); ++s) {
      const auto x = ActionProfile::from_index(s, n);
      for (NodeId i = 0; i < n; ++i) {
        if (first_order_drift(c.graph, c.link, s, i) == 0.0) continue;
        const double ratio = high_temp_residual(c.graph, c.link, 1e-2, x, i) /
                             high_temp_residual(c.graph, c.link, 1e-3, x, i);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      for (NodeId i = 0; i < n; ++i) {
        at_zero = std::max(at_zero, high_temp_residual(c.graph, c.link, 0.0, x, i));
      }
    }
    r.checks.push_back(detail::at_most(c.name + " residual at beta=0", at_zero, 0.0));
    r.checks.push_back(detail::within(c.name + " min r(1e-2)/r(1e-3)", lo, 500.0, 2000.0));
    r.checks.push_back(detail::within(c.name + " max r(1e-2)/r(1e-3)", hi, 500.0, 2000.0));
  }
  return r;
}

inline ValidationReport validate_gap_bound() {
  ValidationReport r{"gap-bound", {}};
  auto add = [&](const std::string& name, const WeightedGraph& g, double beta, double k) {
    const auto gb = gap_bound_check(g, beta, k);
    r.checks.push_back({name + " gap vs n ln2/(beta kappa)", gb.gap, gb.bound, "<=", gb.holds});
  };
  for (const auto& [name, g] : detail::gibbs_graphs()) {
    for (double beta : {0.5, 2.0}) {
      for (double p : {0.05, 0.2}) {
        add(name + " beta=" + format_double(beta) + " p=" + format_double(p),
            g, beta, 1.0 - 2.0 * p);
      }
    }
  }
  add("ring(6) beta=2 p=0.2", ring(6), 2.0, 0.6);
  add("grid(3x3) beta=2 kappa=0.6", grid(3, 3), 2.0, 0.6);
  add("ring(4) beta=50 kappa=1", ring(4), 50.0, 1.0);
  const auto nontrivial = gap_bound_check(ring(8), 0.5, 0.9);
  r.checks.push_back(detail::above("ring(8) beta=0.5 kappa=0.9 gap is nontrivial",
                                   nontrivial.gap, 0.0));
  return r;
}

inline ValidationReport validate_free_energy() {
  ValidationReport r{"free-energy", {}};
  const auto g = ring(6);
  const double beta = 1.5, k = 0.8;
  const auto pi = gibbs_distribution(g, k, beta);
  const double log_z = log_partition(g, k, beta);
  r.checks.push_back(detail::at_most("|J(pi^F) - ln Z / beta|",
                                     std::abs(free_energy(g, pi, beta, k) - log_z / beta),
                                     1e-10));
  Rng rng(2024);
  double worst_identity = 0.0, worst_gap = INFINITY;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> w(pi.size());
    for (double& x : w) x = -std::log(1.0 - rng.uniform());
    const auto mu = StateDistribution::from_weights(g.num_nodes(), std::move(w));
    const double j = free_energy(g, mu, beta, k);
    worst_identity = std::max(
        worst_identity, std::abs(j + kl_divergence(mu, pi) / beta - log_z / beta));
    worst_gap = std::min(worst_gap, log_z / beta - j);
  }
  r.checks.push_back(detail::at_most("max |J(mu) + KL(mu||pi)/beta - ln Z / beta|",
                                     worst_identity, 1e-10));
  r.checks.push_back(detail::above("min J(pi^F) - J(mu) over random mu", worst_gap, 0.0));
  return r;
}

inline ValidationReport validate_reversibility() {
  ValidationReport r{"reversibility", {}};
  for (const auto& [name, g] : detail::gibbs_graphs()) {
    const auto k = fast_kernel(g, ChannelSpec::bsc(0.2), 2.0);
    r.checks.push_back(detail::at_most("fast kernel " + name,
                                       detailed_balance_residual(k, stationary_distribution(k)),
                                       1e-10));
  }
  // Equal-weight complete graphs (and unit rings) are reversible even under
  // snapshot updates; unequal weights or a hub break detailed balance.
  const auto snapshot_residual = [](const WeightedGraph& g) {
    const auto k = snapshot_kernel(g, ChannelSpec::bsc(0.2), 2.0);
    return detailed_balance_residual(k, stationary_distribution(k));
  };
  r.checks.push_back(detail::above(
      "snapshot weighted triangle v=(1,2,3) beta=2 p=0.2 violates balance",
      snapshot_residual(WeightedGraph(3, {{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 3.0}})), 1e-6));
  r.checks.push_back(detail::above("snapshot star(4) beta=2 p=0.2 violates balance",
                                   snapshot_residual(star(4)), 1e-6));
  r.checks.push_back(detail::at_most("snapshot unit triangle beta=2 p=0.2 is reversible",
                                     snapshot_residual(ring(3)), 1e-12));
  return r;
}

inline ValidationReport validate_symmetry() {
  ValidationReport r{"symmetry", {}};
  const double beta = 2.0;
  for (const auto& [name, g] : detail::gibbs_graphs()) {
    for (auto c : {ChannelSpec::bsc(0.2), ChannelSpec::bec(0.5)}) {
      const auto link = LinkModel::homogeneous(c);
      const std::string tag = name + " " + link.describe();
      r.checks.push_back(detail::at_most(
          "snapshot " + tag,
          flip_symmetry_residual(stationary_distribution(snapshot_kernel(g, link, beta))),
          1e-10));
      r.checks.push_back(detail::at_most(
          "fast " + tag,
          flip_symmetry_residual(stationary_distribution(fast_kernel(g, link, beta))), 1e-10));
      r.checks.push_back(detail::at_most(
          "finite-K=4 " + tag,
          flip_symmetry_residual(stationary_distribution(finite_k_kernel(g, link, 4, beta))),
          1e-10));
    }
  }
  return r;
}

// Sufficient-statistic kernel entries against raw-tuple enumeration.
inline ValidationReport validate_oracle() {
  ValidationReport r{"oracle", {}};
  const double beta = 1.3;
  std::vector<detail::NamedGraph> graphs{{"ring(4)", ring(4)},
                                         {"path(3)", WeightedGraph(3, {{0, 1, 1.0}, {1, 2, 2.5}})},
                                         {"triangle-het", detail::heterogeneous_triangle()}};
  for (const auto& [name, g] : graphs) {
    std::vector<LinkModel> links;
    if (g.is_heterogeneous()) {
      links = {LinkModel::per_edge(ChannelKind::kBsc), LinkModel::per_edge(ChannelKind::kBec)};
    } else {
      links = {LinkModel::homogeneous(ChannelSpec::bsc(0.15)),
               LinkModel::homogeneous(ChannelSpec::bec(0.35))};
    }
    for (const auto& link : links) {
      for (std::size_t uses : {1, 2, 3}) {
        const RegimeConfig cfg{uses == 1 ? Regime::kSnapshot : Regime::kFiniteK, uses,
                               Aggregation::kEstimation, beta, link};
        double worst = 0.0;
        for (StateIndex s = 0; s < state_count(g.num_nodes()); ++s) {
          for (NodeId i = 0; i < g.num_nodes(); ++i) {
            const double fast_path = exact_choice_probabilities(g, cfg, s, i).one;
            const double brute = detail::brute_force_choice_one(g, link, uses, beta, s, i);
            worst = std::max(worst, std::abs(fast_path - brute));
          }
        }
        r.checks.push_back(detail::at_most(
            name + " " + link.describe() + " K=" + std::to_string(uses), worst, 1e-12));
      }
    }
  }
  return r;
}

inline const std::map<std::string, std::function<ValidationReport()>>& validation_suites() {
  static const std::map<std::string, std::function<ValidationReport()>> suites{
      {"gibbs", validate_gibbs},
      {"k-convergence", validate_k_convergence},
      {"high-temp", validate_high_temp},
      {"gap-bound", validate_gap_bound},
      {"free-energy", validate_free_energy},
      {"reversibility", validate_reversibility},
      {"symmetry", validate_symmetry},
      {"oracle", validate_oracle},
  };
  return suites;
}

inline ValidationReport run_validation(const std::string& suite) {
  const auto& suites = validation_suites();
  const auto it = suites.find(suite);
  require(it != suites.end(), ErrorKind::kConfiguration,
          "unknown validation suite '" + suite + "'");
  return it->second();
}

}  // namespace nlll::experiments
