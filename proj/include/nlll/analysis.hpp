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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlll/channel.hpp"
#include "nlll/distribution.hpp"
#include "nlll/dynamics.hpp"
#include "nlll/error.hpp"
#include "nlll/game.hpp"
#include "nlll/graph.hpp"
#include "nlll/kernel.hpp"

namespace nlll {

// max over adjacent pairs of |pi(x) P(x,y) - pi(y) P(y,x)|. Non-adjacent
// pairs have zero flux both ways, so only single-bit neighbors are scanned.
inline double detailed_balance_residual(const SparseKernel& k,
                                        const StateDistribution& pi) {
  require(pi.size() == k.num_states(), ErrorKind::kDimension,
          "distribution does not match kernel");
  double r = 0.0;
  for (StateIndex s = 0; s < k.num_states(); ++s) {
    for (NodeId i = 0; i < k.num_nodes(); ++i) {
      const StateIndex t = s ^ (StateIndex{1} << i);
      if (t < s) continue;
      r = std::max(r, std::abs(pi[s] * k.flip(s, i) - pi[t] * k.flip(t, i)));
    }
  }
  return r;
}

// max_x |pi(x) - pi(not x)|.
inline double flip_symmetry_residual(const StateDistribution& pi) {
  const StateIndex all = pi.size() - 1;
  double r = 0.0;
  for (StateIndex s = 0; s < pi.size(); ++s) {
    r = std::max(r, std::abs(pi[s] - pi[all ^ s]));
  }
  return r;
}

// First-order drift of the snapshot choice probability at small beta:
// kappa * DeltaPhi_i(x), or m_i^eff(1;x) - m_i^eff(0;x) for per-edge links.
inline double first_order_drift(const WeightedGraph& g, const LinkModel& link,
                                StateIndex s, NodeId i) {
  return fast_advantage(g, link, s, i);
}

// |(1/n) P(x_i^+ = 1 | x) - 1/(2n) - (beta/(4n)) drift| for the snapshot
// regime, with the choice probability computed exactly. For x_i = 0 the
// first term is the kernel entry P(x, x^(i,1)).
inline double high_temp_residual(const WeightedGraph& g, const LinkModel& link,
                                 double beta, const ActionProfile& x,
                                 NodeId i) {
  require_exact_size(g);
  require(x.size() == g.num_nodes(), ErrorKind::kDimension,
          "profile length does not match node count");
  require(i < g.num_nodes(), ErrorKind::kInvalidInput, "node out of range");
  const StateIndex s = x.index();
  const double n = static_cast<double>(g.num_nodes());
  const double p_one =
      snapshot_advantage_law(g, link, s, i).expected_logistic(beta, 1.0);
  const double drift = first_order_drift(g, link, s, i);
  return std::abs(p_one / n - 0.5 / n - beta / (4.0 * n) * drift);
}

// J(mu) = kappa E_mu[Phi] + H(mu) / beta.
inline double free_energy(const WeightedGraph& g, const StateDistribution& mu,
                          double beta, double kappa_scale) {
  require(beta > 0.0, ErrorKind::kInvalidParameter, "beta must be positive");
  return kappa_scale * expected_potential(g, mu) + entropy(mu) / beta;
}

struct GapBound {
  double gap;    // Phi* - E_{pi^F}[Phi]
  double bound;  // n ln 2 / (beta kappa)
  bool holds;
};

inline GapBound gap_bound_check(const WeightedGraph& g, double beta,
                                double kappa_scale) {
  require(beta > 0.0 && kappa_scale > 0.0, ErrorKind::kInvalidParameter,
          "beta and kappa must be positive");
  const auto pi = gibbs_distribution(g, kappa_scale, beta);
  const auto phi = potential_table(g);
  const double best = *std::max_element(phi.begin(), phi.end());
  double mean = 0.0;
  for (StateIndex s = 0; s < phi.size(); ++s) mean += pi[s] * phi[s];
  GapBound out;
  out.gap = best - mean;
  out.bound = static_cast<double>(g.num_nodes()) * std::log(2.0) /
              (beta * kappa_scale);
  out.holds = out.gap <= out.bound + 1e-12;
  return out;
}

// Fast-regime stationary law in closed form: Gibbs in kappa Phi for a
// homogeneous channel, in Phi_eff for per-edge links.
inline StateDistribution fast_gibbs(const WeightedGraph& g,
                                    const LinkModel& link, double beta) {
  if (link.is_per_edge()) return gibbs_distribution(g, 1.0, beta, true);
  return gibbs_distribution(g, kappa(link.homogeneous_channel()), beta);
}

struct ConvergencePoint {
  std::size_t uses = 0;
  std::optional<double> tv;                  // TV(pi_{beta,K}, pi^F)
  std::optional<double> expected_potential;  // E_{pi_{beta,K}}[Phi]
  std::string error;                         // set when K was infeasible
};

struct ConvergenceProfile {
  std::vector<ConvergencePoint> points;
  double fast_expected_potential = 0.0;  // E_{pi^F}[Phi]
};

// Stationary laws of the finite-K chains against the fast Gibbs law.
// Infeasible K values are reported with an error instead of a value.
inline ConvergenceProfile stationary_convergence_profile(
    const WeightedGraph& g, const LinkModel& link, double beta,
    std::span<const std::size_t> uses_list) {
  const auto reference = fast_gibbs(g, link, beta);
  ConvergenceProfile out;
  out.fast_expected_potential = expected_potential(g, reference);
  for (std::size_t uses : uses_list) {
    ConvergencePoint pt;
    pt.uses = uses;
    try {
      const auto pi = stationary_distribution(finite_k_kernel(g, link, uses, beta));
      pt.tv = tv_distance(pi, reference);
      pt.expected_potential = expected_potential(g, pi);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kEnumerationInfeasible &&
          e.kind() != ErrorKind::kNumericalFailure) {
        throw;
      }
      pt.error = e.what();
    }
    out.points.push_back(std::move(pt));
  }
  return out;
}

}  // namespace nlll
