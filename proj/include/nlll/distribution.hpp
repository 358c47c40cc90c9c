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
#include <limits>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "nlll/error.hpp"
#include "nlll/game.hpp"
#include "nlll/graph.hpp"
#include "nlll/kernel.hpp"

namespace nlll {

// Probability vector over {0,1}^n, indexed by StateIndex.
class StateDistribution {
 public:
  StateDistribution() = default;

  // Takes probabilities as given; they must be nonnegative and sum to 1.
  StateDistribution(std::size_t n, std::vector<double> probs)
      : n_(n), probs_(std::move(probs)) {
    require(probs_.size() == state_count(n_), ErrorKind::kDimension,
            "distribution length must be 2^n");
    double total = 0.0;
    for (double p : probs_) {
      require(p >= 0.0 && std::isfinite(p), ErrorKind::kInvalidInput,
              "probabilities must be finite and nonnegative");
      total += p;
    }
    require(std::abs(total - 1.0) <= 1e-12, ErrorKind::kInvalidInput,
            "probabilities must sum to 1");
  }

  // Normalizes nonnegative weights.
  static StateDistribution from_weights(std::size_t n,
                                        std::vector<double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    require(total > 0.0, ErrorKind::kInvalidInput, "weights sum to zero");
    for (double& w : weights) w /= total;
    return StateDistribution(n, std::move(weights));
  }

  static StateDistribution uniform(std::size_t n) {
    return StateDistribution(
        n, std::vector<double>(state_count(n), 1.0 / state_count(n)));
  }

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](StateIndex s) const { return probs_[s]; }
  std::span<const double> probabilities() const noexcept { return probs_; }

  // "state_index value" lines, 17 significant digits.
  void write(std::ostream& os) const {
    for (StateIndex s = 0; s < probs_.size(); ++s) {
      os << s << ' ' << format_double(probs_[s]) << '\n';
    }
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> probs_;
};

inline double tv_distance(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorKind::kDimension, "lengths differ");
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d += std::abs(a[k] - b[k]);
  return 0.5 * d;
}

inline double tv_distance(const StateDistribution& a,
                          const StateDistribution& b) {
  return tv_distance(a.probabilities(), b.probabilities());
}

// Natural-log KL divergence; +infinity when mu charges a state pi does not.
inline double kl_divergence(std::span<const double> mu,
                            std::span<const double> pi) {
  require(mu.size() == pi.size(), ErrorKind::kDimension, "lengths differ");
  double d = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    if (mu[k] == 0.0) continue;
    if (pi[k] == 0.0) return std::numeric_limits<double>::infinity();
    d += mu[k] * std::log(mu[k] / pi[k]);
  }
  return d;
}

// Shannon entropy in nats, 0 log 0 = 0.
inline double entropy(std::span<const double> mu) {
  double h = 0.0;
  for (double p : mu) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

inline double kl_divergence(const StateDistribution& mu,
                            const StateDistribution& pi) {
  return kl_divergence(mu.probabilities(), pi.probabilities());
}
inline double entropy(const StateDistribution& mu) {
  return entropy(mu.probabilities());
}

// Phi (or Phi_eff) for every state.
inline std::vector<double> potential_table(const WeightedGraph& g,
                                           bool use_effective = false) {
  require_exact_size(g);
  const std::size_t n = g.num_nodes();
  std::vector<double> phi(state_count(n));
  for (StateIndex s = 0; s < phi.size(); ++s) {
    const IndexedProfile x{s, n};
    phi[s] = use_effective ? effective_potential(g, x) : potential(g, x);
  }
  return phi;
}

inline double expected_potential(const WeightedGraph& g,
                                 const StateDistribution& mu,
                                 bool use_effective = false) {
  const auto phi = potential_table(g, use_effective);
  require(phi.size() == mu.size(), ErrorKind::kDimension,
          "distribution does not match graph");
  double e = 0.0;
  for (StateIndex s = 0; s < phi.size(); ++s) e += mu[s] * phi[s];
  return e;
}

// ln sum_x exp(beta * scale * Phi(x)) (Phi_eff when use_effective), with
// the maximum exponent factored out.
inline double log_partition(const WeightedGraph& g, double scale, double beta,
                            bool use_effective = false) {
  const auto phi = potential_table(g, use_effective);
  double top = -std::numeric_limits<double>::infinity();
  for (double f : phi) top = std::max(top, beta * scale * f);
  double z = 0.0;
  for (double f : phi) z += std::exp(beta * scale * f - top);
  return top + std::log(z);
}

// pi(x) proportional to exp(beta * scale * Phi(x)), or Phi_eff.
inline StateDistribution gibbs_distribution(const WeightedGraph& g,
                                            double scale, double beta,
                                            bool use_effective = false) {
  const auto phi = potential_table(g, use_effective);
  double top = -std::numeric_limits<double>::infinity();
  for (double f : phi) top = std::max(top, beta * scale * f);
  std::vector<double> w(phi.size());
  for (std::size_t s = 0; s < w.size(); ++s) {
    w[s] = std::exp(beta * scale * phi[s] - top);
  }
  return StateDistribution::from_weights(g.num_nodes(), std::move(w));
}

// ||mu P - mu||_1.
inline double stationarity_residual(const SparseKernel& k,
                                    std::span<const double> mu) {
  const auto next = k.apply_left(mu);
  double r = 0.0;
  for (std::size_t s = 0; s < next.size(); ++s) r += std::abs(next[s] - mu[s]);
  return r;
}

struct StationaryOptions {
  std::size_t direct_max_nodes = 12;   // sparse LU up to 4096 states
  double tolerance = 1e-12;            // power-iteration stop on L1 residual
  double accept_residual = 1e-10;      // final acceptance
  std::size_t max_iterations = 2'000'000;
};

namespace detail {

inline std::vector<double> stationary_direct(const SparseKernel& k) {
  const auto size = static_cast<Eigen::Index>(k.num_states());
  const std::size_t n = k.num_nodes();
  // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(k.num_states() * (n + 2));
  const Eigen::Index last = size - 1;
  for (StateIndex s = 0; s < k.num_states(); ++s) {
    const auto col = static_cast<Eigen::Index>(s);
    if (col != last) trip.emplace_back(col, col, k.self_loop(s) - 1.0);
    for (NodeId i = 0; i < n; ++i) {
      const auto row = static_cast<Eigen::Index>(s ^ (StateIndex{1} << i));
      if (row != last) trip.emplace_back(row, col, k.flip(s, i));
    }
    trip.emplace_back(last, col, 1.0);
  }
  Eigen::SparseMatrix<double> a(size, size);
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(a);
  require(lu.info() == Eigen::Success, ErrorKind::kNumericalFailure,
          "sparse LU factorization failed");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
  rhs[last] = 1.0;
  Eigen::VectorXd pi = lu.solve(rhs);
  require(lu.info() == Eigen::Success, ErrorKind::kNumericalFailure,
          "sparse LU solve failed");
  return {pi.data(), pi.data() + pi.size()};
}

inline std::vector<double> stationary_power(const SparseKernel& k,
                                            const StationaryOptions& opts) {
  std::vector<double> mu(k.num_states(), 1.0 / k.num_states());
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    auto next = k.apply_left(mu);
    double r = 0.0;
    for (std::size_t s = 0; s < next.size(); ++s) r += std::abs(next[s] - mu[s]);
    mu = std::move(next);
    if (r <= opts.tolerance) break;
  }
  return mu;
}

}  // namespace detail

// Unique stationary law of an irreducible kernel. Up to 2^12 states the
// balance equations are solved directly; larger chains use power iteration.
// Fails when the L1 residual exceeds opts.accept_residual.
inline StateDistribution stationary_distribution(
    const SparseKernel& k, const StationaryOptions& opts = {}) {
  std::vector<double> pi = k.num_nodes() <= opts.direct_max_nodes
                               ? detail::stationary_direct(k)
                               : detail::stationary_power(k, opts);
  double total = 0.0;
  for (double& p : pi) {
    if (p < 0.0 && p > -1e-14) p = 0.0;
    require(p >= 0.0, ErrorKind::kNumericalFailure,
            "stationary solve produced a negative probability");
    total += p;
  }
  for (double& p : pi) p /= total;
  const double residual = stationarity_residual(k, pi);
  require(residual <= opts.accept_residual, ErrorKind::kNumericalFailure,
          "stationary residual " + format_double(residual) +
              " exceeds tolerance");
  return StateDistribution(k.num_nodes(), std::move(pi));
}

}  // namespace nlll
