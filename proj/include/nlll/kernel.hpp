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
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nlll/channel.hpp"
#include "nlll/dynamics.hpp"
#include "nlll/error.hpp"
#include "nlll/game.hpp"
#include "nlll/graph.hpp"
#include "nlll/parallel.hpp"

namespace nlll {

// Largest n handled by the exact engine (2^16 states).
inline constexpr std::size_t kMaxExactNodes = 16;

// Largest number of neighbor observation tuples enumerated for one entry.
inline constexpr std::uint64_t kMaxObservationTuples = 1'000'000;

inline std::size_t state_count(std::size_t n) { return std::size_t{1} << n; }

inline void require_exact_size(const WeightedGraph& g) {
  require(g.num_nodes() >= 1 && g.num_nodes() <= kMaxExactNodes,
          ErrorKind::kEnumerationInfeasible,
          "exact engine supports 1 <= n <= 16, got n = " +
              std::to_string(g.num_nodes()));
}

// Row-stochastic kernel on {0,1}^n with single-site moves. Row s holds the n
// flip probabilities P(s, s ^ (1 << i)); the self-loop is the remainder.
class SparseKernel {
 public:
  SparseKernel() = default;
  explicit SparseKernel(std::size_t n)
      : n_(n), flips_(state_count(n) * n, 0.0) {}

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_states() const noexcept { return state_count(n_); }

  double flip(StateIndex s, NodeId i) const { return flips_[s * n_ + i]; }
  void set_flip(StateIndex s, NodeId i, double p) { flips_[s * n_ + i] = p; }

  double self_loop(StateIndex s) const {
    double out = 0.0;
    for (NodeId i = 0; i < n_; ++i) out += flip(s, i);
    return 1.0 - out;
  }

  // P(s, t); zero unless s and t differ in at most one bit.
  double entry(StateIndex s, StateIndex t) const {
    if (s == t) return self_loop(s);
    const StateIndex d = s ^ t;
    if ((d & (d - 1)) != 0) return 0.0;
    return flip(s, static_cast<NodeId>(std::countr_zero(d)));
  }

  // mu P.
  std::vector<double> apply_left(std::span<const double> mu) const {
    require(mu.size() == num_states(), ErrorKind::kDimension,
            "distribution length does not match kernel");
    std::vector<double> out(num_states(), 0.0);
    for (StateIndex s = 0; s < num_states(); ++s) {
      out[s] += mu[s] * self_loop(s);
      for (NodeId i = 0; i < n_; ++i) {
        out[s ^ (StateIndex{1} << i)] += mu[s] * flip(s, i);
      }
    }
    return out;
  }

  double max_abs_difference(const SparseKernel& other) const {
    require(other.n_ == n_, ErrorKind::kDimension, "kernel sizes differ");
    double d = 0.0;
    for (StateIndex s = 0; s < num_states(); ++s) {
      d = std::max(d, std::abs(self_loop(s) - other.self_loop(s)));
      for (NodeId i = 0; i < n_; ++i) {
        d = std::max(d, std::abs(flip(s, i) - other.flip(s, i)));
      }
    }
    return d;
  }

  // Smallest entry over flips and self-loops.
  double min_entry() const {
    double m = std::numeric_limits<double>::infinity();
    for (StateIndex s = 0; s < num_states(); ++s) {
      m = std::min(m, self_loop(s));
      for (NodeId i = 0; i < n_; ++i) m = std::min(m, flip(s, i));
    }
    return m;
  }

  // "from to value" lines for every nonzero entry, 17 significant digits.
  void write(std::ostream& os) const {
    for (StateIndex s = 0; s < num_states(); ++s) {
      os << s << ' ' << s << ' ' << format_double(self_loop(s))
         << '\n';
      for (NodeId i = 0; i < n_; ++i) {
        os << s << ' ' << (s ^ (StateIndex{1} << i)) << ' '
           << format_double(flip(s, i)) << '\n';
      }
    }
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> flips_;
};

// Contribution of one neighbor to the advantage, with its probability.
struct Outcome {
  double advantage;
  double prob;
};

// Joint law of the advantage over all neighbors of one node, expanded as a
// list of outcome tuples.
struct AdvantageLaw {
  std::vector<Outcome> terms;

  // E[sigma(sign * beta * advantage)], summed in descending probability.
  // The centered term sigma(t) - 1/2 = tanh(t/2)/2 is accumulated so that
  // beta = 0 gives exactly 1/2 and small-beta entries keep their precision.
  double expected_logistic(double beta, double sign) const {
    std::vector<Outcome> sorted = terms;
    std::sort(sorted.begin(), sorted.end(),
              [](const Outcome& a, const Outcome& b) { return a.prob > b.prob; });
    double acc = 0.0;
    for (const auto& t : sorted) {
      acc += t.prob * 0.5 * std::tanh(0.5 * sign * beta * t.advantage);
    }
    return 0.5 + acc;
  }

  double mean() const {
    double m = 0.0;
    for (const auto& t : terms) m += t.prob * t.advantage;
    return m;
  }
};

namespace detail {

// Product of per-neighbor laws. `declared_sizes` carries the alphabet size
// used for the feasibility cap, which may exceed the nonzero support.
inline AdvantageLaw combine_neighbor_laws(
    const std::vector<std::vector<Outcome>>& per_neighbor,
    const std::vector<std::uint64_t>& declared_sizes, NodeId node) {
  std::uint64_t tuples = 1;
  for (std::uint64_t s : declared_sizes) {
    if (s != 0 && tuples > kMaxObservationTuples / s) {
      tuples = kMaxObservationTuples + 1;
      break;
    }
    tuples *= s;
  }
  require(tuples <= kMaxObservationTuples, ErrorKind::kEnumerationInfeasible,
          "node " + std::to_string(node) + " has too many observation tuples " +
              "(degree " + std::to_string(per_neighbor.size()) + ")");
  AdvantageLaw law;
  law.terms.push_back({0.0, 1.0});
  for (const auto& nb : per_neighbor) {
    std::vector<Outcome> next;
    next.reserve(law.terms.size() * nb.size());
    for (const auto& t : law.terms) {
      for (const auto& o : nb) {
        if (o.prob == 0.0) continue;
        next.push_back({t.advantage + o.advantage, t.prob * o.prob});
      }
    }
    law.terms = std::move(next);
  }
  return law;
}

inline std::vector<double> binomial_pmf(std::size_t trials, double success) {
  std::vector<double> pmf(trials + 1);
  double coeff = 1.0;
  for (std::size_t k = 0; k <= trials; ++k) {
    pmf[k] = coeff * std::pow(success, static_cast<double>(k)) *
             std::pow(1.0 - success, static_cast<double>(trials - k));
    coeff = coeff * static_cast<double>(trials - k) / static_cast<double>(k + 1);
  }
  return pmf;
}

// Single-use observation: received 1 adds +v, received 0 adds -v, erasure 0.
inline std::vector<Outcome> single_use_law(const ChannelSpec& c, int sent,
                                           double weight) {
  return {{weight, symbol_probability(c, sent, Symbol::kOne)},
          {-weight, symbol_probability(c, sent, Symbol::kZero)},
          {0.0, symbol_probability(c, sent, Symbol::kErasure)}};
}

// K uses, estimation aggregation, summarized by counts. Under BSC the count
// of received ones is Binomial(K, a); under BEC received symbols are never
// the opposite bit, so the count of unerased uses is Binomial(K, 1 - eps).
inline std::vector<Outcome> repeated_use_law(const ChannelSpec& c, int sent,
                                             double weight, std::size_t uses) {
  const double k = static_cast<double>(uses);
  std::vector<Outcome> law;
  law.reserve(uses + 1);
  if (c.kind() == ChannelKind::kBsc) {
    const double a = symbol_probability(c, sent, Symbol::kOne);
    const auto pmf = binomial_pmf(uses, a);
    for (std::size_t ones = 0; ones <= uses; ++ones) {
      law.push_back({weight * (2.0 * static_cast<double>(ones) - k) / k,
                     pmf[ones]});
    }
  } else {
    const double sign = sent ? 1.0 : -1.0;
    const auto pmf = binomial_pmf(uses, 1.0 - c.parameter());
    for (std::size_t seen = 0; seen <= uses; ++seen) {
      law.push_back({sign * weight * static_cast<double>(seen) / k, pmf[seen]});
    }
  }
  return law;
}

inline std::uint64_t declared_alphabet(const ChannelSpec& c) {
  return c.kind() == ChannelKind::kBsc ? 2 : 3;
}

}  // namespace detail

// Law of the snapshot advantage at node i in state s.
inline AdvantageLaw snapshot_advantage_law(const WeightedGraph& g,
                                           const LinkModel& link, StateIndex s,
                                           NodeId i) {
  std::vector<std::vector<Outcome>> laws;
  std::vector<std::uint64_t> sizes;
  for (const auto& inc : g.neighbors(i)) {
    const auto& e = g.edge(inc.edge);
    const ChannelSpec c = link.channel_for(e);
    laws.push_back(detail::single_use_law(c, (s >> inc.neighbor) & 1U, e.weight));
    sizes.push_back(detail::declared_alphabet(c));
  }
  return detail::combine_neighbor_laws(laws, sizes, i);
}

// Law of the K-use estimation advantage at node i in state s.
inline AdvantageLaw finite_k_advantage_law(const WeightedGraph& g,
                                           const LinkModel& link,
                                           std::size_t uses, StateIndex s,
                                           NodeId i) {
  require(uses >= 1, ErrorKind::kInvalidParameter, "K must be >= 1");
  std::vector<std::vector<Outcome>> laws;
  std::vector<std::uint64_t> sizes;
  for (const auto& inc : g.neighbors(i)) {
    const auto& e = g.edge(inc.edge);
    laws.push_back(detail::repeated_use_law(link.channel_for(e),
                                            (s >> inc.neighbor) & 1U, e.weight,
                                            uses));
    sizes.push_back(uses + 1);
  }
  return detail::combine_neighbor_laws(laws, sizes, i);
}

// Law of the advantage after majority-decoding K uses per neighbor: each
// neighbor is seen through an effective BSC(p_K).
inline AdvantageLaw decoding_advantage_law(const WeightedGraph& g,
                                           const LinkModel& link,
                                           std::size_t uses, StateIndex s,
                                           NodeId i) {
  require(link.kind() == ChannelKind::kBsc, ErrorKind::kUnsupportedCombination,
          "decoding aggregation requires BSC links");
  std::vector<std::vector<Outcome>> laws;
  std::vector<std::uint64_t> sizes;
  for (const auto& inc : g.neighbors(i)) {
    const auto& e = g.edge(inc.edge);
    const auto decoded = ChannelSpec::bsc(
        repetition_error(uses, link.channel_for(e).parameter()));
    laws.push_back(
        detail::single_use_law(decoded, (s >> inc.neighbor) & 1U, e.weight));
    sizes.push_back(2);
  }
  return detail::combine_neighbor_laws(laws, sizes, i);
}

// Channel-averaged advantage: kappa * DeltaPhi_i, or the effective-weight
// difference under per-edge links.
inline double fast_advantage(const WeightedGraph& g, const LinkModel& link,
                             StateIndex s, NodeId i) {
  const IndexedProfile x{s, g.num_nodes()};
  return link.is_per_edge()
             ? effective_delta_phi(g, i, x)
             : kappa(link.homogeneous_channel()) * delta_phi(g, i, x);
}

// Probabilities that the selected agent i chooses 0 and 1 in state s.
struct ChoiceProbabilities {
  double zero;
  double one;
};

inline ChoiceProbabilities exact_choice_probabilities(const WeightedGraph& g,
                                                      const RegimeConfig& cfg,
                                                      StateIndex s, NodeId i) {
  const double beta = cfg.beta;
  auto from_law = [&](const AdvantageLaw& law) {
    return ChoiceProbabilities{law.expected_logistic(beta, -1.0),
                               law.expected_logistic(beta, 1.0)};
  };
  switch (cfg.regime) {
    case Regime::kSnapshot:
      return from_law(snapshot_advantage_law(g, cfg.link, s, i));
    case Regime::kFast: {
      const double a = fast_advantage(g, cfg.link, s, i);
      return {logistic(-beta * a), logistic(beta * a)};
    }
    case Regime::kFiniteK:
      if (cfg.aggregation == Aggregation::kDecoding) {
        return from_law(decoding_advantage_law(g, cfg.link, cfg.uses, s, i));
      }
      return from_law(finite_k_advantage_law(g, cfg.link, cfg.uses, s, i));
  }
  return {0.5, 0.5};
}

// Exact kernel of the configured dynamics: P(s, s^(i)) is (1/n) times the
// probability that agent i, once selected, switches its action.
inline SparseKernel build_kernel(const WeightedGraph& g,
                                 const RegimeConfig& cfg) {
  require_exact_size(g);
  cfg.validate_for(g);
  const std::size_t n = g.num_nodes();
  SparseKernel k(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  parallel_for(state_count(n), [&](std::size_t s) {
    for (NodeId i = 0; i < n; ++i) {
      const auto c = exact_choice_probabilities(g, cfg, s, i);
      const bool current = (s >> i) & 1U;
      k.set_flip(s, i, inv_n * (current ? c.zero : c.one));
    }
  });
  return k;
}

inline SparseKernel snapshot_kernel(const WeightedGraph& g,
                                    const LinkModel& link, double beta) {
  return build_kernel(g, {Regime::kSnapshot, 1, Aggregation::kEstimation,
                          beta, link});
}

inline SparseKernel fast_kernel(const WeightedGraph& g, const LinkModel& link,
                                double beta) {
  return build_kernel(g, {Regime::kFast, 1, Aggregation::kEstimation, beta,
                          link});
}

inline SparseKernel finite_k_kernel(const WeightedGraph& g,
                                    const LinkModel& link, std::size_t uses,
                                    double beta) {
  return build_kernel(g, {Regime::kFiniteK, uses, Aggregation::kEstimation,
                          beta, link});
}

inline SparseKernel decoding_kernel(const WeightedGraph& g,
                                    const LinkModel& link, std::size_t uses,
                                    double beta) {
  return build_kernel(g, {Regime::kFiniteK, uses, Aggregation::kDecoding,
                          beta, link});
}

// Homogeneous-channel shorthands.
inline SparseKernel snapshot_kernel(const WeightedGraph& g,
                                    const ChannelSpec& c, double beta) {
  return snapshot_kernel(g, LinkModel::homogeneous(c), beta);
}
inline SparseKernel fast_kernel(const WeightedGraph& g, const ChannelSpec& c,
                                double beta) {
  return fast_kernel(g, LinkModel::homogeneous(c), beta);
}
inline SparseKernel finite_k_kernel(const WeightedGraph& g,
                                    const ChannelSpec& c, std::size_t uses,
                                    double beta) {
  return finite_k_kernel(g, LinkModel::homogeneous(c), uses, beta);
}

}  // namespace nlll
