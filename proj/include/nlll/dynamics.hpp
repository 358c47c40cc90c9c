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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlll/channel.hpp"
#include "nlll/error.hpp"
#include "nlll/game.hpp"
#include "nlll/graph.hpp"
#include "nlll/parallel.hpp"
#include "nlll/rng.hpp"
#include "nlll/stats.hpp"

namespace nlll {

enum class Regime { kSnapshot, kFast, kFiniteK };
enum class Aggregation { kEstimation, kDecoding };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::kSnapshot: return "snapshot";
    case Regime::kFast: return "fast";
    case Regime::kFiniteK: return "finite-k";
  }
  return "?";
}

inline std::string_view to_string(Aggregation a) {
  return a == Aggregation::kEstimation ? "estimation" : "decoding";
}

struct RegimeConfig {
  Regime regime = Regime::kFast;
  std::size_t uses = 1;  // channel uses per neighbor per update (finite-K)
  Aggregation aggregation = Aggregation::kEstimation;
  double beta = 1.0;
  LinkModel link = LinkModel::homogeneous(ChannelSpec::noiseless());

  void validate() const {
    require(beta > 0.0 && std::isfinite(beta), ErrorKind::kInvalidParameter,
            "beta must be positive and finite");
    if (regime == Regime::kFiniteK) {
      require(uses >= 1, ErrorKind::kInvalidParameter, "K must be >= 1");
    }
    if (aggregation == Aggregation::kDecoding) {
      require(regime == Regime::kFiniteK, ErrorKind::kUnsupportedCombination,
              "decoding aggregation applies to the finite-K regime only");
      require(link.kind() == ChannelKind::kBsc,
              ErrorKind::kUnsupportedCombination,
              "decoding aggregation requires BSC links");
      require(uses <= kMaxRepetition, ErrorKind::kInvalidParameter,
              "decoding block length must be <= 64");
    }
  }

  void validate_for(const WeightedGraph& g) const {
    validate();
    link.validate_for(g);
  }
};

// Logit draw: 1 with probability sigma(beta * advantage).
inline int logit_choice(double beta, double advantage, Rng& rng) {
  return rng.uniform() < logistic(beta * advantage) ? 1 : 0;
}

// One noisy observation per neighbor, taken at face value.
template <Profile P>
int snapshot_update(const WeightedGraph& g, const P& x, NodeId i,
                    const LinkModel& link, double beta, Rng& rng) {
  double advantage = 0.0;
  for (const auto& inc : g.neighbors(i)) {
    const auto& e = g.edge(inc.edge);
    const Symbol y = transmit(link.channel_for(e), x[inc.neighbor], rng);
    if (y == Symbol::kOne) {
      advantage += e.weight;
    } else if (y == Symbol::kZero) {
      advantage -= e.weight;
    }
  }
  return logit_choice(beta, advantage, rng);
}

// Channel-averaged payoffs: the advantage is kappa * DeltaPhi_i(x), or the
// effective-weight difference for per-edge links.
template <Profile P>
int fast_update(const WeightedGraph& g, const P& x, NodeId i,
                const LinkModel& link, double beta, Rng& rng) {
  const double advantage =
      link.is_per_edge()
          ? effective_delta_phi(g, i, x)
          : kappa(link.homogeneous_channel()) * delta_phi(g, i, x);
  return logit_choice(beta, advantage, rng);
}

// K channel uses per neighbor. Estimation averages the match indicators;
// decoding majority-votes each neighbor's block and then acts as snapshot.
template <Profile P>
int finite_k_update(const WeightedGraph& g, const P& x, NodeId i,
                    const LinkModel& link, std::size_t uses, double beta,
                    Aggregation aggregation, Rng& rng) {
  require(uses >= 1, ErrorKind::kInvalidParameter, "K must be >= 1");
  if (aggregation == Aggregation::kDecoding) {
    require(link.kind() == ChannelKind::kBsc,
            ErrorKind::kUnsupportedCombination,
            "decoding aggregation requires BSC links");
  }
  const double inv_uses = 1.0 / static_cast<double>(uses);
  double advantage = 0.0;
  for (const auto& inc : g.neighbors(i)) {
    const auto& e = g.edge(inc.edge);
    const ChannelSpec channel = link.channel_for(e);
    const int sent = x[inc.neighbor];
    std::size_t ones = 0, zeros = 0;
    for (std::size_t k = 0; k < uses; ++k) {
      const Symbol y = transmit(channel, sent, rng);
      ones += y == Symbol::kOne;
      zeros += y == Symbol::kZero;
    }
    if (aggregation == Aggregation::kEstimation) {
      advantage += e.weight * (static_cast<double>(ones) -
                               static_cast<double>(zeros)) * inv_uses;
    } else {
      advantage += majority_from_counts(ones, zeros, rng) ? e.weight
                                                          : -e.weight;
    }
  }
  return logit_choice(beta, advantage, rng);
}

template <Profile P>
int update(const WeightedGraph& g, const P& x, NodeId i,
           const RegimeConfig& cfg, Rng& rng) {
  switch (cfg.regime) {
    case Regime::kSnapshot:
      return snapshot_update(g, x, i, cfg.link, cfg.beta, rng);
    case Regime::kFast:
      return fast_update(g, x, i, cfg.link, cfg.beta, rng);
    case Regime::kFiniteK:
      return finite_k_update(g, x, i, cfg.link, cfg.uses, cfg.beta,
                             cfg.aggregation, rng);
  }
  return 0;
}

// Horizons in single-agent updates.
struct Horizons {
  std::uint64_t burn_in = 0;
  std::uint64_t measure = 0;
  std::uint64_t thin = 1;

  // 200 n burn-in, 1000 n measured, one record per expected sweep.
  static Horizons defaults_for(std::size_t n) {
    return {200 * n, 1000 * n, n};
  }
};

enum class InitialCondition { kRandom, kAllZeros, kAllOnes };

struct TrajectoryStats {
  std::vector<double> potentials;  // Phi(x(t)) at each recorded step
  std::vector<StateIndex> states;  // filled only when requested
  ActionProfile final_profile;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;

  double mean_potential() const { return mean_of(potentials); }
};

struct TrajectoryOptions {
  Horizons horizons;
  bool record_states = false;
};

// Asynchronous log-linear learning: each step picks one agent uniformly and
// applies the configured update. Phi is recorded every `thin` steps after
// the burn-in. Node selection, channel noise and the logit draw all come
// from one stream seeded by `seed`; when `initial` is empty the starting
// profile is i.i.d. fair bits drawn from the same stream.
inline TrajectoryStats run_trajectory(const WeightedGraph& g,
                                      const RegimeConfig& cfg,
                                      std::optional<ActionProfile> initial,
                                      const TrajectoryOptions& opts,
                                      std::uint64_t seed) {
  cfg.validate_for(g);
  const std::size_t n = g.num_nodes();
  require(n >= 1, ErrorKind::kInvalidTopology, "empty graph");
  require(opts.horizons.thin >= 1, ErrorKind::kInvalidParameter,
          "thin must be >= 1");
  require(!opts.record_states || n <= kMaxIndexedNodes,
          ErrorKind::kDimension, "state recording needs n <= 63");
  Rng rng(seed);

  ActionProfile x(n);
  if (initial) {
    require(initial->size() == n, ErrorKind::kDimension,
            "initial profile length does not match node count");
    x = *initial;
  } else {
    for (std::size_t i = 0; i < n; ++i) x.set(i, rng.uniform() < 0.5);
  }

  TrajectoryStats out;
  out.seed = seed;
  out.potentials.reserve(opts.horizons.measure / opts.horizons.thin);
  if (opts.record_states) {
    out.states.reserve(opts.horizons.measure / opts.horizons.thin);
  }
  const std::uint64_t total = opts.horizons.burn_in + opts.horizons.measure;
  for (std::uint64_t t = 1; t <= total; ++t) {
    const NodeId i = rng.below(n);
    x.set(i, update(g, x, i, cfg, rng));
    if (t > opts.horizons.burn_in &&
        (t - opts.horizons.burn_in) % opts.horizons.thin == 0) {
      out.potentials.push_back(potential(g, x));
      if (opts.record_states) out.states.push_back(x.index());
    }
  }
  out.steps = total;
  out.final_profile = std::move(x);
  return out;
}

inline TrajectoryStats run_trajectory(const WeightedGraph& g,
                                      const RegimeConfig& cfg,
                                      InitialCondition init,
                                      const Horizons& horizons,
                                      std::uint64_t seed) {
  std::optional<ActionProfile> x0;
  if (init == InitialCondition::kAllZeros) x0 = ActionProfile(g.num_nodes(), 0);
  if (init == InitialCondition::kAllOnes) x0 = ActionProfile(g.num_nodes(), 1);
  return run_trajectory(g, cfg, std::move(x0), {horizons, false}, seed);
}

struct ReplicatedResult {
  std::vector<std::uint64_t> seeds;
  std::vector<double> replica_means;  // time-averaged Phi, in replica order
  std::vector<double> replica_variances;  // variance of Phi along each trajectory
  SampleSummary pooled;
  bool degenerate = false;  // zero spread across replicas
  std::vector<std::string> warnings;
};

// Replica r uses seed derive_seed(master, r).
inline std::vector<std::uint64_t> replica_seeds(std::uint64_t master,
                                                std::size_t replicas) {
  std::vector<std::uint64_t> seeds(replicas);
  for (std::size_t r = 0; r < replicas; ++r) seeds[r] = derive_seed(master, r);
  return seeds;
}

// Independent replicas (possibly concurrent), pooled into a mean and a
// Student-t confidence interval. Statistics depend only on the seeds.
inline ReplicatedResult run_replicated(const WeightedGraph& g,
                                       const RegimeConfig& cfg,
                                       std::span<const std::uint64_t> seeds,
                                       const Horizons& horizons,
                                       InitialCondition init =
                                           InitialCondition::kRandom,
                                       double level = 0.95) {
  require(seeds.size() >= 2, ErrorKind::kInvalidParameter,
          "at least two replicas are needed for a confidence interval");
  require(horizons.measure >= horizons.thin, ErrorKind::kInvalidParameter,
          "measurement horizon records nothing");
  cfg.validate_for(g);
  ReplicatedResult out;
  out.seeds.assign(seeds.begin(), seeds.end());
  out.replica_means.assign(seeds.size(), 0.0);
  out.replica_variances.assign(seeds.size(), 0.0);
  parallel_for(seeds.size(), [&](std::size_t r) {
    const auto traj = run_trajectory(g, cfg, init, horizons, seeds[r]);
    out.replica_means[r] = traj.mean_potential();
    out.replica_variances[r] =
        traj.potentials.size() >= 2 ? sample_variance(traj.potentials) : 0.0;
  });
  out.pooled = summarize(out.replica_means, level);
  if (out.pooled.std_dev == 0.0) {
    out.degenerate = true;
    out.warnings.push_back(
        "replica means are identical; confidence interval has zero width");
  }
  return out;
}

inline ReplicatedResult run_replicated(const WeightedGraph& g,
                                       const RegimeConfig& cfg,
                                       std::size_t replicas,
                                       std::uint64_t master_seed,
                                       const Horizons& horizons,
                                       InitialCondition init =
                                           InitialCondition::kRandom) {
  const auto seeds = replica_seeds(master_seed, replicas);
  return run_replicated(g, cfg, seeds, horizons, init);
}

}  // namespace nlll
