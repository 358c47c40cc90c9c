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

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "nlll/error.hpp"
#include "nlll/graph.hpp"
#include "nlll/rng.hpp"

namespace nlll {

enum class ChannelKind { kBsc, kBec };

inline std::string_view to_string(ChannelKind kind) {
  return kind == ChannelKind::kBsc ? "bsc" : "bec";
}

// Received alphabet. Erasure is a value of its own so that the indicator
// 1{y = b} is simply false for it.
enum class Symbol : std::uint8_t { kZero = 0, kOne = 1, kErasure = 2 };

inline Symbol symbol_of(int bit) { return bit ? Symbol::kOne : Symbol::kZero; }
inline bool matches(Symbol y, int b) { return y == symbol_of(b); }

// Memoryless binary-input observation channel: BSC(p) with 0 <= p < 1/2 or
// BEC(eps) with 0 <= eps < 1.
class ChannelSpec {
 public:
  static ChannelSpec bsc(double p) { return ChannelSpec(ChannelKind::kBsc, p); }
  static ChannelSpec bec(double eps) {
    return ChannelSpec(ChannelKind::kBec, eps);
  }
  static ChannelSpec noiseless() { return bsc(0.0); }

  ChannelSpec(ChannelKind kind, double parameter)
      : kind_(kind), parameter_(parameter) {
    if (kind == ChannelKind::kBsc) {
      require(parameter >= 0.0 && parameter < 0.5,
              ErrorKind::kInvalidParameter, "BSC crossover must be in [0,1/2)");
    } else {
      require(parameter >= 0.0 && parameter < 1.0,
              ErrorKind::kInvalidParameter, "BEC erasure must be in [0,1)");
    }
  }

  ChannelKind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return parameter_; }
  bool is_noiseless() const noexcept { return parameter_ == 0.0; }

  friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;

 private:
  ChannelKind kind_;
  double parameter_;
};

// Attenuation of the mean advantage: 1 - 2p (BSC) or 1 - eps (BEC).
inline double kappa(const ChannelSpec& c) {
  return c.kind() == ChannelKind::kBsc ? 1.0 - 2.0 * c.parameter()
                                       : 1.0 - c.parameter();
}

// E[1{y = b} | x_j] = offset + kappa * 1{x_j = b}.
struct AffineMean {
  double offset;
  double kappa;
};

inline AffineMean affine_mean_coeffs(const ChannelSpec& c) {
  if (c.kind() == ChannelKind::kBsc) return {c.parameter(), kappa(c)};
  return {0.0, kappa(c)};
}

// Probability of receiving symbol y when bit is sent.
inline double symbol_probability(const ChannelSpec& c, int bit, Symbol y) {
  const double a = c.parameter();
  if (c.kind() == ChannelKind::kBsc) {
    if (y == Symbol::kErasure) return 0.0;
    return matches(y, bit) ? 1.0 - a : a;
  }
  if (y == Symbol::kErasure) return a;
  return matches(y, bit) ? 1.0 - a : 0.0;
}

inline Symbol transmit(const ChannelSpec& c, int bit, Rng& rng) {
  const bool event = rng.uniform() < c.parameter();
  if (c.kind() == ChannelKind::kBsc) return symbol_of(event ? 1 - bit : bit);
  return event ? Symbol::kErasure : symbol_of(bit);
}

struct MatchFrequencies {
  double zero = 0.0;
  double one = 0.0;

  double of(int b) const { return b ? one : zero; }
};

// Empirical match frequencies over K i.i.d. uses of the channel.
inline MatchFrequencies empirical_match_freq(const ChannelSpec& c, int bit,
                                             std::size_t uses, Rng& rng) {
  require(uses >= 1, ErrorKind::kInvalidParameter, "K must be >= 1");
  std::size_t zeros = 0, ones = 0;
  for (std::size_t k = 0; k < uses; ++k) {
    const Symbol y = transmit(c, bit, rng);
    zeros += y == Symbol::kZero;
    ones += y == Symbol::kOne;
  }
  const double k = static_cast<double>(uses);
  const double one = static_cast<double>(ones) / k;
  // Under BSC the complement keeps q(0) + q(1) == 1 exactly in floating point.
  if (c.kind() == ChannelKind::kBsc) return {1.0 - one, one};
  return {static_cast<double>(zeros) / k, one};
}

inline constexpr std::size_t kMaxRepetition = 64;

// Error probability of majority decoding K uses of BSC(p). Even-K ties are
// broken by a fair coin, so half the tie mass is added to the upper tail.
inline double repetition_error(std::size_t uses, double p) {
  require(uses >= 1 && uses <= kMaxRepetition, ErrorKind::kInvalidParameter,
          "repetition length must be in [1,64]");
  require(p >= 0.0 && p < 0.5, ErrorKind::kInvalidParameter,
          "BSC crossover must be in [0,1/2)");
  const double k = static_cast<double>(uses);
  const double ratio = p / (1.0 - p);
  double term = std::pow(1.0 - p, k);  // m = 0
  double tail = 0.0;
  for (std::size_t m = 0; m <= uses; ++m) {
    if (2 * m > uses) {
      tail += term;
    } else if (2 * m == uses) {
      tail += 0.5 * term;
    }
    term *= (k - static_cast<double>(m)) / static_cast<double>(m + 1) * ratio;
  }
  return tail;
}

inline double effective_kappa_after_decoding(std::size_t uses, double p) {
  return 1.0 - 2.0 * repetition_error(uses, p);
}

// Majority vote over a block summarized by its counts; ties use a fair coin.
inline int majority_from_counts(std::size_t ones, std::size_t zeros, Rng& rng) {
  if (ones != zeros) return ones > zeros ? 1 : 0;
  return rng.uniform() < 0.5 ? 1 : 0;
}

inline int majority_decode(std::span<const Symbol> symbols, Rng& rng) {
  require(!symbols.empty(), ErrorKind::kInvalidParameter,
          "cannot decode an empty block");
  std::size_t ones = 0;
  for (Symbol y : symbols) {
    require(y != Symbol::kErasure, ErrorKind::kInvalidInput,
            "majority decoding is defined for BSC symbols only");
    ones += y == Symbol::kOne;
  }
  return majority_from_counts(ones, symbols.size() - ones, rng);
}

// How each link is modelled: one channel for every edge, or a per-edge
// channel of the given kind whose parameter follows from the edge's stored
// reliability (p = (1 - kappa)/2 or eps = 1 - kappa).
class LinkModel {
 public:
  static LinkModel homogeneous(const ChannelSpec& c) { return LinkModel(c); }
  static LinkModel per_edge(ChannelKind kind) {
    LinkModel m(ChannelSpec(kind, 0.0));
    m.per_edge_ = true;
    return m;
  }

  bool is_per_edge() const noexcept { return per_edge_; }
  ChannelKind kind() const noexcept { return base_.kind(); }
  const ChannelSpec& homogeneous_channel() const noexcept { return base_; }

  // Reliability applied to edge e.
  double edge_kappa(const Edge& e) const {
    return per_edge_ ? e.kappa : kappa(base_);
  }

  ChannelSpec channel_for(const Edge& e) const {
    if (!per_edge_) return base_;
    if (base_.kind() == ChannelKind::kBsc) {
      return ChannelSpec::bsc(0.5 * (1.0 - e.kappa));
    }
    return ChannelSpec::bec(1.0 - e.kappa);
  }

  // Rejects combinations that would attenuate twice or not at all.
  void validate_for(const WeightedGraph& g) const {
    if (per_edge_) {
      require(g.has_reliabilities(), ErrorKind::kConfiguration,
              "per-edge link model needs a graph with reliabilities");
    } else {
      require(!g.is_heterogeneous(), ErrorKind::kConfiguration,
              "graph carries per-edge reliabilities; use the per-edge link "
              "model instead of a homogeneous channel");
    }
  }

  std::string describe() const {
    if (per_edge_) return std::string(to_string(kind())) + "-per-edge";
    return std::string(to_string(kind())) + "(" +
           format_double(base_.parameter()) + ")";
  }

 private:
  explicit LinkModel(const ChannelSpec& c) : base_(c) {}

  ChannelSpec base_;
  bool per_edge_ = false;
};

}  // namespace nlll
