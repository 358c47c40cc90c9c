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
#include <ostream>
#include <string>
#include <vector>

#include "nlll/channel.hpp"
#include "nlll/dynamics.hpp"
#include "nlll/error.hpp"
#include "nlll/experiments/config.hpp"
#include "nlll/graph.hpp"

namespace nlll::experiments {

inline constexpr int kCsvSchemaVersion = 1;

struct ResultRow {
  std::string experiment_id;
  std::string topology;
  std::string channel;
  std::string param;
  std::string regime;
  std::string uses;  // "1" snapshot, "inf" fast, K otherwise
  double beta = 0.0;
  std::string seed;  // replica seed, or "pooled"
  std::optional<double> mean_phi;
  std::optional<double> pooled_mean;
  std::optional<double> ci_half_width;
};

inline const char* kCsvHeader =
    "schema_version,experiment_id,topology,channel,param,regime,K,beta,seed,"
    "mean_phi,pooled_mean,ci_half_width";

inline void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << kCsvSchemaVersion << ',' << r.experiment_id << ',' << r.topology
       << ',' << r.channel << ',' << r.param << ',' << r.regime << ','
       << r.uses << ',' << format_double(r.beta) << ',' << r.seed
       << ',' << opt(r.mean_phi) << ',' << opt(r.pooled_mean) << ','
       << opt(r.ci_half_width) << '\n';
  }
}

namespace detail {

inline std::string regime_label(const RegimeConfig& cfg) {
  if (cfg.regime != Regime::kFiniteK) return std::string(to_string(cfg.regime));
  return "finite-k-" + std::string(to_string(cfg.aggregation));
}

inline std::string uses_label(const RegimeConfig& cfg) {
  switch (cfg.regime) {
    case Regime::kSnapshot: return "1";
    case Regime::kFast: return "inf";
    case Regime::kFiniteK: return std::to_string(cfg.uses);
  }
  return "";
}

struct Cell {
  std::string experiment_id;
  std::string topology;
  std::string param;
  RegimeConfig regime;
};

// Runs the replicas of one (graph, regime) cell and appends one row per
// replica plus the pooled row.
inline void run_cell(const WeightedGraph& g, const Cell& cell,
                     const ExperimentConfig& cfg, std::vector<ResultRow>& out,
                     std::vector<std::string>* warnings) {
  const Horizons h = cfg.horizons_for(g.num_nodes());
  ResultRow base;
  base.experiment_id = cell.experiment_id;
  base.topology = cell.topology;
  base.channel = std::string(to_string(cell.regime.link.kind()));
  base.param = cell.param;
  base.regime = regime_label(cell.regime);
  base.uses = uses_label(cell.regime);
  base.beta = cell.regime.beta;

  const auto seeds = replica_seeds(cfg.master_seed, cfg.replicas);
  ResultRow pooled = base;
  pooled.seed = "pooled";
  if (cfg.replicas == 1) {
    const double m =
        run_trajectory(g, cell.regime, cfg.init, h, seeds[0]).mean_potential();
    ResultRow r = base;
    r.seed = std::to_string(seeds[0]);
    r.mean_phi = m;
    out.push_back(r);
    pooled.pooled_mean = m;
    out.push_back(pooled);
    return;
  }
  const auto res = run_replicated(g, cell.regime, seeds, h, cfg.init);
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    ResultRow r = base;
    r.seed = std::to_string(seeds[k]);
    r.mean_phi = res.replica_means[k];
    out.push_back(r);
  }
  pooled.pooled_mean = res.pooled.mean;
  pooled.ci_half_width = res.pooled.ci_half_width;
  out.push_back(pooled);
  if (warnings) {
    for (const auto& w : res.warnings) warnings->push_back(cell.experiment_id + ": " + w);
  }
}

inline std::string beta_tag(double beta) { return "beta=" + format_double(beta); }

}  // namespace detail

// Link model for a graph read from a file: per-edge when the file carries
// non-unit reliabilities (the channel parameter must then be zero).
inline LinkModel link_for(const WeightedGraph& g, const ExperimentConfig& cfg) {
  if (g.is_heterogeneous()) {
    require(cfg.channel_param == 0.0, ErrorKind::kConfiguration,
            "graph carries per-edge reliabilities; channel.param must be 0 to "
            "avoid attenuating twice");
    return LinkModel::per_edge(cfg.channel_kind);
  }
  return LinkModel::homogeneous(ChannelSpec(cfg.channel_kind, cfg.channel_param));
}

// One row per replica plus a pooled row for every (beta, regime) pair.
inline std::vector<ResultRow> cmd_simulate(const ExperimentConfig& cfg,
                                           std::vector<std::string>* warnings = nullptr) {
  const auto g = cfg.topology.build();
  const LinkModel link = link_for(g, cfg);
  const std::string param =
      link.is_per_edge() ? "per-edge" : format_double(cfg.channel_param);
  std::vector<ResultRow> rows;
  for (double beta : cfg.betas) {
    for (Regime regime : cfg.regimes) {
      RegimeConfig rc{regime, cfg.uses, cfg.aggregation, beta, link};
      if (regime != Regime::kFiniteK) rc.aggregation = Aggregation::kEstimation;
      rc.validate_for(g);
      const std::string id = "simulate/" + detail::regime_label(rc) +
                             (regime == Regime::kFiniteK ? "/K=" + std::to_string(rc.uses) : "") +
                             "/" + detail::beta_tag(beta);
      detail::run_cell(g, {id, cfg.topology.describe(), param, rc}, cfg, rows, warnings);
    }
  }
  return rows;
}

// Finite-K cells for every K in the sweep list, followed by the fast
// reference cell, for each beta.
inline std::vector<ResultRow> cmd_sweep_k(const ExperimentConfig& cfg,
                                          std::vector<std::string>* warnings = nullptr) {
  require(!cfg.k_list.empty(), ErrorKind::kConfiguration,
          "sweep-k needs a non-empty sweep.k list");
  const auto g = cfg.topology.build();
  const LinkModel link = link_for(g, cfg);
  const std::string param =
      link.is_per_edge() ? "per-edge" : format_double(cfg.channel_param);
  std::vector<ResultRow> rows;
  for (double beta : cfg.betas) {
    for (std::size_t k : cfg.k_list) {
      RegimeConfig rc{Regime::kFiniteK, k, cfg.aggregation, beta, link};
      rc.validate_for(g);
      const std::string id = "sweep-k/" + detail::regime_label(rc) + "/K=" +
                             std::to_string(k) + "/" + detail::beta_tag(beta);
      detail::run_cell(g, {id, cfg.topology.describe(), param, rc}, cfg, rows, warnings);
    }
    RegimeConfig fast{Regime::kFast, 1, Aggregation::kEstimation, beta, link};
    detail::run_cell(g, {"sweep-k/fast/" + detail::beta_tag(beta),
                         cfg.topology.describe(), param, fast},
                     cfg, rows, warnings);
  }
  return rows;
}

// For every reliability range: draw per-edge reliabilities, then run the
// configured regimes with per-edge channels.
inline std::vector<ResultRow> cmd_sweep_hetero(const ExperimentConfig& cfg,
                                               std::vector<std::string>* warnings = nullptr) {
  require(!cfg.kappa_ranges.empty(), ErrorKind::kConfiguration,
          "sweep-hetero needs a non-empty hetero.ranges list");
  require(cfg.channel_param == 0.0, ErrorKind::kConfiguration,
          "sweep-hetero draws per-edge reliabilities; channel.param must be 0");
  const auto base = cfg.topology.build();
  require(!base.is_heterogeneous(), ErrorKind::kConfiguration,
          "sweep-hetero needs a graph without per-edge reliabilities");
  const LinkModel link = LinkModel::per_edge(cfg.channel_kind);
  std::vector<ResultRow> rows;
  for (const auto& range : cfg.kappa_ranges) {
    const auto g = assign_heterogeneous_reliabilities(base, range.min, range.max,
                                                      cfg.reliability_seed);
    const std::string param =
        format_double(range.min) + ":" + format_double(range.max);
    for (double beta : cfg.betas) {
      for (Regime regime : cfg.regimes) {
        RegimeConfig rc{regime, cfg.uses, cfg.aggregation, beta, link};
        if (regime != Regime::kFiniteK) rc.aggregation = Aggregation::kEstimation;
        rc.validate_for(g);
        const std::string id = "sweep-hetero/kappa=" + param + "/" +
                               detail::regime_label(rc) + "/" + detail::beta_tag(beta);
        detail::run_cell(g, {id, cfg.topology.describe(), param, rc}, cfg, rows, warnings);
      }
    }
  }
  return rows;
}

}  // namespace nlll::experiments
