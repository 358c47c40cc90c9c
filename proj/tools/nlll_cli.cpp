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

// Command-line front end: simulate, sweep-k, sweep-hetero, validate.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlll/error.hpp"
#include "nlll/experiments/commands.hpp"
#include "nlll/experiments/config.hpp"
#include "nlll/experiments/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitValidation = 3;

int exit_code_for(nlll::ErrorKind kind) {
  switch (kind) {
    case nlll::ErrorKind::kNumericalFailure:
    case nlll::ErrorKind::kEnumerationInfeasible:
      return kExitNumerical;
    default:
      return kExitConfig;
  }
}

struct RunFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicas;
};

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
  cmd->add_option("--config", flags.config, "Experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", flags.out, "CSV output path (default: run.output or stdout)");
  cmd->add_option("--seed", flags.seed, "Master seed (overrides run.seed)");
  cmd->add_option("--replicas", flags.replicas, "Replica count (overrides run.replicas)")
      ->check(CLI::PositiveNumber);
}

template <class Command>
int run_command(const RunFlags& flags, Command&& command) {
  auto cfg = nlll::experiments::load_config(flags.config);
  if (flags.seed) cfg.master_seed = *flags.seed;
  if (flags.replicas) cfg.replicas = *flags.replicas;
  std::vector<std::string> warnings;
  const auto rows = command(cfg, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  const std::string out = flags.out.empty() ? cfg.output : flags.out;
  if (out.empty() || out == "-") {
    nlll::experiments::write_csv(std::cout, rows);
  } else {
    std::ofstream os(out);
    if (!os) {
      throw nlll::Error(nlll::ErrorKind::kConfiguration, "cannot write '" + out + "'");
    }
    nlll::experiments::write_csv(os, rows);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Log-linear learning over noisy channels: simulation and exact analysis"};
  app.require_subcommand(1);

  RunFlags simulate_flags, sweep_k_flags, sweep_hetero_flags;
  auto* simulate = app.add_subcommand("simulate", "Snapshot/fast/finite-K replicated runs");
  add_run_flags(simulate, simulate_flags);
  auto* sweep_k = app.add_subcommand("sweep-k", "Finite-K sweep with fast reference");
  add_run_flags(sweep_k, sweep_k_flags);
  auto* sweep_hetero =
      app.add_subcommand("sweep-hetero", "Heterogeneous reliability sweep");
  add_run_flags(sweep_hetero, sweep_hetero_flags);

  std::string suite;
  auto* validate = app.add_subcommand("validate", "Run an exact-analysis validation suite");
  std::vector<std::string> names;
  for (const auto& [name, fn] : nlll::experiments::validation_suites()) names.push_back(name);
  names.push_back("all");
  validate->add_option("--suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember(names));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*simulate) {
      return run_command(simulate_flags, [](const auto& cfg, auto* w) {
        return nlll::experiments::cmd_simulate(cfg, w);
      });
    }
    if (*sweep_k) {
      return run_command(sweep_k_flags, [](const auto& cfg, auto* w) {
        return nlll::experiments::cmd_sweep_k(cfg, w);
      });
    }
    if (*sweep_hetero) {
      return run_command(sweep_hetero_flags, [](const auto& cfg, auto* w) {
        return nlll::experiments::cmd_sweep_hetero(cfg, w);
      });
    }
    if (*validate) {
      std::vector<std::string> to_run;
      if (suite == "all") {
        for (const auto& [name, fn] : nlll::experiments::validation_suites()) {
          to_run.push_back(name);
        }
      } else {
        to_run.push_back(suite);
      }
      bool ok = true;
      for (const auto& name : to_run) {
        const auto report = nlll::experiments::run_validation(name);
        report.write(std::cout);
        ok = ok && report.passed();
      }
      return ok ? kExitOk : kExitValidation;
    }
  } catch (const nlll::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return kExitOk;
}
