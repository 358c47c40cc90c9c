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
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nlll/channel.hpp"
#include "nlll/dynamics.hpp"
#include "nlll/error.hpp"
#include "nlll/graph.hpp"

namespace nlll::experiments {

// Flat "key = value" text grouped under "[section]" headers. '#' starts a
// comment. Keys are addressed as "section.key".
class KeyValueFile {
 public:
  static KeyValueFile parse(std::istream& is) {
    KeyValueFile out;
    std::string raw, section;
    std::size_t line_no = 0;
    while (std::getline(is, raw)) {
      ++line_no;
      std::string line = trim(raw.substr(0, raw.find('#')));
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') error_at(line_no, "unterminated section header");
        section = trim(line.substr(1, line.size() - 2));
        if (section.empty()) error_at(line_no, "empty section name");
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) error_at(line_no, "expected 'key = value'");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) error_at(line_no, "empty key");
      const std::string full = section.empty() ? key : section + "." + key;
      if (out.values_.count(full)) error_at(line_no, "duplicate key '" + full + "'");
      out.values_[full] = {value, line_no};
    }
    return out;
  }

  static KeyValueFile parse(const std::string& text) {
    std::istringstream is(text);
    return parse(is);
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::optional<std::string> get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    used_[key] = true;
    return it->second.first;
  }

  std::string require_string(const std::string& key) const {
    auto v = get(key);
    if (!v) fail(ErrorKind::kParse, "missing required field '" + key + "'");
    return *v;
  }

  double get_double(const std::string& key, std::optional<double> fallback = {}) const {
    const auto v = get(key);
    if (!v) {
      if (fallback) return *fallback;
      fail(ErrorKind::kParse, "missing required field '" + key + "'");
    }
    return to_double(key, *v);
  }

  std::uint64_t get_uint(const std::string& key,
                         std::optional<std::uint64_t> fallback = {}) const {
    const auto v = get(key);
    if (!v) {
      if (fallback) return *fallback;
      fail(ErrorKind::kParse, "missing required field '" + key + "'");
    }
    return to_uint(key, *v);
  }

  std::vector<double> get_double_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(require_string(key))) {
      out.push_back(to_double(key, item));
    }
    return out;
  }

  std::vector<std::uint64_t> get_uint_list(const std::string& key) const {
    std::vector<std::uint64_t> out;
    for (const auto& item : split_list(require_string(key))) {
      out.push_back(to_uint(key, item));
    }
    return out;
  }

  std::vector<std::string> get_list(const std::string& key) const {
    return split_list(require_string(key));
  }

  // Keys present in the file but never read.
  std::vector<std::string> unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_) {
      if (!used_.count(k)) out.push_back(k + " (line " + std::to_string(v.second) + ")");
    }
    return out;
  }

  std::size_t line_of(const std::string& key) const {
    const auto it = values_.find(key);
    return it == values_.end() ? 0 : it->second.second;
  }

 private:
  [[noreturn]] static void error_at(std::size_t line, const std::string& what) {
    fail(ErrorKind::kParse, "config line " + std::to_string(line) + ": " + what);
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  static std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }

  double to_double(const std::string& key, const std::string& text) const {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != text.size()) {
      error_at(line_of(key), "field '" + key + "' expects a number, got '" + text + "'");
    }
    return v;
  }

  std::uint64_t to_uint(const std::string& key, const std::string& text) const {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      if (!text.empty() && text.front() != '-') v = std::stoull(text, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != text.size()) {
      error_at(line_of(key),
               "field '" + key + "' expects a nonnegative integer, got '" + text + "'");
    }
    return v;
  }

  std::map<std::string, std::pair<std::string, std::size_t>> values_;
  mutable std::map<std::string, bool> used_;
};

struct TopologySpec {
  std::string kind = "ring";  // ring | grid | er | star | file
  std::size_t n = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double q = 0.0;
  std::uint64_t seed = 0;
  std::string path;

  WeightedGraph build() const;
  std::string describe() const;
};

struct ReliabilityRange {
  double min = 1.0;
  double max = 1.0;
};

struct ExperimentConfig {
  TopologySpec topology;
  ChannelKind channel_kind = ChannelKind::kBsc;
  double channel_param = 0.0;
  std::vector<Regime> regimes{Regime::kSnapshot, Regime::kFast};
  Aggregation aggregation = Aggregation::kEstimation;
  std::size_t uses = 1;
  std::vector<double> betas{2.0};
  std::size_t replicas = 25;
  std::optional<Horizons> horizons;  // defaults depend on n
  InitialCondition init = InitialCondition::kRandom;
  std::uint64_t master_seed = 1;
  std::vector<std::size_t> k_list;             // sweep-k
  std::vector<ReliabilityRange> kappa_ranges;  // sweep-hetero
  std::uint64_t reliability_seed = 0;
  std::string output;

  Horizons horizons_for(std::size_t n) const {
    return horizons ? *horizons : Horizons::defaults_for(n);
  }
};

inline WeightedGraph TopologySpec::build() const {
  if (kind == "ring") return ring(n);
  if (kind == "grid") return grid(rows, cols);
  if (kind == "er") return erdos_renyi(n, q, seed);
  if (kind == "star") return star(n);
  if (kind == "file") {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::kConfiguration,
            "cannot open graph file '" + path + "'");
    return read_edge_list(in);
  }
  fail(ErrorKind::kConfiguration, "unknown topology kind '" + kind + "'");
}

inline std::string TopologySpec::describe() const {
  if (kind == "ring") return "ring(" + std::to_string(n) + ")";
  if (kind == "grid") {
    return "grid(" + std::to_string(rows) + "x" + std::to_string(cols) + ")";
  }
  if (kind == "er") {
    return "er(" + std::to_string(n) + ";" + format_double(q) +
           ";seed=" + std::to_string(seed) + ")";
  }
  if (kind == "star") return "star(" + std::to_string(n) + ")";
  return "file(" + path + ")";
}

inline Regime parse_regime(const std::string& s) {
  if (s == "snapshot") return Regime::kSnapshot;
  if (s == "fast") return Regime::kFast;
  if (s == "finite-k" || s == "finitek") return Regime::kFiniteK;
  fail(ErrorKind::kParse, "unknown regime '" + s + "'");
}

inline ExperimentConfig parse_config(const KeyValueFile& kv) {
  ExperimentConfig c;
  auto& t = c.topology;
  t.kind = kv.require_string("topology.kind");
  if (t.kind == "erdos_renyi" || t.kind == "erdos-renyi") t.kind = "er";
  if (t.kind == "ring" || t.kind == "star" || t.kind == "er") {
    t.n = kv.get_uint("topology.n");
  }
  if (t.kind == "grid") {
    t.rows = kv.get_uint("topology.rows");
    t.cols = kv.get_uint("topology.cols");
  }
  if (t.kind == "er") {
    t.q = kv.get_double("topology.q");
    t.seed = kv.get_uint("topology.seed", 0);
  }
  if (t.kind == "file") t.path = kv.require_string("topology.path");

  const std::string ck = kv.get("channel.kind").value_or("bsc");
  if (ck == "bsc") {
    c.channel_kind = ChannelKind::kBsc;
  } else if (ck == "bec") {
    c.channel_kind = ChannelKind::kBec;
  } else {
    fail(ErrorKind::kParse, "config line " + std::to_string(kv.line_of("channel.kind")) +
                                ": channel kind must be bsc or bec");
  }
  c.channel_param = kv.get_double("channel.param", 0.0);

  if (kv.has("regime.regimes")) {
    c.regimes.clear();
    for (const auto& r : kv.get_list("regime.regimes")) c.regimes.push_back(parse_regime(r));
  }
  if (const auto agg = kv.get("regime.aggregation")) {
    if (*agg == "estimation") {
      c.aggregation = Aggregation::kEstimation;
    } else if (*agg == "decoding") {
      c.aggregation = Aggregation::kDecoding;
    } else {
      fail(ErrorKind::kParse, "config line " + std::to_string(kv.line_of("regime.aggregation")) +
                                  ": aggregation must be estimation or decoding");
    }
  }
  c.uses = kv.get_uint("regime.k", 1);
  if (kv.has("regime.beta")) c.betas = kv.get_double_list("regime.beta");

  c.replicas = kv.get_uint("run.replicas", 25);
  c.master_seed = kv.get_uint("run.seed", 1);
  if (kv.has("run.burn_in") || kv.has("run.measure") || kv.has("run.thin")) {
    Horizons h;
    h.burn_in = kv.get_uint("run.burn_in");
    h.measure = kv.get_uint("run.measure");
    h.thin = kv.get_uint("run.thin", 1);
    c.horizons = h;
  }
  if (const auto init = kv.get("run.init")) {
    if (*init == "random") {
      c.init = InitialCondition::kRandom;
    } else if (*init == "zeros") {
      c.init = InitialCondition::kAllZeros;
    } else if (*init == "ones") {
      c.init = InitialCondition::kAllOnes;
    } else {
      fail(ErrorKind::kParse, "config line " + std::to_string(kv.line_of("run.init")) +
                                  ": init must be random, zeros or ones");
    }
  }
  c.output = kv.get("run.output").value_or("");

  if (kv.has("sweep.k")) {
    for (auto k : kv.get_uint_list("sweep.k")) c.k_list.push_back(k);
  }
  if (kv.has("hetero.ranges")) {
    for (const auto& item : kv.get_list("hetero.ranges")) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) {
        fail(ErrorKind::kParse, "config line " + std::to_string(kv.line_of("hetero.ranges")) +
                                    ": range '" + item + "' must be 'min:max'");
      }
      ReliabilityRange r;
      try {
        r.min = std::stod(item.substr(0, colon));
        r.max = std::stod(item.substr(colon + 1));
      } catch (const std::exception&) {
        fail(ErrorKind::kParse, "config line " + std::to_string(kv.line_of("hetero.ranges")) +
                                    ": bad range '" + item + "'");
      }
      c.kappa_ranges.push_back(r);
    }
  }
  c.reliability_seed = kv.get_uint("hetero.seed", 0);

  const auto unused = kv.unused_keys();
  if (!unused.empty()) fail(ErrorKind::kParse, "unknown field " + unused.front());

  // Parameter checks that do not need the graph.
  ChannelSpec(c.channel_kind, c.channel_param);
  require(!c.betas.empty(), ErrorKind::kConfiguration, "beta list is empty");
  for (double b : c.betas) {
    require(b > 0.0, ErrorKind::kInvalidParameter, "beta must be positive");
  }
  require(c.replicas >= 1, ErrorKind::kConfiguration, "replicas must be >= 1");
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::kConfiguration,
          "cannot open config '" + path + "'");
  return parse_config(KeyValueFile::parse(in));
}

}  // namespace nlll::experiments
