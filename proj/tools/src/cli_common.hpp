// Copyright 2026 The gaborlens authors
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

#ifndef GABORLENS_TOOLS_CLI_COMMON_HPP_
#define GABORLENS_TOOLS_CLI_COMMON_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gaborlens/csvio.hpp"
#include "gaborlens/elastic_net.hpp"
#include "gaborlens/net.hpp"

namespace gaborlens::cli {

using nlohmann::json;

struct GlobalOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 1;
  bool workers_set = false;
};

// Raised by commands that finished with some per-item failures (exit 3).
struct PartialFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exit codes: 0 success, 1 validation error, 2 runtime/numeric error,
// 3 partial failure.
int run_command(const std::function<void()>& body);

json load_json_file(const std::string& path);

// Rejects keys outside the allowlist with a config error naming them.
void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& context);

// Typed config readers; a present-but-mistyped value is a config error.
double num_or(const json& obj, const std::string& key, double fallback);
long int_or(const json& obj, const std::string& key, long fallback);
bool bool_or(const json& obj, const std::string& key, bool fallback);
std::string str_or(const json& obj, const std::string& key,
                   const std::string& fallback);
std::string require_str(const json& obj, const std::string& key,
                        const std::string& context);

// Resolved seed/workers: CLI flag beats config key beats default.
std::uint64_t resolve_seed(const GlobalOpts& g, const json& cfg);
int resolve_workers(const GlobalOpts& g, const json& cfg);

// FNV-1a over "<command>:<canonical dump>"; `workers` never participates,
// so artifact bytes are independent of the worker count.
std::string config_hash(const std::string& command, json effective);
CsvMeta make_meta(const std::string& command, const json& effective,
                  std::uint64_t seed);

std::filesystem::path ensure_out_dir(const std::string& out);

ElasticNetConfig enet_from_json(const json& parent, const std::string& context);
json enet_to_json(const ElasticNetConfig& cfg);

Optimizer parse_optimizer(const std::string& name);
Architecture parse_architecture(const std::string& name);

// Feature-set directory contract (written by `featurize`, read by `train`
// and `evaluate`): features.csv manifest + one .glft tensor per recording.
struct FeatureSet {
  int j = 0;
  int n_exponent = 0;
  double alpha = 0.0;
  std::string transform;
  std::vector<std::string> ids;
  Dataset examples;  // labels required by the loaders below
};
FeatureSet load_feature_set(const std::filesystem::path& dir);

}  // namespace gaborlens::cli

#endif  // GABORLENS_TOOLS_CLI_COMMON_HPP_
