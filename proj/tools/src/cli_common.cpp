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

#include "cli_common.hpp"

#include <fstream>

#include "gaborlens/error.hpp"
#include "gaborlens/features.hpp"
#include "gaborlens/log.hpp"
#include "gaborlens/version.hpp"

namespace gaborlens::cli {

int run_command(const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const PartialFailure& e) {
    log_error(e.what());
    return 3;
  } catch (const ConfigError& e) {
    log_error(e.what());
    return 1;
  } catch (const PreconditionError& e) {
    log_error(e.what());
    return 1;
  } catch (const SpecError& e) {
    log_error(e.what());
    return 1;
  } catch (const DegenerateInputError& e) {
    log_error(e.what());
    return 1;
  } catch (const FormatError& e) {
    log_error(e.what());
    return 1;
  } catch (const UnsupportedError& e) {
    log_error(e.what());
    return 1;
  } catch (const json::exception& e) {
    log_error(std::string("config: ") + e.what());
    return 1;
  } catch (const std::exception& e) {
    log_error(e.what());
    return 2;
  }
}

json load_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  return j;
}

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& context) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const std::string& k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError(context + ": unknown key \"" + it.key() + "\"");
  }
}

namespace {

const json* find(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

}  // namespace

double num_or(const json& obj, const std::string& key, double fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) throw ConfigError("key \"" + key + "\" must be a number");
  return v->get<double>();
}

long int_or(const json& obj, const std::string& key, long fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer())
    throw ConfigError("key \"" + key + "\" must be an integer");
  return v->get<long>();
}

bool bool_or(const json& obj, const std::string& key, bool fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean())
    throw ConfigError("key \"" + key + "\" must be a boolean");
  return v->get<bool>();
}

std::string str_or(const json& obj, const std::string& key,
                   const std::string& fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string())
    throw ConfigError("key \"" + key + "\" must be a string");
  return v->get<std::string>();
}

std::string require_str(const json& obj, const std::string& key,
                        const std::string& context) {
  const json* v = find(obj, key);
  if (!v || !v->is_string() || v->get<std::string>().empty())
    throw ConfigError(context + ": key \"" + key + "\" (string) is required");
  return v->get<std::string>();
}

std::uint64_t resolve_seed(const GlobalOpts& g, const json& cfg) {
  if (g.seed_set) return g.seed;
  return static_cast<std::uint64_t>(int_or(cfg, "seed", 0));
}

int resolve_workers(const GlobalOpts& g, const json& cfg) {
  const int w = g.workers_set ? g.workers
                              : static_cast<int>(int_or(cfg, "workers", 1));
  if (w < 1) throw ConfigError("workers must be >= 1");
  return w;
}

std::string config_hash(const std::string& command, json effective) {
  effective.erase("workers");
  return hash_hex(fnv1a64(command + ":" + effective.dump()));
}

CsvMeta make_meta(const std::string& command, const json& effective,
                  std::uint64_t seed) {
  CsvMeta meta;
  meta.tool_version = kVersion;
  meta.config_hash = config_hash(command, effective);
  meta.seed = seed;
  return meta;
}

std::filesystem::path ensure_out_dir(const std::string& out) {
  if (out.empty()) throw ConfigError("--out directory must not be empty");
  std::filesystem::path dir(out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create output directory " + out + ": " + ec.message());
  return dir;
}

ElasticNetConfig enet_from_json(const json& parent,
                                const std::string& context) {
  ElasticNetConfig cfg;
  const json* sub = parent.contains("enet") ? &parent.at("enet") : nullptr;
  if (!sub) return cfg;
  if (!sub->is_object()) throw ConfigError(context + ": \"enet\" must be an object");
  check_keys(*sub,
             {"lambda_count", "lambda_min_ratio", "rho", "tol", "max_iter",
              "cv_folds", "nonzero_threshold"},
             context + ".enet");
  cfg.lambda_count = static_cast<int>(int_or(*sub, "lambda_count", cfg.lambda_count));
  cfg.lambda_min_ratio = num_or(*sub, "lambda_min_ratio", cfg.lambda_min_ratio);
  cfg.rho = num_or(*sub, "rho", cfg.rho);
  cfg.tol = num_or(*sub, "tol", cfg.tol);
  cfg.max_iter = static_cast<int>(int_or(*sub, "max_iter", cfg.max_iter));
  cfg.cv_folds = static_cast<int>(int_or(*sub, "cv_folds", cfg.cv_folds));
  cfg.nonzero_threshold =
      num_or(*sub, "nonzero_threshold", cfg.nonzero_threshold);
  return cfg;
}

json enet_to_json(const ElasticNetConfig& cfg) {
  return json{{"lambda_count", cfg.lambda_count},
              {"lambda_min_ratio", cfg.lambda_min_ratio},
              {"rho", cfg.rho},
              {"tol", cfg.tol},
              {"max_iter", cfg.max_iter},
              {"cv_folds", cfg.cv_folds},
              {"nonzero_threshold", cfg.nonzero_threshold}};
}

Optimizer parse_optimizer(const std::string& name) {
  if (name == "sgdm" || name == "sgd_momentum") return Optimizer::kSgdMomentum;
  if (name == "adam") return Optimizer::kAdam;
  throw ConfigError("unknown optimizer \"" + name +
                    "\" (expected sgdm or adam)");
}

Architecture parse_architecture(const std::string& name) {
  if (name == "conv1d_lstm" || name == "1d") return Architecture::kConv1dLstm;
  if (name == "conv1d2d_lstm" || name == "1d2d")
    return Architecture::kConv1d2dLstm;
  throw ConfigError("unknown architecture \"" + name +
                    "\" (expected conv1d_lstm or conv1d2d_lstm)");
}

FeatureSet load_feature_set(const std::filesystem::path& dir) {
  const std::filesystem::path manifest = dir / "features.csv";
  const CsvContent csv = read_csv(manifest.string());
  const std::vector<std::string> expected = {
      "id", "label", "j", "n_exponent", "alpha", "transform",
      "rows", "cols", "path"};
  if (csv.header != expected)
    throw FormatError("unexpected features manifest header in " +
                      manifest.string());

  FeatureSet set;
  bool first = true;
  for (const auto& row : csv.rows) {
    if (row.size() != expected.size())
      throw FormatError("features manifest row width mismatch");
    const int j = std::stoi(row[2]);
    const int n = std::stoi(row[3]);
    const double alpha = std::stod(row[4]);
    if (first) {
      set.j = j;
      set.n_exponent = n;
      set.alpha = alpha;
      set.transform = row[5];
      first = false;
    } else if (j != set.j || n != set.n_exponent || alpha != set.alpha ||
               row[5] != set.transform) {
      throw FormatError("features manifest mixes several (j, N, alpha) cells");
    }
    auto label = parse_class_label(row[1]);
    if (!label)
      throw FormatError("feature set entry \"" + row[0] +
                        "\" has no class label");
    TrainExample ex;
    ex.input = load_feature_matrix(dir / row[8]);
    if (ex.input.j != j || ex.input.n_exponent != n)
      throw FormatError("feature tensor " + row[8] +
                        " disagrees with the manifest (j, N)");
    ex.label = *label;
    set.examples.push_back(std::move(ex));
    set.ids.push_back(row[0]);
  }
  if (set.examples.empty())
    throw PreconditionError("feature set " + dir.string() + " is empty");
  return set;
}

}  // namespace gaborlens::cli
