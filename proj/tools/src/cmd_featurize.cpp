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

#include <fstream>

#include "commands.hpp"
#include "gaborlens/error.hpp"
#include "gaborlens/features.hpp"
#include "gaborlens/log.hpp"

namespace gaborlens::cli {
namespace {

FeatureTransform parse_transform(const std::string& name) {
  if (name == "weighted_log") return FeatureTransform::kWeightedLog;
  if (name == "linear") return FeatureTransform::kLinear;
  if (name == "squared") return FeatureTransform::kSquared;
  throw ConfigError("unknown transform \"" + name +
                    "\" (expected weighted_log, linear or squared)");
}

Eigen::VectorXd coeffs_from_json(const json& doc, const std::string& id) {
  const json& c = doc.at("coeffs");
  const Eigen::Index m = c.at("length").get<Eigen::Index>();
  Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
  const std::string encoding = c.at("encoding").get<std::string>();
  const json& values = c.at("values");
  if (encoding == "sparse") {
    const json& indices = c.at("indices");
    if (indices.size() != values.size())
      throw FormatError("fit " + id + ": indices/values length mismatch");
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const Eigen::Index i = indices[k].get<Eigen::Index>();
      if (i < 0 || i >= m)
        throw FormatError("fit " + id + ": coefficient index out of range");
      a[i] = values[k].get<double>();
    }
  } else if (encoding == "dense") {
    if (static_cast<Eigen::Index>(values.size()) != m)
      throw FormatError("fit " + id + ": dense values length mismatch");
    for (Eigen::Index i = 0; i < m; ++i) a[i] = values[i].get<double>();
  } else {
    throw FormatError("fit " + id + ": unknown coefficient encoding \"" +
                      encoding + "\"");
  }
  return a;
}

}  // namespace

// Turns every fitted coefficient vector from a `fit` output directory into
// a time-frequency feature tensor plus a manifest row.
void cmd_featurize(const GlobalOpts& g) {
  if (g.config_path.empty())
    throw ConfigError("featurize: --config is required (needs \"fits\")");
  const json cfg = load_json_file(g.config_path);
  check_keys(cfg, {"seed", "workers", "fits", "transform"},
             "featurize config");

  const std::uint64_t seed = resolve_seed(g, cfg);
  const std::string fits_dir = require_str(cfg, "fits", "featurize");
  const std::string transform_name = str_or(cfg, "transform", "weighted_log");
  const FeatureTransform transform = parse_transform(transform_name);

  json effective{{"seed", seed},
                 {"fits", fits_dir},
                 {"transform", transform_name}};
  const CsvMeta meta = make_meta("featurize", effective, seed);

  const std::filesystem::path fits(fits_dir);
  const CsvContent stats = read_csv((fits / "fit_stats.csv").string());
  if (stats.header.empty() || stats.header[0] != "id")
    throw FormatError("featurize: " + fits_dir +
                      "/fit_stats.csv is not a fit output");

  const auto out = ensure_out_dir(g.out_dir);
  std::filesystem::create_directories(out / "features");

  CsvWriter manifest((out / "features.csv").string(), meta,
                     {"id", "label", "j", "n_exponent", "alpha", "transform",
                      "rows", "cols", "path"});
  long count = 0;
  for (const auto& row : stats.rows) {
    const std::string& id = row[0];
    std::ifstream is(fits / "fits" / (id + ".json"));
    if (!is) throw IoError("featurize: missing fit result for " + id);
    json doc;
    try {
      is >> doc;
    } catch (const json::parse_error& e) {
      throw FormatError("featurize: fit " + id + " is not valid JSON: " +
                        e.what());
    }
    const int j = doc.at("j").get<int>();
    const int n_exponent = doc.at("n_exponent").get<int>();
    const double alpha = doc.at("alpha").get<double>();
    const std::string label = doc.at("label").get<std::string>();
    const Eigen::VectorXd coeffs = coeffs_from_json(doc, id);

    const FeatureMatrix m = featurize(coeffs, j, n_exponent, transform);
    const std::string rel = "features/" + id + ".glft";
    save_feature_matrix(out / rel, m);
    manifest.row({id, label, CsvWriter::num(j), CsvWriter::num(n_exponent),
                  CsvWriter::num(alpha), transform_name,
                  CsvWriter::num(static_cast<long>(m.values.rows())),
                  CsvWriter::num(static_cast<long>(m.values.cols())), rel});
    ++count;
  }
  manifest.close();
  log_info("featurize: wrote " + std::to_string(count) + " tensors to " +
           out.string());
}

}  // namespace gaborlens::cli
