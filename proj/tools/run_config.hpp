// Copyright 2026 The sgnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgnet/data.hpp"
#include "sgnet/model.hpp"
#include "sgnet/schedule.hpp"
#include "sgnet/taxonomy.hpp"

namespace sgnet::cli {

struct DatasetSpec {
  std::string kind;  // "synthetic", "cifar" or "subset"
  SynthSpec synth;
  std::size_t holdout_per_finer = 0;
  std::filesystem::path train;
  std::filesystem::path test;
  std::size_t limit = 0;  // keep only the first `limit` training records, 0 keeps all
  std::vector<std::string> supers;
  std::size_t per_finer = 0;
  std::uint64_t subset_seed = 0;
};

/// A training run described by one JSON document. Relative paths resolve
/// against the document's directory.
struct RunConfig {
  std::filesystem::path source;
  std::string name;
  std::uint64_t seed = 0;
  DatasetSpec dataset;
  std::string taxonomy;  // "builtin:NAME", a file path, or empty for synthetic data
  SgnetConfig architecture;
  TrainSchedule schedule;
  double alpha = 0.5;
  bool augment = false;
  std::string precision = "f32";
  std::string normalization = "dataset";  // "dataset", "cifar100", or "inline"
  std::optional<Normalization> inline_normalization;
  std::filesystem::path output_dir;

  /// Canonical form with every default filled in and normalized paths.
  nlohmann::json resolved() const;
  std::string digest() const;
};

/// Parses and resolves a run config. Any problem raises ConfigError with a
/// "path:line: " prefix pointing at the offending key.
RunConfig load_run_config(const std::filesystem::path& path);
/// Same, from an already resolved document (as stored in checkpoints).
RunConfig run_config_from_resolved(const nlohmann::json& doc);

struct RunData {
  std::vector<DatasetRecord> train;
  std::vector<DatasetRecord> test;
  Taxonomy taxonomy;
  ImageGeometry geometry;
  Normalization normalization;
};

RunData load_run_data(const RunConfig& cfg);

/// Keeps records whose finer class (named in `from`) exists in `to`,
/// relabelled against `to`.
std::vector<DatasetRecord> relabel(std::vector<DatasetRecord> records, const Taxonomy& from, const Taxonomy& to);

}  // namespace sgnet::cli
