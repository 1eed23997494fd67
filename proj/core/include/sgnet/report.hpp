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

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgnet/inference.hpp"
#include "sgnet/taxonomy.hpp"
#include "sgnet/trainer.hpp"

namespace sgnet {

/// Plain-text table: header row, a dashed rule, then rows; columns are
/// left-aligned, padded to the widest cell and separated by " | ".
std::string format_table(const std::vector<std::string>& headers, const std::vector<std::vector<std::string>>& rows);

/// "40.8M", "34.0M", "12.3K", or the plain count below 1000.
std::string format_param_count(std::size_t n);

/// One row of the accuracy comparison.
struct AccuracyRow {
  std::string model;
  std::string epoch;  // "-" when unknown
  Metrics metrics;
  std::size_t params = 0;
};

inline const std::vector<std::string> kAccuracyColumns{
    "Model",         "Accuracy (%)",      "Epoch", "Inference Time", "# Params", "Super Accuracy (%)",
    "Serious Error (%)", "Containment Violations"};
inline const std::vector<std::string> kMismatchColumns{"Mismatch", "Correct SC", "Correct FC", "Correct Combined"};

std::string accuracy_table(const std::vector<AccuracyRow>& rows);
std::string mismatch_table(const MismatchReport& report);
/// One line per conflicting sample with class names.
std::string conflict_listing(const MismatchReport& report, const Taxonomy& taxonomy);

/// epoch,loss_total,normalized lines, preceded by a comment header with the
/// seed and config digest.
std::string loss_curve_csv(const RunLog& log);

/// Hex SHA-256 of the compact serialization of a JSON document. Object keys
/// are sorted by the serializer, so equal documents give equal digests.
std::string config_digest(const nlohmann::json& doc);

}  // namespace sgnet
