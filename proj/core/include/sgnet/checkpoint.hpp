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

#include <filesystem>

#include <nlohmann/json.hpp>

#include "sgnet/model.hpp"

namespace sgnet {

/// A checkpoint is a directory holding model.bin / model.manifest (tensor
/// store) and config.json with the architecture, the stored precision and
/// caller-supplied extras (taxonomy, normalization, digest, epoch...).
struct CheckpointInfo {
  SgnetConfig config;
  std::string dtype;  // "f32" or "f64"
  nlohmann::json extra = nlohmann::json::object();
};

template <typename T>
void save_checkpoint(const std::filesystem::path& dir, const SgnetModel<T>& model,
                     const nlohmann::json& extra = nlohmann::json::object());

/// Loads in precision T, converting if the checkpoint was stored in the
/// other precision. Mismatched tensor names or shapes raise ShapeError.
template <typename T>
SgnetModel<T> load_checkpoint(const std::filesystem::path& dir, CheckpointInfo* info = nullptr);

CheckpointInfo read_checkpoint_info(const std::filesystem::path& dir);

}  // namespace sgnet
