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

#include "sgnet/checkpoint.hpp"

#include <fstream>

#include "sgnet/errors.hpp"

namespace sgnet {
namespace {

template <typename T>
constexpr const char* dtype_name() {
  return std::is_same_v<T, float> ? "f32" : "f64";
}

template <typename Stored, typename T>
SgnetModel<T> load_as(const std::filesystem::path& dir, const SgnetConfig& cfg) {
  SgnetModel<Stored> model(cfg, 0);
  model.load_parameters(load_tensors<Stored>(dir / "model"));
  if constexpr (std::is_same_v<Stored, T>) {
    return model;
  } else {
    return model.template cast<T>();
  }
}

}  // namespace

template <typename T>
void save_checkpoint(const std::filesystem::path& dir, const SgnetModel<T>& model, const nlohmann::json& extra) {
  std::filesystem::create_directories(dir);
  save_tensors<T>(dir / "model", model.parameters(), {{"architecture", model.config().name}});
  const nlohmann::json doc{{"architecture", model.config().to_json()}, {"dtype", dtype_name<T>()}, {"extra", extra}};
  std::ofstream out(dir / "config.json");
  if (!out) throw Error("cannot write " + (dir / "config.json").string());
  out << doc.dump(2) << "\n";
}

CheckpointInfo read_checkpoint_info(const std::filesystem::path& dir) {
  const auto path = dir / "config.json";
  std::ifstream in(path);
  if (!in) throw LookupError("checkpoint has no config.json: " + path.string());
  CheckpointInfo info;
  try {
    const auto doc = nlohmann::json::parse(in);
    info.config = SgnetConfig::from_json(doc.at("architecture"));
    info.dtype = doc.at("dtype").get<std::string>();
    info.extra = doc.value("extra", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  if (info.dtype != "f32" && info.dtype != "f64") throw FormatError(path.string() + ": unknown dtype " + info.dtype);
  return info;
}

template <typename T>
SgnetModel<T> load_checkpoint(const std::filesystem::path& dir, CheckpointInfo* info) {
  auto meta = read_checkpoint_info(dir);
  auto model = meta.dtype == "f32" ? load_as<float, T>(dir, meta.config) : load_as<double, T>(dir, meta.config);
  if (info) *info = std::move(meta);
  return model;
}

template void save_checkpoint<float>(const std::filesystem::path&, const SgnetModel<float>&, const nlohmann::json&);
template void save_checkpoint<double>(const std::filesystem::path&, const SgnetModel<double>&,
                                      const nlohmann::json&);
template SgnetModel<float> load_checkpoint<float>(const std::filesystem::path&, CheckpointInfo*);
template SgnetModel<double> load_checkpoint<double>(const std::filesystem::path&, CheckpointInfo*);

}  // namespace sgnet
