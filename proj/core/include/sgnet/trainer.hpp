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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgnet/data.hpp"
#include "sgnet/inference.hpp"
#include "sgnet/model.hpp"
#include "sgnet/schedule.hpp"
#include "sgnet/taxonomy.hpp"

namespace sgnet {

struct StepRecord {
  int epoch = 0;
  std::size_t step = 0;
  std::size_t batch = 0;  // samples in the step
  double lr = 0.0;
  double loss_total = 0.0;
  double loss_fc = 0.0;
  double loss_sc = 0.0;
};

struct EvalRecord {
  std::string dataset;
  Metrics metrics;
};

struct EpochRecord {
  int epoch = 0;
  double lr = 0.0;  // rate of the epoch's last step
  // Sample-weighted means over the epoch's steps.
  double loss_total = 0.0;
  double loss_fc = 0.0;
  double loss_sc = 0.0;
  std::vector<EvalRecord> eval;
  double seconds = 0.0;
};

struct RunLog {
  std::uint64_t seed = 0;
  std::string config_digest;
  double alpha = 0.0;
  std::vector<EpochRecord> epochs;
  std::vector<StepRecord> steps;
  int best_epoch = -1;
  double best_score = 0.0;  // DI finer accuracy on the first eval set, or -loss without eval sets

  std::string epochs_csv() const;
  std::string steps_csv() const;
  nlohmann::json to_json() const;
};

struct EvalSet {
  std::string name;
  std::span<const DatasetRecord> records;
};

struct TrainOptions {
  TrainSchedule schedule;
  double alpha = 0.5;
  std::uint64_t seed = 0;
  bool augment = false;
  ImageGeometry geometry;
  Normalization normalization = cifar100_normalization();
  std::filesystem::path checkpoint_dir;  // empty disables checkpoints
  std::string config_digest;
  nlohmann::json checkpoint_extra = nlohmann::json::object();
  std::function<void(const EpochRecord&)> on_epoch;
};

/// Minibatch training: forward, combined loss, backward and a momentum SGD
/// step at lr_at every step; after each epoch both inference modes run on
/// each eval set and the latest and best checkpoints are written.
/// A non-finite loss raises TrainingError naming epoch, step and rate.
template <typename T>
RunLog train(SgnetModel<T>& model, std::span<const DatasetRecord> records, const Taxonomy& taxonomy,
             const TrainOptions& options, std::span<const EvalSet> eval_sets = {});

struct NormalizedCurve {
  std::vector<double> values;
  bool degenerate = false;  // constant input, all values zero
};

/// Min-max normalization of per-epoch loss_total to [0, 1].
NormalizedCurve normalize_loss_curve(const RunLog& log);
NormalizedCurve normalize_loss_curve(std::span<const double> losses);

}  // namespace sgnet
