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
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sgnet/inference.hpp"
#include "sgnet/model.hpp"
#include "sgnet/taxonomy.hpp"
#include "sgnet/tensor.hpp"

namespace sgnet {

/// Score layout of a detector classification head: one vector of length
/// C = C_SC + C_FC per region, super segment first. Both segments carry a
/// background class at index 0 and finer background is parented to super
/// background.
struct DetectionHeadConfig {
  Taxonomy taxonomy;  // extended with the background classes
  int c_sc = 0;
  int c_fc = 0;
  int c() const { return c_sc + c_fc; }

  static DetectionHeadConfig from_taxonomy(const Taxonomy& base);
};

inline constexpr const char* kBackgroundName = "background";

template <typename T>
std::pair<std::vector<T>, std::vector<T>> split_scores(std::span<const T> v, const DetectionHeadConfig& cfg);

template <typename T>
std::vector<T> concat_scores(std::span<const T> v_sc, std::span<const T> v_fc, const DetectionHeadConfig& cfg);

/// Mean cross-entropy of each segment over a batch of score vectors
/// [N, C], with unit weights: total = loss_sc + loss_fc. The box
/// regression term stays zero and `alpha` is empty.
template <typename T>
LossBreakdown<T> detection_class_loss(const BasicTensor<T>& scores, std::span<const int> gt_finer,
                                      const DetectionHeadConfig& cfg);

template <typename T>
Prediction roi_predict(std::span<const T> v, const DetectionHeadConfig& cfg, InferenceMode mode);

struct RoiSample {
  std::vector<double> features;
  int finer_label = 0;  // 0 is background
  int super_label = 0;
};

/// Stand-in for a region proposal pipeline. Each RoI's feature vector is
/// `feature_scale` times the one-hot code of its finer label plus Gaussian
/// noise. `scores` come from a fixed reference linear scorer that puts
/// `margin` on the true finer class and its parent super and zero elsewhere,
/// so noise = 0 gives perfectly separable score vectors.
struct RoiHarness {
  std::vector<RoiSample> samples;
  std::vector<std::vector<double>> scores;
  std::size_t feature_dim = 0;
};

RoiHarness synth_roi_harness(const DetectionHeadConfig& cfg, std::size_t n, double noise, std::uint64_t seed,
                             double margin = 8.0, double feature_scale = 1.0);

struct RoiTrainResult {
  std::vector<double> losses;  // per step, before the update
  BasicTensor<double> weight;  // [C, D]
  BasicTensor<double> bias;    // [C]
  BasicTensor<double> scores;  // [N, C] after training
};

/// Fits a zero-initialized linear scorer on the harness features with
/// full-batch momentum SGD under detection_class_loss.
RoiTrainResult train_roi_scorer(const RoiHarness& harness, const DetectionHeadConfig& cfg, int steps, double lr,
                                double momentum = 0.9);

}  // namespace sgnet
