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
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgnet/data.hpp"
#include "sgnet/model.hpp"
#include "sgnet/taxonomy.hpp"
#include "sgnet/tensor.hpp"

namespace sgnet {

enum class InferenceMode { kTsi, kDi };

std::string_view mode_name(InferenceMode mode);

struct Prediction {
  int finer_id = 0;
  int super_id = 0;
  double finer_confidence = 0.0;
  double super_confidence = 0.0;
  InferenceMode mode = InferenceMode::kTsi;
  // Raw finer argmax lies outside the raw super argmax. Always false for DI,
  // which never looks at super scores.
  bool mismatch = false;
};

/// Two-step: argmax super, then argmax of a softmax over only that super's
/// member finer logits. Ties go to the lowest index.
template <typename T>
Prediction predict_tsi(std::span<const T> super_logits, std::span<const T> finer_logits, const Taxonomy& taxonomy);

/// Global finer argmax; the super is its taxonomy parent and
/// `super_confidence` is the softmax mass of that parent's members.
template <typename T>
Prediction predict_di(std::span<const T> finer_logits, const Taxonomy& taxonomy);

/// Row-wise prediction over [N, C] logit tensors. `super_logits` may be
/// undefined for DI.
template <typename T>
std::vector<Prediction> predict_batch(const BasicTensor<T>& super_logits, const BasicTensor<T>& finer_logits,
                                      InferenceMode mode, const Taxonomy& taxonomy);

struct MismatchConflict {
  std::size_t sample = 0;
  int truth_finer = 0;
  int super_argmax = 0;
  int finer_argmax = 0;
  int combined_finer = 0;  // TSI prediction
};

/// Counts over the samples whose raw finer argmax is not a member of the raw
/// super argmax.
struct MismatchReport {
  std::size_t mismatch_count = 0;
  std::size_t correct_sc_count = 0;
  std::size_t correct_fc_count = 0;
  std::size_t correct_combined_count = 0;
  std::size_t total_samples = 0;
  std::vector<MismatchConflict> conflicts;

  nlohmann::json to_json() const;
};

template <typename T>
MismatchReport mismatch_analysis(const BasicTensor<T>& super_logits, const BasicTensor<T>& finer_logits,
                                 std::span<const int> finer_truth, const Taxonomy& taxonomy);

struct Metrics {
  InferenceMode mode = InferenceMode::kTsi;
  std::size_t samples = 0;
  double finer_top1 = 0.0;
  double super_top1 = 0.0;
  double serious_error_rate = 0.0;  // 1 - super_top1
  std::size_t containment_violations = 0;  // predictions whose finer is not under their super
  double seconds_per_sample = 0.0;

  nlohmann::json to_json() const;
};

/// Metrics from precomputed logits.
template <typename T>
Metrics evaluate_logits(const BasicTensor<T>& super_logits, const BasicTensor<T>& finer_logits,
                        std::span<const int> finer_truth, InferenceMode mode, const Taxonomy& taxonomy);

template <typename T>
struct LogitSet {
  BasicTensor<T> super_logits;  // undefined when the super head was skipped
  BasicTensor<T> finer_logits;
  std::vector<int> finer_truth;
  double seconds = 0.0;  // forward plus decision time
};

/// Forward pass over a dataset without gradient tracking.
template <typename T>
LogitSet<T> collect_logits(const SgnetModel<T>& model, std::span<const DatasetRecord> records,
                           const ImageGeometry& geometry, const Normalization& normalization, bool super_head,
                           std::size_t batch_size = 256);

/// Runs the model in the given mode. DI skips the super-class head.
template <typename T>
Metrics evaluate(const SgnetModel<T>& model, std::span<const DatasetRecord> records, const ImageGeometry& geometry,
                 const Normalization& normalization, InferenceMode mode, const Taxonomy& taxonomy,
                 std::size_t batch_size = 256);

}  // namespace sgnet
