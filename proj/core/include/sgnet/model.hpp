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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgnet/serialization.hpp"
#include "sgnet/taxonomy.hpp"
#include "sgnet/tensor.hpp"

namespace sgnet {

enum class Downsample { kMaxPool, kStridedConv };

/// A run of `conv_count` 3x3 same-padded convolutions with `channels`
/// outputs, each followed by ReLU, then one downsampling layer.
struct StageSpec {
  int conv_count = 1;
  int channels = 16;
  bool operator==(const StageSpec&) const = default;
};

/// Declarative two-branch architecture.
///
/// The backbone is a list of stages. The super-class branch (SCB) reads the
/// backbone activation after `scb_attach` downsampling layers, runs its own
/// stages and a fully connected super-class head. The finer branch (FCB) is
/// the remaining backbone; its final feature map is concatenated with the
/// SCB's final feature map, channel-wise in that order, before the finer
/// fully connected head. An empty `scb_stages` describes the plain baseline
/// network without an SCB.
struct SgnetConfig {
  std::string name = "custom";
  int input_channels = 3;
  int input_size = 32;
  std::vector<StageSpec> backbone_stages;
  int scb_attach = 0;
  std::vector<StageSpec> scb_stages;
  std::vector<int> scb_fc_widths;
  std::vector<int> fcb_fc_widths;
  int num_finer = 100;
  int num_super = 20;
  double alpha = 0.5;
  Downsample downsample = Downsample::kMaxPool;

  bool has_scb() const { return !scb_stages.empty(); }
  /// Throws ConfigError on any violated invariant.
  void validate() const;

  nlohmann::json to_json() const;
  static SgnetConfig from_json(const nlohmann::json& j);
};

/// Parameter count implied by the configuration alone.
std::size_t parameter_count(const SgnetConfig& cfg);

/// The VGG-16 instantiation for 32x32 inputs, with and without the SCB.
SgnetConfig vgg16_sgnet_cifar();
SgnetConfig vgg16_baseline_cifar();
/// Small configurations for desk-scale runs.
SgnetConfig tiny_sgnet(int num_super, int num_finer, int input_size);
/// Looks up "vgg16-sgnet-cifar", "vgg16-baseline-cifar".
SgnetConfig builtin_architecture(std::string_view name);

template <typename T>
struct BranchOutputs {
  BasicTensor<T> super_logits;  // [N, C_SC]; undefined when the super head is skipped
  BasicTensor<T> finer_logits;  // [N, C_FC]
  BasicTensor<T> scb_features;  // [N, Cs, h, w]; undefined without an SCB
  BasicTensor<T> fcb_features;  // [N, Cf, h, w]
};

struct ForwardOptions {
  // Direct inference never evaluates the SCB's fully connected head.
  bool super_head = true;
};

template <typename T>
class SgnetModel {
 public:
  SgnetModel(SgnetConfig cfg, std::uint64_t seed);
  SgnetModel(SgnetModel&&) noexcept = default;
  SgnetModel& operator=(SgnetModel&&) noexcept = default;
  SgnetModel(const SgnetModel&) = delete;
  SgnetModel& operator=(const SgnetModel&) = delete;

  const SgnetConfig& config() const { return config_; }
  std::vector<NamedTensor<T>>& parameters() { return params_; }
  const std::vector<NamedTensor<T>>& parameters() const { return params_; }
  BasicTensor<T> parameter(std::string_view name) const;
  std::size_t parameter_count() const;

  BranchOutputs<T> forward(const BasicTensor<T>& batch, ForwardOptions options = {}) const;

  /// Deep copy, optionally in another precision.
  template <typename U>
  SgnetModel<U> cast() const;
  SgnetModel clone() const { return cast<T>(); }

  /// Replaces parameter values; names and shapes must match exactly.
  void load_parameters(const std::vector<NamedTensor<T>>& values);

 private:
  template <typename>
  friend class SgnetModel;
  struct NoInit {};
  SgnetModel(SgnetConfig cfg, NoInit);
  void build(std::uint64_t seed, bool initialize);

  struct Conv {
    BasicTensor<T> weight, bias;
    std::size_t stride = 1, padding = 1;
  };
  struct Stage {
    std::vector<Conv> convs;
    std::optional<Conv> down;  // strided-conv downsampling; max pool otherwise
  };
  struct Dense {
    BasicTensor<T> weight, bias;
  };

  BasicTensor<T> run_stage(const Stage& stage, BasicTensor<T> x) const;
  BasicTensor<T> run_head(const std::vector<Dense>& head, BasicTensor<T> x) const;

  SgnetConfig config_;
  std::vector<Stage> backbone_;
  std::vector<Stage> scb_;
  std::vector<Dense> scb_head_;
  std::vector<Dense> fcb_head_;
  std::vector<NamedTensor<T>> params_;
};

template <typename T>
SgnetModel<T> build_model(const SgnetConfig& cfg, std::uint64_t seed) {
  return SgnetModel<T>(cfg, seed);
}

/// Loss terms of one step. For the classifier `total` is the blend
/// (1-alpha) loss_fc + alpha loss_sc; for the detection head it is the plain
/// sum and `alpha` is empty. `loss_bbox` is a placeholder kept at zero.
template <typename T>
struct LossBreakdown {
  BasicTensor<T> loss;  // differentiable total
  double total = 0.0;
  double loss_fc = 0.0;
  double loss_sc = 0.0;
  double loss_bbox = 0.0;
  std::optional<double> alpha;
};

/// Finer cross-entropy plus super cross-entropy on labels derived through
/// the taxonomy, blended by alpha. Without super logits (baseline network)
/// the total is the finer cross-entropy alone.
template <typename T>
LossBreakdown<T> combined_loss(const BranchOutputs<T>& out, std::span<const int> finer_labels,
                               const Taxonomy& taxonomy, double alpha);

}  // namespace sgnet
