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
#include <vector>

#include <nlohmann/json.hpp>

#include "sgnet/serialization.hpp"

namespace sgnet {

/// Learning-rate schedule and optimizer settings.
struct TrainSchedule {
  double base_lr = 0.1;
  std::vector<int> milestones;  // epochs at which the rate is multiplied by gamma
  double gamma = 0.2;
  int warmup_epochs = 0;
  double momentum = 0.9;
  double weight_decay = 5e-4;
  std::size_t batch_size = 128;
  int total_epochs = 1;

  /// Throws ConfigError on any violated invariant.
  void validate() const;
  nlohmann::json to_json() const;
  static TrainSchedule from_json(const nlohmann::json& j);
};

/// Base 0.1, decay by 0.2 at epochs 60/120/160, one warmup epoch,
/// batch 128, 200 epochs.
TrainSchedule cifar_schedule();
/// Base 0.01, decay by 0.1 every 5 epochs over `total_epochs`.
TrainSchedule detection_schedule(int total_epochs = 30);

/// During warmup epochs the rate ramps linearly per step from
/// base_lr/steps to base_lr, where steps is the number of warmup steps;
/// afterwards it is base_lr * gamma^(number of milestones <= epoch).
double lr_at(const TrainSchedule& s, int epoch, std::size_t step_in_epoch, std::size_t steps_per_epoch);

/// v <- momentum*v + (grad + weight_decay*param); param <- param - lr*v.
/// All spans must have equal length.
template <typename T>
void sgd_step(std::span<T> param, std::span<const T> grad, std::span<T> velocity, double lr, double momentum,
              double weight_decay);

/// Momentum SGD over a fixed parameter list; velocities start at zero.
template <typename T>
class SgdOptimizer {
 public:
  SgdOptimizer(std::vector<NamedTensor<T>> params, double momentum, double weight_decay);

  /// Applies one update from the accumulated gradients, then clears them.
  /// Parameters without a gradient are treated as having a zero gradient.
  void step(double lr);
  void zero_grad();

  const std::vector<std::vector<T>>& velocities() const { return velocity_; }

 private:
  std::vector<NamedTensor<T>> params_;
  std::vector<std::vector<T>> velocity_;
  double momentum_;
  double weight_decay_;
};

}  // namespace sgnet
