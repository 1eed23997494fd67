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

#include "sgnet/schedule.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "sgnet/errors.hpp"

namespace sgnet {

void TrainSchedule::validate() const {
  if (!(base_lr > 0.0)) throw ConfigError(fmt::format("base_lr must be positive, got {}", base_lr));
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError(fmt::format("gamma must lie in (0,1), got {}", gamma));
  for (std::size_t i = 1; i < milestones.size(); ++i) {
    if (milestones[i] <= milestones[i - 1]) {
      throw ConfigError(fmt::format("milestones must be strictly increasing ({} after {})", milestones[i],
                                    milestones[i - 1]));
    }
  }
  if (warmup_epochs < 0) throw ConfigError("warmup_epochs must be non-negative");
  if (momentum < 0.0 || momentum >= 1.0) throw ConfigError(fmt::format("momentum must lie in [0,1), got {}", momentum));
  if (weight_decay < 0.0) throw ConfigError("weight_decay must be non-negative");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (total_epochs < 1) throw ConfigError("total_epochs must be positive");
}

nlohmann::json TrainSchedule::to_json() const {
  return {{"base_lr", base_lr},           {"milestones", milestones}, {"gamma", gamma},
          {"warmup_epochs", warmup_epochs}, {"momentum", momentum},   {"weight_decay", weight_decay},
          {"batch_size", batch_size},     {"total_epochs", total_epochs}};
}

TrainSchedule TrainSchedule::from_json(const nlohmann::json& j) {
  TrainSchedule s;
  try {
    s.base_lr = j.value("base_lr", s.base_lr);
    s.milestones = j.value("milestones", s.milestones);
    s.gamma = j.value("gamma", s.gamma);
    s.warmup_epochs = j.value("warmup_epochs", s.warmup_epochs);
    s.momentum = j.value("momentum", s.momentum);
    s.weight_decay = j.value("weight_decay", s.weight_decay);
    s.batch_size = j.value("batch_size", s.batch_size);
    s.total_epochs = j.value("total_epochs", s.total_epochs);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed schedule: ") + e.what());
  }
  s.validate();
  return s;
}

TrainSchedule cifar_schedule() {
  TrainSchedule s;
  s.base_lr = 0.1;
  s.milestones = {60, 120, 160};
  s.gamma = 0.2;
  s.warmup_epochs = 1;
  s.batch_size = 128;
  s.total_epochs = 200;
  return s;
}

TrainSchedule detection_schedule(int total_epochs) {
  TrainSchedule s;
  s.base_lr = 0.01;
  s.gamma = 0.1;
  s.warmup_epochs = 0;
  s.total_epochs = total_epochs;
  for (int e = 5; e < total_epochs; e += 5) s.milestones.push_back(e);
  return s;
}

double lr_at(const TrainSchedule& s, int epoch, std::size_t step_in_epoch, std::size_t steps_per_epoch) {
  if (epoch < s.warmup_epochs) {
    const std::size_t steps = std::max<std::size_t>(1, steps_per_epoch) * s.warmup_epochs;
    const std::size_t k = static_cast<std::size_t>(epoch) * steps_per_epoch + step_in_epoch + 1;
    return s.base_lr * static_cast<double>(std::min(k, steps)) / static_cast<double>(steps);
  }
  const auto passed = std::count_if(s.milestones.begin(), s.milestones.end(), [&](int m) { return m <= epoch; });
  return s.base_lr * std::pow(s.gamma, static_cast<double>(passed));
}

template <typename T>
void sgd_step(std::span<T> param, std::span<const T> grad, std::span<T> velocity, double lr, double momentum,
              double weight_decay) {
  if (grad.size() != param.size() || velocity.size() != param.size()) {
    throw ValidationError(fmt::format("sgd_step sizes differ: param {}, grad {}, velocity {}", param.size(),
                                      grad.size(), velocity.size()));
  }
  const T m = static_cast<T>(momentum), wd = static_cast<T>(weight_decay), a = static_cast<T>(lr);
  for (std::size_t i = 0; i < param.size(); ++i) {
    velocity[i] = m * velocity[i] + (grad[i] + wd * param[i]);
    param[i] -= a * velocity[i];
  }
}

template <typename T>
SgdOptimizer<T>::SgdOptimizer(std::vector<NamedTensor<T>> params, double momentum, double weight_decay)
    : params_(std::move(params)), momentum_(momentum), weight_decay_(weight_decay) {
  for (const auto& p : params_) velocity_.emplace_back(p.tensor.numel(), T(0));
}

template <typename T>
void SgdOptimizer<T>::step(double lr) {
  std::vector<T> zeros;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& t = params_[i].tensor;
    std::span<const T> g;
    if (t.has_grad()) {
      g = t.grad();
    } else {
      zeros.assign(t.numel(), T(0));
      g = zeros;
    }
    sgd_step<T>(t.mutable_data(), g, velocity_[i], lr, momentum_, weight_decay_);
  }
  zero_grad();
}

template <typename T>
void SgdOptimizer<T>::zero_grad() {
  for (auto& p : params_) p.tensor.zero_grad();
}

template void sgd_step<float>(std::span<float>, std::span<const float>, std::span<float>, double, double, double);
template void sgd_step<double>(std::span<double>, std::span<const double>, std::span<double>, double, double,
                               double);
template class SgdOptimizer<float>;
template class SgdOptimizer<double>;

}  // namespace sgnet
