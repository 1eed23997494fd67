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

#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "sgnet/errors.hpp"
#include "sgnet/schedule.hpp"

namespace {

TEST(Schedule, CifarMilestones) {
  auto s = sgnet::cifar_schedule();
  EXPECT_DOUBLE_EQ(sgnet::lr_at(s, 59, 0, 391), 0.1);
  EXPECT_NEAR(sgnet::lr_at(s, 60, 0, 391), 0.02, 1e-15);
  EXPECT_NEAR(sgnet::lr_at(s, 125, 0, 391), 0.004, 1e-15);
  EXPECT_NEAR(sgnet::lr_at(s, 161, 0, 391), 0.0008, 1e-15);
  EXPECT_EQ(s.batch_size, 128u);
  EXPECT_EQ(s.total_epochs, 200);
}

TEST(Schedule, DetectionDecay) {
  auto s = sgnet::detection_schedule();
  EXPECT_DOUBLE_EQ(sgnet::lr_at(s, 0, 0, 10), 0.01);
  EXPECT_NEAR(sgnet::lr_at(s, 5, 0, 10), 0.001, 1e-15);
  EXPECT_NEAR(sgnet::lr_at(s, 10, 0, 10), 0.0001, 1e-16);
}

TEST(Schedule, WarmupRamp) {
  auto s = sgnet::cifar_schedule();
  double prev = 0.0;
  for (std::size_t step = 0; step < 391; ++step) {
    double lr = sgnet::lr_at(s, 0, step, 391);
    EXPECT_GT(lr, 0.0);
    EXPECT_LE(lr, s.base_lr);
    EXPECT_GE(lr, prev);
    prev = lr;
  }
  double mid = sgnet::lr_at(s, 0, 195, 391);
  EXPECT_GT(mid, 0.0);
  EXPECT_LT(mid, s.base_lr);
  EXPECT_DOUBLE_EQ(sgnet::lr_at(s, 1, 0, 391), 0.1);
}

TEST(Schedule, JsonRoundTripAndValidation) {
  auto s = sgnet::cifar_schedule();
  auto again = sgnet::TrainSchedule::from_json(s.to_json());
  EXPECT_EQ(again.to_json(), s.to_json());
  s.milestones = {120, 60};
  EXPECT_THROW(s.validate(), sgnet::ConfigError);
}

TEST(Sgd, PlainStep) {
  std::vector<double> p{1.0}, g{0.5}, v{0.0};
  sgnet::sgd_step<double>(p, g, v, 1.0, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
}

TEST(Sgd, MomentumRecurrence) {
  std::vector<double> p{0.0}, g{0.3}, v{0.0};
  sgnet::sgd_step<double>(p, g, v, 0.1, 0.9, 0.0);
  sgnet::sgd_step<double>(p, g, v, 0.1, 0.9, 0.0);
  EXPECT_NEAR(v[0], 1.9 * 0.3, 1e-15);
}

TEST(Sgd, LengthMismatch) {
  std::vector<double> p{0.0, 1.0}, g{0.3}, v{0.0, 0.0};
  EXPECT_THROW(sgnet::sgd_step<double>(p, g, v, 0.1, 0.9, 0.0), sgnet::ValidationError);
}

TEST(Sgd, MatchesReferenceLoop) {
  std::mt19937_64 rng(8);
  std::normal_distribution<float> d;
  const std::size_t n = 37;
  std::vector<float> p(n), v(n, 0.0f), ref_p, ref_v(n, 0.0f);
  for (auto& x : p) x = d(rng);
  ref_p = p;
  const double momentum = 0.9, wd = 5e-4;
  for (int step = 0; step < 100; ++step) {
    std::vector<float> g(n);
    for (auto& x : g) x = d(rng);
    double lr = 0.05 * (1.0 + step % 7);
    sgnet::sgd_step<float>(p, g, v, lr, momentum, wd);
    for (std::size_t i = 0; i < n; ++i) {
      float gi = g[i] + static_cast<float>(wd) * ref_p[i];
      ref_v[i] = static_cast<float>(momentum) * ref_v[i] + gi;
      ref_p[i] = ref_p[i] - static_cast<float>(lr) * ref_v[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_EQ(p[i], ref_p[i]) << i;
    EXPECT_EQ(v[i], ref_v[i]) << i;
  }
}

}  // namespace
