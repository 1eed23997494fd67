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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "sgnet/errors.hpp"
#include "sgnet/model.hpp"
#include "sgnet/ops.hpp"
#include "sgnet/taxonomy.hpp"

namespace {

using sgnet::SgnetConfig;
using sgnet::SgnetModel;
using sgnet::Tensor;
using sgnet::Tensor64;

std::size_t conv3(std::size_t cin, std::size_t cout) { return 9 * cin * cout + cout; }
std::size_t dense(std::size_t in, std::size_t out) { return in * out + out; }

// VGG-16 on 32x32 inputs: five stages, spatial 1x1 at the end.
std::size_t vgg16_count(bool with_scb) {
  std::size_t n = conv3(3, 64) + conv3(64, 64) + conv3(64, 128) + conv3(128, 128) + conv3(128, 256) +
                  2 * conv3(256, 256) + conv3(256, 512) + 2 * conv3(512, 512) + 3 * conv3(512, 512);
  std::size_t fc_in = 512;
  if (with_scb) {
    n += 2 * conv3(512, 512) + dense(512, 20);
    fc_in += 512;
  }
  return n + dense(fc_in, 4096) + dense(4096, 4096) + dense(4096, 100);
}

Tensor random_batch(const SgnetConfig& cfg, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> d;
  std::vector<float> v(n * cfg.input_channels * cfg.input_size * cfg.input_size);
  for (auto& x : v) x = d(rng);
  return Tensor({n, static_cast<std::size_t>(cfg.input_channels), static_cast<std::size_t>(cfg.input_size),
                 static_cast<std::size_t>(cfg.input_size)},
                v);
}

TEST(Model, VggParameterCounts) {
  auto sg = sgnet::vgg16_sgnet_cifar();
  auto base = sgnet::vgg16_baseline_cifar();
  EXPECT_EQ(sgnet::parameter_count(sg), vgg16_count(true));
  EXPECT_EQ(sgnet::parameter_count(base), vgg16_count(false));
  EXPECT_NEAR(static_cast<double>(sgnet::parameter_count(sg)), 40.8e6, 0.02 * 40.8e6);
  EXPECT_NEAR(static_cast<double>(sgnet::parameter_count(base)), 34.0e6, 0.02 * 34.0e6);
}

TEST(Model, BuiltCountMatchesConfigCount) {
  auto cfg = sgnet::tiny_sgnet(3, 7, 16);
  SgnetModel<float> m(cfg, 0);
  std::size_t total = 0;
  for (const auto& p : m.parameters()) total += p.tensor.numel();
  EXPECT_EQ(total, sgnet::parameter_count(cfg));
  EXPECT_EQ(m.parameter_count(), total);
}

TEST(Model, DownsampleMismatchQuotesCounts) {
  auto cfg = sgnet::tiny_sgnet(2, 4, 16);
  cfg.scb_attach = 1;  // two stages remain in the backbone, the SCB has one
  try {
    cfg.validate();
    FAIL();
  } catch (const sgnet::ConfigError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("1 downsampling"), std::string::npos) << msg;
    EXPECT_NE(msg.find("has 2"), std::string::npos) << msg;
  }
}

TEST(Model, AlphaBounds) {
  auto cfg = sgnet::tiny_sgnet(2, 4, 16);
  cfg.alpha = 0.0;
  EXPECT_THROW(cfg.validate(), sgnet::ConfigError);
  cfg.alpha = 1.0;
  EXPECT_THROW(cfg.validate(), sgnet::ConfigError);
  cfg.alpha = 0.5;
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Model, JsonRoundTrip) {
  auto cfg = sgnet::vgg16_sgnet_cifar();
  auto again = SgnetConfig::from_json(cfg.to_json());
  EXPECT_EQ(again.to_json(), cfg.to_json());
  EXPECT_EQ(sgnet::parameter_count(again), sgnet::parameter_count(cfg));
}

TEST(Model, SeededBuildIsBitwiseIdentical) {
  auto cfg = sgnet::tiny_sgnet(2, 4, 16);
  SgnetModel<float> a(cfg, 9), b(cfg, 9), c(cfg, 10);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.parameters().size(); ++i) {
    auto da = a.parameters()[i].tensor.data();
    auto db = b.parameters()[i].tensor.data();
    auto dc = c.parameters()[i].tensor.data();
    ASSERT_TRUE(std::equal(da.begin(), da.end(), db.begin()));
    any_diff |= !std::equal(da.begin(), da.end(), dc.begin());
  }
  EXPECT_TRUE(any_diff);
}

TEST(Model, CifarOutputShapes) {
  // Same branch structure as the VGG config at a fraction of the width.
  auto cfg = sgnet::vgg16_sgnet_cifar();
  cfg.backbone_stages = {{1, 8}, {1, 8}, {1, 8}, {1, 8}, {2, 8}};
  cfg.scb_stages = {{1, 8}};
  cfg.fcb_fc_widths = {16};
  SgnetModel<float> m(cfg, 1);
  auto out = m.forward(random_batch(cfg, 4, 2));
  EXPECT_EQ(out.super_logits.shape(), (sgnet::Shape{4, 20}));
  EXPECT_EQ(out.finer_logits.shape(), (sgnet::Shape{4, 100}));
}

TEST(Model, ConcatenatedFeaturesFeedFinerHead) {
  auto cfg = sgnet::tiny_sgnet(2, 4, 16);
  SgnetModel<float> m(cfg, 1);
  auto out = m.forward(random_batch(cfg, 2, 3));
  ASSERT_TRUE(out.scb_features.defined());
  EXPECT_EQ(out.fcb_features.shape()[1] + out.scb_features.shape()[1], 80u);
  EXPECT_EQ(out.scb_features.shape()[2], out.fcb_features.shape()[2]);
}

TEST(Model, ZerosGiveFiniteLogits) {
  auto cfg = sgnet::tiny_sgnet(2, 4, 16);
  SgnetModel<float> m(cfg, 1);
  auto out = m.forward(Tensor::zeros({3, 3, 16, 16}));
  for (float v : out.finer_logits.data()) EXPECT_TRUE(std::isfinite(v));
  for (float v : out.super_logits.data()) EXPECT_TRUE(std::isfinite(v));
}

TEST(Model, WrongInputSize) {
  SgnetModel<float> m(sgnet::tiny_sgnet(2, 4, 16), 1);
  EXPECT_THROW(m.forward(Tensor::zeros({1, 3, 32, 32})), sgnet::ShapeError);
  EXPECT_THROW(m.forward(Tensor::zeros({1, 1, 16, 16})), sgnet::ShapeError);
}

TEST(Model, ScbParametersReachFinerLogits) {
  auto cfg = sgnet::tiny_sgnet(2, 4, 16);
  SgnetModel<float> m(cfg, 1);
  auto x = random_batch(cfg, 2, 5);
  auto before = m.forward(x).finer_logits;
  auto w = m.parameter("scb.s0.conv0.weight");
  for (auto& v : w.mutable_data()) v *= 1.5f;
  auto after = m.forward(x).finer_logits;
  double diff = 0;
  for (std::size_t i = 0; i < before.numel(); ++i) diff += std::abs(before.data()[i] - after.data()[i]);
  EXPECT_GT(diff, 1e-4);
}

TEST(Model, SuperHeadCanBeSkipped) {
  auto cfg = sgnet::tiny_sgnet(2, 4, 16);
  SgnetModel<float> m(cfg, 1);
  auto x = random_batch(cfg, 2, 5);
  auto full = m.forward(x);
  auto di = m.forward(x, {.super_head = false});
  EXPECT_FALSE(di.super_logits.defined());
  for (std::size_t i = 0; i < full.finer_logits.numel(); ++i) EXPECT_EQ(full.finer_logits.data()[i], di.finer_logits.data()[i]);
}

TEST(Model, CastPreservesValues) {
  SgnetModel<float> m(sgnet::tiny_sgnet(2, 4, 16), 1);
  auto d = m.cast<double>();
  for (std::size_t i = 0; i < m.parameters().size(); ++i) {
    auto a = m.parameters()[i].tensor.data();
    auto b = d.parameters()[i].tensor.data();
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(static_cast<double>(a[k]), b[k]);
  }
}

TEST(CombinedLoss, DirectSubstitution) {
  // Logits chosen so each cross-entropy is known in closed form: a uniform
  // row over K classes gives ln K.
  auto tax = sgnet::Taxonomy::from_groups({{"A", {"a0", "a1"}}, {"B", {"b0", "b1"}}});
  sgnet::BranchOutputs<double> out;
  out.finer_logits = Tensor64::zeros({1, 4});
  out.super_logits = Tensor64::zeros({1, 2});
  std::vector<int> y{2};
  auto l = sgnet::combined_loss(out, y, tax, 0.5);
  EXPECT_NEAR(l.loss_fc, std::log(4.0), 1e-12);
  EXPECT_NEAR(l.loss_sc, std::log(2.0), 1e-12);
  EXPECT_NEAR(l.total, 0.5 * std::log(4.0) + 0.5 * std::log(2.0), 1e-12);
  ASSERT_TRUE(l.alpha.has_value());
  EXPECT_EQ(*l.alpha, 0.5);
}

double direct_ce(const std::vector<double>& logits, std::size_t k, const std::vector<int>& t) {
  std::size_t n = t.size();
  long double acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    long double z = 0;
    for (std::size_t j = 0; j < k; ++j) z += std::exp(static_cast<long double>(logits[i * k + j]));
    acc += std::log(z) - logits[i * k + t[i]];
  }
  return static_cast<double>(acc / n);
}

TEST(CombinedLoss, MatchesIndependentRecompute) {
  const auto& tax = sgnet::cifar100_taxonomy();
  std::mt19937_64 rng(77);
  std::normal_distribution<double> d(0, 3);
  std::uniform_int_distribution<int> lab(0, 99);
  const std::size_t n = 16;
  std::vector<double> fl(n * 100), sl(n * 20);
  for (auto& v : fl) v = d(rng);
  for (auto& v : sl) v = d(rng);
  std::vector<int> y(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = lab(rng);
    ys[i] = tax.finer_to_super(y[i]);
  }
  sgnet::BranchOutputs<double> out;
  out.finer_logits = Tensor64({n, 100}, fl);
  out.super_logits = Tensor64({n, 20}, sl);
  auto l = sgnet::combined_loss(out, y, tax, 0.3);
  double fc = direct_ce(fl, 100, y), sc = direct_ce(sl, 20, ys);
  EXPECT_NEAR(l.loss_fc, fc, 1e-6 * fc);
  EXPECT_NEAR(l.loss_sc, sc, 1e-6 * sc);
  EXPECT_NEAR(l.total, 0.7 * fc + 0.3 * sc, 1e-6 * l.total);
  EXPECT_NEAR(l.loss.item(), l.total, 1e-12);
}

TEST(CombinedLoss, BaselineIsFinerOnly) {
  auto tax = sgnet::Taxonomy::from_groups({{"A", {"a0", "a1"}}, {"B", {"b0"}}});
  sgnet::BranchOutputs<double> out;
  out.finer_logits = Tensor64({2, 3}, {1, 2, 3, 0, 0, 0});
  std::vector<int> y{0, 2};
  auto l = sgnet::combined_loss(out, y, tax, 0.5);
  EXPECT_EQ(l.total, l.loss_fc);
  EXPECT_EQ(l.loss_sc, 0.0);
}

}  // namespace
