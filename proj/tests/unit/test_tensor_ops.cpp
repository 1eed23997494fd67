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
#include "sgnet/ops.hpp"
#include "sgnet/tensor.hpp"

namespace {

using sgnet::Shape;
using sgnet::Tensor;
using sgnet::Tensor64;
namespace ops = sgnet::ops;

Tensor random_tensor(Shape shape, std::mt19937_64& rng, bool grad = false) {
  std::normal_distribution<float> d(0.0f, 1.0f);
  std::vector<float> v(sgnet::shape_numel(shape));
  for (auto& x : v) x = d(rng);
  return Tensor(std::move(shape), std::move(v), grad);
}

// input [N,C,H,W] flat index
std::size_t at4(const Shape& s, std::size_t n, std::size_t c, std::size_t h, std::size_t w) {
  return ((n * s[1] + c) * s[2] + h) * s[3] + w;
}

TEST(Conv2d, ScalarKernelScalesInput) {
  Tensor x({1, 1, 3, 3}, std::vector<float>(9, 1.0f));
  Tensor w({1, 1, 1, 1}, {2.0f});
  Tensor b({1}, {0.0f});
  auto y = ops::conv2d(x, w, b, 1, 0);
  ASSERT_EQ(y.shape(), (Shape{1, 1, 3, 3}));
  for (float v : y.data()) EXPECT_EQ(v, 2.0f);
}

TEST(Conv2d, AllOnesKernelSumsWindow) {
  Tensor x({1, 1, 3, 3}, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  Tensor w({1, 1, 3, 3}, std::vector<float>(9, 1.0f));
  Tensor b({1}, {0.0f});
  auto y = ops::conv2d(x, w, b, 1, 0);
  ASSERT_EQ(y.shape(), (Shape{1, 1, 1, 1}));
  EXPECT_EQ(y.item(), 45.0f);
}

TEST(Conv2d, MatchesNestedLoopOracle) {
  std::mt19937_64 rng(11);
  auto x = random_tensor({2, 3, 8, 8}, rng);
  auto w = random_tensor({4, 3, 3, 3}, rng);
  auto b = random_tensor({4}, rng);
  const std::size_t stride = 2, pad = 1;
  auto y = ops::conv2d(x, w, b, stride, pad);
  ASSERT_EQ(y.shape(), (Shape{2, 4, 4, 4}));

  const auto& xs = x.shape();
  const auto& ws = w.shape();
  const auto& ys = y.shape();
  for (std::size_t n = 0; n < 2; ++n)
    for (std::size_t co = 0; co < 4; ++co)
      for (std::size_t oh = 0; oh < 4; ++oh)
        for (std::size_t ow = 0; ow < 4; ++ow) {
          double acc = b.data()[co];
          for (std::size_t ci = 0; ci < 3; ++ci)
            for (std::size_t kh = 0; kh < 3; ++kh)
              for (std::size_t kw = 0; kw < 3; ++kw) {
                long ih = static_cast<long>(oh * stride + kh) - static_cast<long>(pad);
                long iw = static_cast<long>(ow * stride + kw) - static_cast<long>(pad);
                if (ih < 0 || iw < 0 || ih >= 8 || iw >= 8) continue;
                acc += static_cast<double>(x.data()[at4(xs, n, ci, ih, iw)]) * w.data()[at4(ws, co, ci, kh, kw)];
              }
          EXPECT_NEAR(y.data()[at4(ys, n, co, oh, ow)], acc, 1e-5);
        }
}

TEST(Conv2d, ChannelMismatchNamesBothShapes) {
  Tensor x = Tensor::zeros({1, 3, 4, 4});
  Tensor w = Tensor::zeros({2, 2, 3, 3});
  Tensor b = Tensor::zeros({2});
  try {
    ops::conv2d(x, w, b, 1, 1);
    FAIL() << "expected ShapeError";
  } catch (const sgnet::ShapeError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("[1,3,4,4]"), std::string::npos) << msg;
    EXPECT_NE(msg.find("[2,2,3,3]"), std::string::npos) << msg;
  }
}

TEST(MaxPool, WindowMax) {
  Tensor x({1, 1, 2, 2}, {1, 2, 3, 4});
  auto y = ops::maxpool2d(x, 2, 2);
  ASSERT_EQ(y.shape(), (Shape{1, 1, 1, 1}));
  EXPECT_EQ(y.item(), 4.0f);
}

TEST(MaxPool, IdentityDiagonal) {
  std::vector<float> v(16, 0.0f);
  for (int i = 0; i < 4; ++i) v[i * 4 + i] = 1.0f;
  auto y = ops::maxpool2d(Tensor({1, 1, 4, 4}, v), 2, 2);
  ASSERT_EQ(y.shape(), (Shape{1, 1, 2, 2}));
  // only the two diagonal windows hold a one
  EXPECT_EQ(std::vector<float>(y.data().begin(), y.data().end()), (std::vector<float>{1, 0, 0, 1}));
}

TEST(MaxPool, OneHotPerWindow) {
  std::vector<float> v(16, 0.0f);
  v[0 * 4 + 1] = v[1 * 4 + 2] = v[3 * 4 + 0] = v[2 * 4 + 3] = 1.0f;
  auto y = ops::maxpool2d(Tensor({1, 1, 4, 4}, v), 2, 2);
  for (float f : y.data()) EXPECT_EQ(f, 1.0f);
}

TEST(MaxPool, MatchesBruteForce) {
  std::mt19937_64 rng(3);
  auto x = random_tensor({2, 3, 32, 32}, rng);
  auto y = ops::maxpool2d(x, 2, 2);
  ASSERT_EQ(y.shape(), (Shape{2, 3, 16, 16}));
  const auto& xs = x.shape();
  for (std::size_t n = 0; n < 2; ++n)
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j) {
          float m = -INFINITY;
          for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t bb = 0; bb < 2; ++bb) m = std::max(m, x.data()[at4(xs, n, c, 2 * i + a, 2 * j + bb)]);
          EXPECT_EQ(y.data()[at4(y.shape(), n, c, i, j)], m);
        }
}

TEST(MaxPool, KernelLargerThanInput) {
  EXPECT_THROW(ops::maxpool2d(Tensor::zeros({1, 1, 2, 2}), 3, 1), sgnet::ShapeError);
}

TEST(Relu, Definition) {
  auto y = ops::relu(Tensor({3}, {-1, 0, 2}));
  EXPECT_EQ(std::vector<float>(y.data().begin(), y.data().end()), (std::vector<float>{0, 0, 2}));
}

TEST(Linear, IdentityWeight) {
  std::mt19937_64 rng(5);
  auto x = random_tensor({3, 4}, rng);
  std::vector<float> eye(16, 0.0f);
  for (int i = 0; i < 4; ++i) eye[i * 5] = 1.0f;
  auto y = ops::linear(x, Tensor({4, 4}, eye), Tensor::zeros({4}));
  for (std::size_t i = 0; i < x.numel(); ++i) EXPECT_EQ(y.data()[i], x.data()[i]);
}

TEST(Linear, MatchesTripleLoop) {
  std::mt19937_64 rng(6);
  auto x = random_tensor({5, 7}, rng);
  auto w = random_tensor({4, 7}, rng);
  auto b = random_tensor({4}, rng);
  auto y = ops::linear(x, w, b);
  ASSERT_EQ(y.shape(), (Shape{5, 4}));
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t o = 0; o < 4; ++o) {
      double acc = b.data()[o];
      for (std::size_t k = 0; k < 7; ++k) acc += static_cast<double>(x.data()[i * 7 + k]) * w.data()[o * 7 + k];
      EXPECT_NEAR(y.data()[i * 4 + o], acc, 1e-6);
    }
}

TEST(Linear, DimensionMismatch) {
  EXPECT_THROW(ops::linear(Tensor::zeros({2, 3}), Tensor::zeros({4, 5}), Tensor::zeros({4})), sgnet::ShapeError);
}

TEST(Concat, ChannelCountsAdd) {
  auto y = ops::concat_channels(Tensor::zeros({2, 512, 1, 1}), Tensor::zeros({2, 512, 1, 1}));
  EXPECT_EQ(y.shape(), (Shape{2, 1024, 1, 1}));
}

TEST(Concat, SliceRecoversFirstOperand) {
  std::mt19937_64 rng(8);
  auto a = random_tensor({2, 3, 4, 4}, rng);
  auto b = random_tensor({2, 5, 4, 4}, rng);
  auto c = ops::concat_channels(a, b);
  auto back_a = ops::slice_channels(c, 0, 3);
  auto back_b = ops::slice_channels(c, 3, 8);
  ASSERT_EQ(back_a.shape(), a.shape());
  for (std::size_t i = 0; i < a.numel(); ++i) EXPECT_EQ(back_a.data()[i], a.data()[i]);
  for (std::size_t i = 0; i < b.numel(); ++i) EXPECT_EQ(back_b.data()[i], b.data()[i]);
}

TEST(Concat, BackwardOfSumIsOnes) {
  std::mt19937_64 rng(9);
  auto a = random_tensor({2, 3, 2, 2}, rng, true);
  auto b = random_tensor({2, 1, 2, 2}, rng, true);
  sgnet::backward(ops::sum(ops::concat_channels(a, b)));
  for (float g : a.grad()) EXPECT_EQ(g, 1.0f);
  for (float g : b.grad()) EXPECT_EQ(g, 1.0f);
}

TEST(Concat, SpatialMismatch) {
  EXPECT_THROW(ops::concat_channels(Tensor::zeros({1, 2, 4, 4}), Tensor::zeros({1, 2, 2, 2})), sgnet::ShapeError);
  EXPECT_THROW(ops::concat_channels(Tensor::zeros({1, 2, 4, 4}), Tensor::zeros({2, 2, 4, 4})), sgnet::ShapeError);
}

TEST(CrossEntropy, UniformIsLogK) {
  std::vector<int> t{17};
  auto loss = ops::cross_entropy(Tensor::zeros({1, 100}), t);
  EXPECT_NEAR(loss.item(), std::log(100.0), 1e-5);
}

TEST(CrossEntropy, SaturatedCorrectIsZero) {
  std::vector<float> v(10, 0.0f);
  v[3] = 1000.0f;
  std::vector<int> t{3};
  auto loss = ops::cross_entropy(Tensor({1, 10}, v), t);
  EXPECT_TRUE(std::isfinite(loss.item()));
  EXPECT_LT(loss.item(), 1e-6);
}

TEST(CrossEntropy, MatchesDirectFormula) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> d(0.0, 2.0);
  std::vector<double> v(8 * 20);
  for (auto& x : v) x = d(rng);
  std::vector<int> t{0, 5, 19, 3, 3, 11, 7, 2};
  auto loss = ops::cross_entropy(Tensor64({8, 20}, v), t);
  long double ref = 0;
  for (int i = 0; i < 8; ++i) {
    long double z = 0;
    for (int k = 0; k < 20; ++k) z += std::exp(static_cast<long double>(v[i * 20 + k]));
    ref += std::log(z) - v[i * 20 + t[i]];
  }
  ref /= 8;
  EXPECT_NEAR(loss.item(), static_cast<double>(ref), 1e-6);
}

TEST(CrossEntropy, TargetOutOfRange) {
  std::vector<int> t{4};
  EXPECT_THROW(ops::cross_entropy(Tensor::zeros({1, 4}), t), sgnet::ValidationError);
  std::vector<int> neg{-1};
  EXPECT_THROW(ops::cross_entropy(Tensor::zeros({1, 4}), neg), sgnet::ValidationError);
}

TEST(Softmax, RowsSumToOne) {
  std::mt19937_64 rng(1);
  auto p = ops::softmax(random_tensor({4, 9}, rng));
  for (int i = 0; i < 4; ++i) {
    double s = 0;
    for (int k = 0; k < 9; ++k) s += p.data()[i * 9 + k];
    EXPECT_NEAR(s, 1.0, 1e-6);
  }
}

TEST(WeightedSum, Values) {
  auto y = ops::weighted_sum(Tensor({2}, {2.0f, 4.0f}), 0.5f, Tensor({2}, {1.0f, 1.0f}), 0.5f);
  EXPECT_FLOAT_EQ(y.data()[0], 1.5f);
  EXPECT_FLOAT_EQ(y.data()[1], 2.5f);
}

}  // namespace
