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

#include <benchmark/benchmark.h>

#include "sgnet/inference.hpp"
#include "sgnet/model.hpp"
#include "sgnet/ops.hpp"
#include "sgnet/taxonomy.hpp"

namespace {

using sgnet::Tensor;

Tensor random_tensor(sgnet::Shape shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> d;
  std::vector<float> v(sgnet::shape_numel(shape));
  for (auto& x : v) x = d(rng);
  return Tensor(std::move(shape), std::move(v));
}

void BM_Conv2d(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto hw = static_cast<std::size_t>(state.range(1));
  auto x = random_tensor({8, c, hw, hw}, 1);
  auto w = random_tensor({c, c, 3, 3}, 2);
  auto b = random_tensor({c}, 3);
  sgnet::NoGradGuard guard;
  for (auto _ : state) benchmark::DoNotOptimize(sgnet::ops::conv2d(x, w, b, 1, 1));
  state.SetItemsProcessed(state.iterations() * 8 * c * c * hw * hw * 9);
}
BENCHMARK(BM_Conv2d)->Args({16, 32})->Args({64, 16})->Args({128, 8})->Unit(benchmark::kMillisecond);

void BM_Conv2dBackward(benchmark::State& state) {
  auto x = random_tensor({8, 32, 16, 16}, 1);
  auto w = random_tensor({32, 32, 3, 3}, 2);
  auto b = random_tensor({32}, 3);
  w.set_requires_grad(true);
  for (auto _ : state) {
    auto loss = sgnet::ops::sum(sgnet::ops::conv2d(x, w, b, 1, 1));
    sgnet::backward(loss);
    w.zero_grad();
  }
}
BENCHMARK(BM_Conv2dBackward)->Unit(benchmark::kMillisecond);

// Forward pass of the small CIFAR-shaped network, with and without the
// super-class head.
void BM_SgnetForward(benchmark::State& state) {
  auto cfg = sgnet::tiny_sgnet(20, 100, 32);
  sgnet::SgnetModel<float> model(cfg, 0);
  auto x = random_tensor({32, 3, 32, 32}, 4);
  const bool super_head = state.range(0) != 0;
  sgnet::NoGradGuard guard;
  for (auto _ : state) benchmark::DoNotOptimize(model.forward(x, {.super_head = super_head}));
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_SgnetForward)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_PredictTsi(benchmark::State& state) {
  const auto& t = sgnet::cifar100_taxonomy();
  auto s = random_tensor({256, 20}, 5);
  auto f = random_tensor({256, 100}, 6);
  for (auto _ : state) benchmark::DoNotOptimize(sgnet::predict_batch(s, f, sgnet::InferenceMode::kTsi, t));
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_PredictTsi);

void BM_PredictDi(benchmark::State& state) {
  const auto& t = sgnet::cifar100_taxonomy();
  auto f = random_tensor({256, 100}, 6);
  for (auto _ : state) benchmark::DoNotOptimize(sgnet::predict_batch(Tensor(), f, sgnet::InferenceMode::kDi, t));
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_PredictDi);

}  // namespace

BENCHMARK_MAIN();
