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

#include "sgnet/detection.hpp"

#include <random>

#include <fmt/format.h>

#include "sgnet/errors.hpp"
#include "sgnet/ops.hpp"
#include "sgnet/schedule.hpp"

namespace sgnet {
namespace {

void check_length(std::size_t got, const DetectionHeadConfig& cfg) {
  if (got != static_cast<std::size_t>(cfg.c())) {
    throw ValidationError(fmt::format("score vector has length {}, expected C = {} ({} + {})", got, cfg.c(), cfg.c_sc,
                                      cfg.c_fc));
  }
}

}  // namespace

DetectionHeadConfig DetectionHeadConfig::from_taxonomy(const Taxonomy& base) {
  std::vector<SuperGroup> groups{{kBackgroundName, {kBackgroundName}}};
  for (auto& g : base.groups()) {
    if (g.name == kBackgroundName) throw ValidationError("taxonomy already has a super-class named 'background'");
    groups.push_back(std::move(g));
  }
  std::vector<std::string> order{kBackgroundName};
  for (const auto& f : base.finer_names()) {
    if (f == kBackgroundName) throw ValidationError("taxonomy already has a finer class named 'background'");
    order.push_back(f);
  }
  DetectionHeadConfig cfg;
  cfg.taxonomy = Taxonomy::from_groups(std::move(groups), std::move(order));
  cfg.c_sc = cfg.taxonomy.num_super();
  cfg.c_fc = cfg.taxonomy.num_finer();
  return cfg;
}

template <typename T>
std::pair<std::vector<T>, std::vector<T>> split_scores(std::span<const T> v, const DetectionHeadConfig& cfg) {
  check_length(v.size(), cfg);
  const auto sc = static_cast<std::ptrdiff_t>(cfg.c_sc);
  return {std::vector<T>(v.begin(), v.begin() + sc), std::vector<T>(v.begin() + sc, v.end())};
}

template <typename T>
std::vector<T> concat_scores(std::span<const T> v_sc, std::span<const T> v_fc, const DetectionHeadConfig& cfg) {
  if (v_sc.size() != static_cast<std::size_t>(cfg.c_sc) || v_fc.size() != static_cast<std::size_t>(cfg.c_fc)) {
    throw ValidationError(fmt::format("segments have lengths {} and {}, expected {} and {}", v_sc.size(),
                                      v_fc.size(), cfg.c_sc, cfg.c_fc));
  }
  std::vector<T> v(v_sc.begin(), v_sc.end());
  v.insert(v.end(), v_fc.begin(), v_fc.end());
  return v;
}

template <typename T>
LossBreakdown<T> detection_class_loss(const BasicTensor<T>& scores, std::span<const int> gt_finer,
                                      const DetectionHeadConfig& cfg) {
  if (scores.rank() != 2) throw ShapeError("detection scores must be [N, C]");
  check_length(scores.dim(1), cfg);
  for (std::size_t i = 0; i < gt_finer.size(); ++i) {
    if (gt_finer[i] < 0 || gt_finer[i] >= cfg.c_fc) {
      throw ValidationError(
          fmt::format("finer label {} at position {} outside [0,{})", gt_finer[i], i, cfg.c_fc));
    }
  }
  const auto gt_super = cfg.taxonomy.derive_super_labels(gt_finer);
  const auto sc = static_cast<std::size_t>(cfg.c_sc);
  auto l_sc = ops::cross_entropy(ops::slice_columns(scores, 0, sc), gt_super);
  auto l_fc = ops::cross_entropy(ops::slice_columns(scores, sc, sc + cfg.c_fc), gt_finer);
  LossBreakdown<T> lb;
  lb.loss_sc = static_cast<double>(l_sc.item());
  lb.loss_fc = static_cast<double>(l_fc.item());
  lb.loss = ops::add(l_sc, l_fc);
  lb.total = static_cast<double>(lb.loss.item());
  return lb;
}

template <typename T>
Prediction roi_predict(std::span<const T> v, const DetectionHeadConfig& cfg, InferenceMode mode) {
  check_length(v.size(), cfg);
  const auto v_sc = v.first(cfg.c_sc);
  const auto v_fc = v.subspan(cfg.c_sc);
  return mode == InferenceMode::kTsi ? predict_tsi(v_sc, v_fc, cfg.taxonomy) : predict_di(v_fc, cfg.taxonomy);
}

RoiHarness synth_roi_harness(const DetectionHeadConfig& cfg, std::size_t n, double noise, std::uint64_t seed,
                             double margin, double feature_scale) {
  if (n == 0) throw ValidationError("harness needs at least one RoI");
  if (noise < 0.0) throw ValidationError("noise must be non-negative");
  RoiHarness h;
  h.feature_dim = static_cast<std::size_t>(cfg.c_fc);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> label(0, cfg.c_fc - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    RoiSample s;
    s.finer_label = label(rng);
    s.super_label = cfg.taxonomy.finer_to_super(s.finer_label);
    s.features.assign(h.feature_dim, 0.0);
    s.features[s.finer_label] = feature_scale;
    if (noise > 0.0) {
      for (auto& x : s.features) x += noise * gauss(rng);
    }
    // reference scorer: finer score = margin * x_f, super score = margin * sum of its members
    std::vector<double> v(cfg.c(), 0.0);
    for (int f = 0; f < cfg.c_fc; ++f) {
      const double x = margin * s.features[f] / feature_scale;
      v[cfg.c_sc + f] = x;
      v[cfg.taxonomy.finer_to_super(f)] += x;
    }
    h.scores.push_back(std::move(v));
    h.samples.push_back(std::move(s));
  }
  return h;
}

RoiTrainResult train_roi_scorer(const RoiHarness& harness, const DetectionHeadConfig& cfg, int steps, double lr,
                                double momentum) {
  const std::size_t n = harness.samples.size();
  const std::size_t d = harness.feature_dim;
  std::vector<double> feats;
  std::vector<int> labels;
  for (const auto& s : harness.samples) {
    feats.insert(feats.end(), s.features.begin(), s.features.end());
    labels.push_back(s.finer_label);
  }
  const Tensor64 x({n, d}, std::move(feats));
  RoiTrainResult r;
  r.weight = Tensor64::zeros({static_cast<std::size_t>(cfg.c()), d}, true);
  r.bias = Tensor64::zeros({static_cast<std::size_t>(cfg.c())}, true);
  SgdOptimizer<double> opt({{"weight", r.weight}, {"bias", r.bias}}, momentum, 0.0);
  for (int step = 0; step < steps; ++step) {
    auto lb = detection_class_loss(ops::linear(x, r.weight, r.bias), labels, cfg);
    r.losses.push_back(lb.total);
    backward(lb.loss);
    opt.step(lr);
  }
  NoGradGuard guard;
  r.scores = ops::linear(x, r.weight, r.bias);
  return r;
}

#define SGNET_INSTANTIATE(T)                                                                                          \
  template std::pair<std::vector<T>, std::vector<T>> split_scores<T>(std::span<const T>, const DetectionHeadConfig&); \
  template std::vector<T> concat_scores<T>(std::span<const T>, std::span<const T>, const DetectionHeadConfig&);      \
  template LossBreakdown<T> detection_class_loss<T>(const BasicTensor<T>&, std::span<const int>,                     \
                                                    const DetectionHeadConfig&);                                     \
  template Prediction roi_predict<T>(std::span<const T>, const DetectionHeadConfig&, InferenceMode);

SGNET_INSTANTIATE(float)
SGNET_INSTANTIATE(double)

}  // namespace sgnet
