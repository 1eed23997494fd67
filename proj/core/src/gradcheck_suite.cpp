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

#include "sgnet/gradcheck_suite.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "sgnet/detection.hpp"
#include "sgnet/errors.hpp"
#include "sgnet/grad_check.hpp"
#include "sgnet/ops.hpp"

namespace sgnet {
namespace {

using Rng = std::mt19937_64;

struct Case {
  std::vector<Tensor64> inputs;
  std::function<Tensor64()> fn;
};

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Tensor64 normal(Rng& rng, Shape shape) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(shape_numel(shape));
  for (auto& x : v) x = d(rng);
  return Tensor64(std::move(shape), std::move(v), true);
}

// Reduces an op output ([N,K] or [N,C,H,W]) to a scalar through a fixed
// random linear map.
std::function<Tensor64(const Tensor64&)> projector(Rng& rng, const Shape& out_shape) {
  if (shape_numel(out_shape) == 1) return [](const Tensor64& t) { return t; };
  if (out_shape.size() != 2 && out_shape.size() != 4) throw ShapeError("cannot project " + shape_str(out_shape));
  const std::size_t cols = shape_numel(out_shape) / out_shape[0];
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> w(cols);
  for (auto& x : w) x = d(rng);
  Tensor64 weight({1, cols}, std::move(w));
  Tensor64 bias = Tensor64::zeros({1});
  return [weight, bias](const Tensor64& t) {
    return ops::sum(ops::linear(t.rank() == 4 ? ops::flatten(t) : t, weight, bias));
  };
}

Case make_case(std::string_view op, Rng& rng) {
  Case c;
  auto finish = [&](Shape out_shape, std::function<Tensor64()> raw) {
    auto proj = projector(rng, out_shape);
    c.fn = [raw = std::move(raw), proj] { return proj(raw()); };
  };

  if (op == "conv2d") {
    const std::size_t n = pick(rng, 1, 2), cin = pick(rng, 1, 3), cout = pick(rng, 1, 3);
    const std::size_t pad = pick(rng, 0, 1), stride = pick(rng, 1, 2), k = pick(rng, 1, 3);
    const std::size_t h = pick(rng, std::max<std::size_t>(k, 3), 6), w = pick(rng, std::max<std::size_t>(k, 3), 6);
    c.inputs = {normal(rng, {n, cin, h, w}), normal(rng, {cout, cin, k, k}), normal(rng, {cout})};
    auto in = c.inputs;
    finish({n, cout, ops::window_extent(h, k, stride, pad), ops::window_extent(w, k, stride, pad)},
           [in, stride, pad] { return ops::conv2d(in[0], in[1], in[2], stride, pad); });
  } else if (op == "maxpool2d") {
    const std::size_t n = pick(rng, 1, 2), ch = pick(rng, 1, 3);
    const std::size_t k = pick(rng, 2, 3), stride = pick(rng, 1, 2);
    const std::size_t h = pick(rng, k, 6), w = pick(rng, k, 6);
    // distinct values spaced far beyond eps so no window has a near tie
    std::vector<double> v(n * ch * h * w);
    std::iota(v.begin(), v.end(), 0.0);
    std::shuffle(v.begin(), v.end(), rng);
    std::uniform_real_distribution<double> jitter(-0.02, 0.02);
    for (auto& x : v) x = 0.1 * x + jitter(rng);
    c.inputs = {Tensor64({n, ch, h, w}, std::move(v), true)};
    auto in = c.inputs;
    finish({n, ch, ops::window_extent(h, k, stride, 0), ops::window_extent(w, k, stride, 0)},
           [in, k, stride] { return ops::maxpool2d(in[0], k, stride); });
  } else if (op == "relu") {
    const std::size_t n = pick(rng, 1, 3), ch = pick(rng, 1, 3), h = pick(rng, 1, 4);
    auto x = normal(rng, {n, ch, h, h});
    for (auto& v : x.mutable_data()) {
      if (std::abs(v) < 0.05) v += v < 0 ? -0.05 : 0.05;
    }
    c.inputs = {x};
    auto in = c.inputs;
    finish(x.shape(), [in] { return ops::relu(in[0]); });
  } else if (op == "linear") {
    const std::size_t n = pick(rng, 1, 4), din = pick(rng, 1, 6), dout = pick(rng, 1, 5);
    c.inputs = {normal(rng, {n, din}), normal(rng, {dout, din}), normal(rng, {dout})};
    auto in = c.inputs;
    finish({n, dout}, [in] { return ops::linear(in[0], in[1], in[2]); });
  } else if (op == "flatten") {
    const std::size_t n = pick(rng, 1, 3), ch = pick(rng, 1, 3), h = pick(rng, 1, 3), w = pick(rng, 1, 3);
    c.inputs = {normal(rng, {n, ch, h, w})};
    auto in = c.inputs;
    finish({n, ch * h * w}, [in] { return ops::flatten(in[0]); });
  } else if (op == "concat_channels") {
    const std::size_t n = pick(rng, 1, 2), c1 = pick(rng, 1, 3), c2 = pick(rng, 1, 3), h = pick(rng, 1, 3);
    c.inputs = {normal(rng, {n, c1, h, h}), normal(rng, {n, c2, h, h})};
    auto in = c.inputs;
    finish({n, c1 + c2, h, h}, [in] { return ops::concat_channels(in[0], in[1]); });
  } else if (op == "slice_channels") {
    const std::size_t n = pick(rng, 1, 2), ch = pick(rng, 1, 5), h = pick(rng, 1, 3);
    const std::size_t b = pick(rng, 0, ch - 1), e = pick(rng, b + 1, ch);
    c.inputs = {normal(rng, {n, ch, h, h})};
    auto in = c.inputs;
    finish({n, e - b, h, h}, [in, b, e] { return ops::slice_channels(in[0], b, e); });
  } else if (op == "slice_columns") {
    const std::size_t n = pick(rng, 1, 4), k = pick(rng, 1, 8);
    const std::size_t b = pick(rng, 0, k - 1), e = pick(rng, b + 1, k);
    c.inputs = {normal(rng, {n, k})};
    auto in = c.inputs;
    finish({n, e - b}, [in, b, e] { return ops::slice_columns(in[0], b, e); });
  } else if (op == "softmax") {
    const std::size_t n = pick(rng, 1, 4), k = pick(rng, 1, 7);
    c.inputs = {normal(rng, {n, k})};
    auto in = c.inputs;
    finish({n, k}, [in] { return ops::softmax(in[0]); });
  } else if (op == "cross_entropy") {
    const std::size_t n = pick(rng, 1, 5), k = pick(rng, 2, 7);
    std::vector<int> targets(n);
    for (auto& t : targets) t = static_cast<int>(pick(rng, 0, k - 1));
    c.inputs = {normal(rng, {n, k})};
    auto in = c.inputs;
    finish({1}, [in, targets] { return ops::cross_entropy(in[0], targets); });
  } else if (op == "scale") {
    const std::size_t n = pick(rng, 1, 4), k = pick(rng, 1, 5);
    const double f = std::normal_distribution<double>(0.0, 2.0)(rng);
    c.inputs = {normal(rng, {n, k})};
    auto in = c.inputs;
    finish({n, k}, [in, f] { return ops::scale(in[0], f); });
  } else if (op == "add") {
    const std::size_t n = pick(rng, 1, 4), k = pick(rng, 1, 5);
    c.inputs = {normal(rng, {n, k}), normal(rng, {n, k})};
    auto in = c.inputs;
    finish({n, k}, [in] { return ops::add(in[0], in[1]); });
  } else if (op == "weighted_sum") {
    const std::size_t n = pick(rng, 1, 4), k = pick(rng, 1, 5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double wa = u(rng), wb = u(rng);
    c.inputs = {normal(rng, {n, k}), normal(rng, {n, k})};
    auto in = c.inputs;
    finish({n, k}, [in, wa, wb] { return ops::weighted_sum(in[0], wa, in[1], wb); });
  } else if (op == "sum") {
    const std::size_t n = pick(rng, 1, 4), k = pick(rng, 1, 5);
    c.inputs = {normal(rng, {n, k})};
    auto in = c.inputs;
    finish({1}, [in] { return ops::sum(in[0]); });
  } else if (op == "sgnet_loss") {
    const auto cfg = gradcheck_sgnet_config();
    auto model = std::make_shared<SgnetModel<double>>(cfg, rng());
    const auto tax = std::make_shared<Taxonomy>(
        Taxonomy::from_groups({{"a", {"a0", "a1"}}, {"b", {"b0", "b1"}}}));
    const std::size_t n = pick(rng, 1, 3);
    std::vector<int> labels(n);
    for (auto& l : labels) l = static_cast<int>(pick(rng, 0, 3));
    const double alpha = std::uniform_real_distribution<double>(0.2, 0.8)(rng);
    c.inputs.push_back(normal(rng, {n, static_cast<std::size_t>(cfg.input_channels),
                                    static_cast<std::size_t>(cfg.input_size), static_cast<std::size_t>(cfg.input_size)}));
    for (auto& p : model->parameters()) {
      // nonzero biases so every bias path carries a generic gradient
      for (auto& v : p.tensor.mutable_data()) v += std::normal_distribution<double>(0.0, 0.1)(rng);
      c.inputs.push_back(p.tensor);
    }
    auto x = c.inputs[0];
    c.fn = [model, tax, x, labels, alpha] { return combined_loss(model->forward(x), labels, *tax, alpha).loss; };
  } else if (op == "detection_loss") {
    const auto cfg = std::make_shared<DetectionHeadConfig>(DetectionHeadConfig::from_taxonomy(
        Taxonomy::from_groups({{"a", {"a0", "a1"}}, {"b", {"b0", "b1", "b2"}}})));
    const std::size_t n = pick(rng, 1, 4);
    std::vector<int> labels(n);
    for (auto& l : labels) l = static_cast<int>(pick(rng, 0, static_cast<std::size_t>(cfg->c_fc - 1)));
    c.inputs = {normal(rng, {n, static_cast<std::size_t>(cfg->c())})};
    auto in = c.inputs;
    c.fn = [in, labels, cfg] { return detection_class_loss(in[0], labels, *cfg).loss; };
  } else {
    throw LookupError("no gradient check defined for op '" + std::string(op) + "'");
  }
  return c;
}

}  // namespace

SgnetConfig gradcheck_sgnet_config() {
  SgnetConfig c;
  c.name = "gradcheck-sgnet";
  c.input_channels = 2;
  c.input_size = 8;
  c.backbone_stages = {{1, 3}, {1, 4}, {2, 4}};
  c.scb_attach = 2;
  c.scb_stages = {{1, 3}};
  c.scb_fc_widths = {};
  c.fcb_fc_widths = {5};
  c.num_finer = 4;
  c.num_super = 2;
  return c;
}

std::vector<std::string> gradcheck_op_names() {
  return {"conv2d",        "maxpool2d", "relu",   "linear",        "flatten",
          "concat_channels", "slice_channels", "slice_columns", "softmax", "cross_entropy",
          "scale",         "add",       "weighted_sum", "sum",     "sgnet_loss",
          "detection_loss"};
}

GradCheckOpReport gradcheck_op(std::string_view op, int cases, std::uint64_t seed, double eps) {
  GradCheckOpReport rep;
  rep.op = std::string(op);
  const auto names = gradcheck_op_names();
  const auto idx = static_cast<std::uint64_t>(std::find(names.begin(), names.end(), op) - names.begin());
  for (int k = 0; k < cases; ++k) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(k)};
    Rng rng(seq);
    auto c = make_case(op, rng);
    const auto r = grad_check(c.fn, c.inputs, eps);
    ++rep.cases;
    rep.elements += r.elements_checked;
    if (rep.worst.empty() || r.max_relative_error > rep.max_relative_error) {
      rep.max_relative_error = r.max_relative_error;
      rep.worst = fmt::format("case {} {} (analytic {:.6g}, numeric {:.6g})", k, r.worst, r.worst_analytic, r.worst_numeric);
    }
  }
  return rep;
}

std::vector<GradCheckOpReport> run_gradcheck_suite(int cases_per_op, std::uint64_t seed, double eps) {
  std::vector<GradCheckOpReport> out;
  for (const auto& op : gradcheck_op_names()) out.push_back(gradcheck_op(op, cases_per_op, seed, eps));
  return out;
}

}  // namespace sgnet
