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

#include "sgnet/model.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "sgnet/errors.hpp"
#include "sgnet/ops.hpp"

namespace sgnet {
namespace {

constexpr int kKernel = 3;

int conv_depth(std::span<const StageSpec> stages) {
  int depth = 0;
  for (const auto& s : stages) depth += s.conv_count;
  return depth;
}

int downsampled(int size, Downsample d) {
  // max pool 2/2 floors, stride-2 3x3 conv with padding 1 ceils
  return d == Downsample::kMaxPool ? size / 2 : (size - 1) / 2 + 1;
}

std::size_t conv_params(int cin, int cout) {
  return static_cast<std::size_t>(cout) * cin * kKernel * kKernel + cout;
}

std::size_t stage_params(std::span<const StageSpec> stages, int cin, Downsample d) {
  std::size_t total = 0;
  for (const auto& s : stages) {
    for (int i = 0; i < s.conv_count; ++i) {
      total += conv_params(cin, s.channels);
      cin = s.channels;
    }
    if (d == Downsample::kStridedConv) total += conv_params(cin, cin);
  }
  return total;
}

std::size_t head_params(int din, std::span<const int> widths, int classes) {
  std::size_t total = 0;
  for (int w : widths) {
    total += static_cast<std::size_t>(din) * w + w;
    din = w;
  }
  return total + static_cast<std::size_t>(din) * classes + classes;
}

int final_size(const SgnetConfig& cfg) {
  int s = cfg.input_size;
  for (std::size_t i = 0; i < cfg.backbone_stages.size(); ++i) s = downsampled(s, cfg.downsample);
  return s;
}

int channels_after(std::span<const StageSpec> stages, int cin) {
  return stages.empty() ? cin : stages.back().channels;
}

}  // namespace

void SgnetConfig::validate() const {
  if (input_channels < 1 || input_size < 1) throw ConfigError("input channels and size must be positive");
  if (backbone_stages.empty()) throw ConfigError("backbone needs at least one stage");
  for (const auto* list : {&backbone_stages, &scb_stages}) {
    for (const auto& s : *list) {
      if (s.conv_count < 1 || s.channels < 1) {
        throw ConfigError(fmt::format("stage ({}, {}) needs conv_count >= 1 and channels >= 1",
                                      s.conv_count, s.channels));
      }
    }
  }
  for (const auto* list : {&scb_fc_widths, &fcb_fc_widths}) {
    for (int w : *list) {
      if (w < 1) throw ConfigError("fully connected widths must be positive");
    }
  }
  if (num_finer < 1) throw ConfigError("num_finer must be positive");
  if (final_size(*this) < 1) {
    throw ConfigError(fmt::format("input size {} vanishes after {} downsampling layers", input_size,
                                  backbone_stages.size()));
  }
  if (!has_scb()) return;

  if (num_super < 1) throw ConfigError("num_super must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError(fmt::format("alpha must lie in (0,1), got {}", alpha));
  const int remaining = static_cast<int>(backbone_stages.size()) - scb_attach;
  if (scb_attach < 0 || remaining < 1) {
    throw ConfigError(fmt::format("scb_attach {} must leave at least one backbone stage (backbone has {})",
                                  scb_attach, backbone_stages.size()));
  }
  if (static_cast<int>(scb_stages.size()) != remaining) {
    throw ConfigError(fmt::format(
        "SCB has {} downsampling layers but the backbone has {} after the attach point; they must match",
        scb_stages.size(), remaining));
  }
  const int scb_depth = conv_depth(scb_stages);
  const int fcb_depth = conv_depth(std::span(backbone_stages).subspan(scb_attach));
  if (scb_depth >= fcb_depth) {
    throw ConfigError(fmt::format(
        "SCB must be shallower than the backbone after the attach point ({} convs vs {})", scb_depth,
        fcb_depth));
  }
}

nlohmann::json SgnetConfig::to_json() const {
  auto stages = [](const std::vector<StageSpec>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& s : v) a.push_back({s.conv_count, s.channels});
    return a;
  };
  return {{"name", name},
          {"input_channels", input_channels},
          {"input_size", input_size},
          {"backbone_stages", stages(backbone_stages)},
          {"scb_attach", scb_attach},
          {"scb_stages", stages(scb_stages)},
          {"scb_fc_widths", scb_fc_widths},
          {"fcb_fc_widths", fcb_fc_widths},
          {"num_finer", num_finer},
          {"num_super", num_super},
          {"alpha", alpha},
          {"downsample", downsample == Downsample::kMaxPool ? "max_pool" : "strided_conv"}};
}

SgnetConfig SgnetConfig::from_json(const nlohmann::json& j) {
  SgnetConfig c;
  try {
    if (!j.is_object()) throw ConfigError("architecture must be a JSON object");
    auto stages = [](const nlohmann::json& a) {
      std::vector<StageSpec> out;
      for (const auto& s : a) {
        if (s.is_array() && s.size() == 2) {
          out.push_back({s[0].get<int>(), s[1].get<int>()});
        } else {
          out.push_back({s.at("conv_count").get<int>(), s.at("channels").get<int>()});
        }
      }
      return out;
    };
    c.name = j.value("name", c.name);
    c.input_channels = j.value("input_channels", c.input_channels);
    c.input_size = j.value("input_size", c.input_size);
    c.backbone_stages = stages(j.at("backbone_stages"));
    c.scb_attach = j.value("scb_attach", 0);
    if (j.contains("scb_stages")) c.scb_stages = stages(j.at("scb_stages"));
    c.scb_fc_widths = j.value("scb_fc_widths", std::vector<int>{});
    c.fcb_fc_widths = j.value("fcb_fc_widths", std::vector<int>{});
    c.num_finer = j.value("num_finer", c.num_finer);
    c.num_super = j.value("num_super", c.num_super);
    c.alpha = j.value("alpha", c.alpha);
    const auto ds = j.value("downsample", std::string("max_pool"));
    if (ds == "max_pool") {
      c.downsample = Downsample::kMaxPool;
    } else if (ds == "strided_conv") {
      c.downsample = Downsample::kStridedConv;
    } else {
      throw ConfigError("downsample must be \"max_pool\" or \"strided_conv\", got \"" + ds + "\"");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed architecture: ") + e.what());
  }
  return c;
}

std::size_t parameter_count(const SgnetConfig& cfg) {
  cfg.validate();
  const int s = final_size(cfg);
  const auto spatial = static_cast<std::size_t>(s) * s;
  std::size_t total = stage_params(cfg.backbone_stages, cfg.input_channels, cfg.downsample);
  int fcb_channels = channels_after(cfg.backbone_stages, cfg.input_channels);
  int concat_channels = fcb_channels;
  if (cfg.has_scb()) {
    const int attach_channels =
        channels_after(std::span(cfg.backbone_stages).first(cfg.scb_attach), cfg.input_channels);
    total += stage_params(cfg.scb_stages, attach_channels, cfg.downsample);
    const int scb_channels = channels_after(cfg.scb_stages, attach_channels);
    concat_channels += scb_channels;
    total += head_params(static_cast<int>(scb_channels * spatial), cfg.scb_fc_widths, cfg.num_super);
  }
  total += head_params(static_cast<int>(concat_channels * spatial), cfg.fcb_fc_widths, cfg.num_finer);
  return total;
}

SgnetConfig vgg16_baseline_cifar() {
  SgnetConfig c;
  c.name = "vgg16-baseline-cifar";
  c.backbone_stages = {{2, 64}, {2, 128}, {3, 256}, {3, 512}, {3, 512}};
  c.fcb_fc_widths = {4096, 4096};
  c.num_finer = 100;
  c.num_super = 20;
  return c;
}

SgnetConfig vgg16_sgnet_cifar() {
  SgnetConfig c = vgg16_baseline_cifar();
  c.name = "vgg16-sgnet-cifar";
  c.scb_attach = 4;
  c.scb_stages = {{2, 512}};
  return c;
}

SgnetConfig tiny_sgnet(int num_super, int num_finer, int input_size) {
  SgnetConfig c;
  c.name = "tiny-sgnet";
  c.input_size = input_size;
  c.backbone_stages = {{1, 16}, {1, 32}, {2, 48}};
  c.scb_attach = 2;
  c.scb_stages = {{1, 32}};
  c.fcb_fc_widths = {64};
  c.num_finer = num_finer;
  c.num_super = num_super;
  return c;
}

SgnetConfig builtin_architecture(std::string_view name) {
  if (name == "vgg16-sgnet-cifar") return vgg16_sgnet_cifar();
  if (name == "vgg16-baseline-cifar") return vgg16_baseline_cifar();
  throw ConfigError("unknown builtin architecture '" + std::string(name) + "'");
}

template <typename T>
SgnetModel<T>::SgnetModel(SgnetConfig cfg, std::uint64_t seed) : config_(std::move(cfg)) {
  config_.validate();
  build(seed, true);
}

template <typename T>
SgnetModel<T>::SgnetModel(SgnetConfig cfg, NoInit) : config_(std::move(cfg)) {
  config_.validate();
  build(0, false);
}

template <typename T>
void SgnetModel<T>::build(std::uint64_t seed, bool initialize) {
  std::mt19937_64 rng(seed);
  // Fan-in scaled uniform weights, zero biases. Layers feeding a ReLU use
  // bound sqrt(6/fan_in); classifier outputs use sqrt(3/fan_in).
  auto init = [&](BasicTensor<T>& w, std::size_t fan_in, bool output_layer) {
    if (!initialize) return;
    const double bound = std::sqrt((output_layer ? 3.0 : 6.0) / static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (auto& v : w.mutable_data()) v = static_cast<T>(dist(rng));
  };
  auto register_param = [&](const std::string& name, const BasicTensor<T>& t) {
    params_.push_back({name, t});
  };
  auto conv = [&](const std::string& name, int cin, int cout, std::size_t stride) {
    Conv c;
    c.weight = BasicTensor<T>::zeros({static_cast<std::size_t>(cout), static_cast<std::size_t>(cin),
                                      kKernel, kKernel},
                                     true);
    c.bias = BasicTensor<T>::zeros({static_cast<std::size_t>(cout)}, true);
    c.stride = stride;
    c.padding = 1;
    init(c.weight, static_cast<std::size_t>(cin) * kKernel * kKernel, false);
    register_param(name + ".weight", c.weight);
    register_param(name + ".bias", c.bias);
    return c;
  };
  auto dense = [&](const std::string& name, int din, int dout, bool output_layer) {
    Dense d;
    d.weight = BasicTensor<T>::zeros({static_cast<std::size_t>(dout), static_cast<std::size_t>(din)}, true);
    d.bias = BasicTensor<T>::zeros({static_cast<std::size_t>(dout)}, true);
    init(d.weight, static_cast<std::size_t>(din), output_layer);
    register_param(name + ".weight", d.weight);
    register_param(name + ".bias", d.bias);
    return d;
  };
  auto stages = [&](const std::string& prefix, const std::vector<StageSpec>& specs, int cin,
                    std::size_t offset, std::vector<Stage>& out) {
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const auto tag = fmt::format("{}.s{}", prefix, offset + i);
      Stage st;
      for (int j = 0; j < specs[i].conv_count; ++j) {
        st.convs.push_back(conv(fmt::format("{}.conv{}", tag, j), cin, specs[i].channels, 1));
        cin = specs[i].channels;
      }
      if (config_.downsample == Downsample::kStridedConv) st.down = conv(tag + ".down", cin, cin, 2);
      out.push_back(std::move(st));
    }
    return cin;
  };
  auto head = [&](const std::string& prefix, int din, const std::vector<int>& widths, int classes,
                  std::vector<Dense>& out) {
    for (std::size_t i = 0; i < widths.size(); ++i) {
      out.push_back(dense(fmt::format("{}.fc{}", prefix, i), din, widths[i], false));
      din = widths[i];
    }
    out.push_back(dense(fmt::format("{}.fc{}", prefix, widths.size()), din, classes, true));
  };

  const auto& cfg = config_;
  const int spatial = final_size(cfg) * final_size(cfg);
  std::vector<StageSpec> front(cfg.backbone_stages.begin(), cfg.backbone_stages.begin() + cfg.scb_attach);
  std::vector<StageSpec> back(cfg.backbone_stages.begin() + cfg.scb_attach, cfg.backbone_stages.end());
  const int attach_channels = stages("backbone", front, cfg.input_channels, 0, backbone_);
  const int fcb_channels = stages("backbone", back, attach_channels, front.size(), backbone_);
  int concat = fcb_channels;
  if (cfg.has_scb()) {
    const int scb_channels = stages("scb", cfg.scb_stages, attach_channels, 0, scb_);
    head("scb_head", scb_channels * spatial, cfg.scb_fc_widths, cfg.num_super, scb_head_);
    concat += scb_channels;
  }
  head("fcb_head", concat * spatial, cfg.fcb_fc_widths, cfg.num_finer, fcb_head_);
}

template <typename T>
BasicTensor<T> SgnetModel<T>::parameter(std::string_view name) const {
  for (const auto& p : params_) {
    if (p.name == name) return p.tensor;
  }
  throw LookupError("unknown parameter '" + std::string(name) + "'");
}

template <typename T>
std::size_t SgnetModel<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.tensor.numel();
  return n;
}

template <typename T>
BasicTensor<T> SgnetModel<T>::run_stage(const Stage& stage, BasicTensor<T> x) const {
  for (const auto& c : stage.convs) x = ops::relu(ops::conv2d(x, c.weight, c.bias, c.stride, c.padding));
  if (stage.down) return ops::relu(ops::conv2d(x, stage.down->weight, stage.down->bias, 2, 1));
  return ops::maxpool2d(x, 2, 2);
}

template <typename T>
BasicTensor<T> SgnetModel<T>::run_head(const std::vector<Dense>& head, BasicTensor<T> x) const {
  for (std::size_t i = 0; i < head.size(); ++i) {
    x = ops::linear(x, head[i].weight, head[i].bias);
    if (i + 1 < head.size()) x = ops::relu(x);
  }
  return x;
}

template <typename T>
BranchOutputs<T> SgnetModel<T>::forward(const BasicTensor<T>& batch, ForwardOptions options) const {
  const auto& s = batch.shape();
  const auto c = static_cast<std::size_t>(config_.input_channels);
  const auto sz = static_cast<std::size_t>(config_.input_size);
  if (s.size() != 4 || s[1] != c || s[2] != sz || s[3] != sz) {
    throw ShapeError(fmt::format("model expects input [N,{},{},{}], got {}", c, sz, sz, shape_str(s)));
  }
  BranchOutputs<T> out;
  BasicTensor<T> x = batch;
  BasicTensor<T> attach_out;
  for (std::size_t i = 0; i < backbone_.size(); ++i) {
    if (static_cast<int>(i) == config_.scb_attach) attach_out = x;
    x = run_stage(backbone_[i], x);
  }
  out.fcb_features = x;
  BasicTensor<T> finer_in = x;
  if (config_.has_scb()) {
    BasicTensor<T> y = attach_out;
    for (const auto& st : scb_) y = run_stage(st, y);
    out.scb_features = y;
    finer_in = ops::concat_channels(out.fcb_features, out.scb_features);
    if (options.super_head) out.super_logits = run_head(scb_head_, ops::flatten(y));
  }
  out.finer_logits = run_head(fcb_head_, ops::flatten(finer_in));
  return out;
}

template <typename T>
template <typename U>
SgnetModel<U> SgnetModel<T>::cast() const {
  SgnetModel<U> copy(config_, typename SgnetModel<U>::NoInit{});
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto src = params_[i].tensor.data();
    auto dst = copy.params_[i].tensor.mutable_data();
    for (std::size_t j = 0; j < src.size(); ++j) dst[j] = static_cast<U>(src[j]);
  }
  return copy;
}

template <typename T>
void SgnetModel<T>::load_parameters(const std::vector<NamedTensor<T>>& values) {
  if (values.size() != params_.size()) {
    throw ShapeError(fmt::format("checkpoint holds {} tensors but architecture '{}' has {}", values.size(),
                                 config_.name, params_.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto& p = params_[i];
    const auto& v = values[i];
    if (v.name != p.name) {
      throw ShapeError(fmt::format("tensor #{} is '{}' but the architecture expects '{}'", i, v.name, p.name));
    }
    if (v.tensor.shape() != p.tensor.shape()) {
      throw ShapeError(fmt::format("tensor '{}' has shape {} but the architecture expects {}", p.name,
                                   shape_str(v.tensor.shape()), shape_str(p.tensor.shape())));
    }
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto src = values[i].tensor.data();
    std::copy(src.begin(), src.end(), params_[i].tensor.mutable_data().begin());
  }
}

template <typename T>
LossBreakdown<T> combined_loss(const BranchOutputs<T>& out, std::span<const int> finer_labels,
                               const Taxonomy& taxonomy, double alpha) {
  if (out.finer_logits.dim(1) != static_cast<std::size_t>(taxonomy.num_finer())) {
    throw ShapeError(fmt::format("finer logits have {} columns, taxonomy has {} finer classes",
                                 out.finer_logits.dim(1), taxonomy.num_finer()));
  }
  LossBreakdown<T> lb;
  auto fc = ops::cross_entropy(out.finer_logits, finer_labels);
  lb.loss_fc = static_cast<double>(fc.item());
  if (!out.super_logits.defined()) {
    lb.loss = fc;
    lb.total = lb.loss_fc;
    return lb;
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError(fmt::format("alpha must lie in (0,1), got {}", alpha));
  }
  if (out.super_logits.dim(1) != static_cast<std::size_t>(taxonomy.num_super())) {
    throw ShapeError(fmt::format("super logits have {} columns, taxonomy has {} super-classes",
                                 out.super_logits.dim(1), taxonomy.num_super()));
  }
  const auto super_labels = taxonomy.derive_super_labels(finer_labels);
  auto sc = ops::cross_entropy(out.super_logits, super_labels);
  lb.loss_sc = static_cast<double>(sc.item());
  lb.loss = ops::weighted_sum(fc, static_cast<T>(1.0 - alpha), sc, static_cast<T>(alpha));
  lb.total = static_cast<double>(lb.loss.item());
  lb.alpha = alpha;
  return lb;
}

template class SgnetModel<float>;
template class SgnetModel<double>;
template SgnetModel<double> SgnetModel<float>::cast<double>() const;
template SgnetModel<float> SgnetModel<double>::cast<float>() const;
template SgnetModel<float> SgnetModel<float>::cast<float>() const;
template SgnetModel<double> SgnetModel<double>::cast<double>() const;
template LossBreakdown<float> combined_loss(const BranchOutputs<float>&, std::span<const int>,
                                            const Taxonomy&, double);
template LossBreakdown<double> combined_loss(const BranchOutputs<double>&, std::span<const int>,
                                             const Taxonomy&, double);

}  // namespace sgnet
