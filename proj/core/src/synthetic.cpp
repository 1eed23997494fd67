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

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "sgnet/data.hpp"
#include "sgnet/errors.hpp"

namespace sgnet {
namespace {

constexpr int kBlocks = 4;  // pattern grid per channel

// A kBlocks x kBlocks grid of +-1 per channel, upsampled to the image.
std::vector<double> blocky_pattern(std::mt19937_64& rng, int channels, int size) {
  std::vector<double> cells(static_cast<std::size_t>(channels) * kBlocks * kBlocks);
  for (auto& c : cells) c = (rng() & 1u) ? 1.0 : -1.0;
  std::vector<double> out(static_cast<std::size_t>(channels) * size * size);
  for (int c = 0; c < channels; ++c) {
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        const int by = y * kBlocks / size;
        const int bx = x * kBlocks / size;
        out[(static_cast<std::size_t>(c) * size + y) * size + x] = cells[(c * kBlocks + by) * kBlocks + bx];
      }
    }
  }
  return out;
}

}  // namespace

nlohmann::json SynthSpec::to_json() const {
  return {{"n_super", n_super},
          {"finer_per_super", finer_per_super},
          {"samples_per_finer", samples_per_finer},
          {"super_separation", super_separation},
          {"finer_separation", finer_separation},
          {"noise", noise},
          {"image_size", image_size},
          {"channels", channels},
          {"seed", seed}};
}

SynthSpec SynthSpec::from_json(const nlohmann::json& j) {
  SynthSpec s;
  try {
    s.n_super = j.value("n_super", s.n_super);
    s.finer_per_super = j.value("finer_per_super", s.finer_per_super);
    s.samples_per_finer = j.value("samples_per_finer", s.samples_per_finer);
    s.super_separation = j.value("super_separation", s.super_separation);
    s.finer_separation = j.value("finer_separation", s.finer_separation);
    s.noise = j.value("noise", s.noise);
    s.image_size = j.value("image_size", s.image_size);
    s.channels = j.value("channels", s.channels);
    s.seed = j.value("seed", s.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed synthetic dataset spec: ") + e.what());
  }
  return s;
}

SynthDataset synth_hier_dataset(const SynthSpec& spec) {
  if (spec.n_super < 1 || spec.finer_per_super < 1 || spec.samples_per_finer < 1) {
    throw ValidationError("synthetic dataset needs positive super, finer and sample counts");
  }
  if (!(spec.super_separation > 0.0) || !(spec.finer_separation > 0.0)) {
    throw ValidationError("separations must be positive");
  }
  if (spec.noise < 0.0) throw ValidationError("noise must be non-negative");
  if (spec.image_size < kBlocks || spec.channels < 1) {
    throw ValidationError(fmt::format("image size must be at least {}", kBlocks));
  }

  SynthDataset ds;
  ds.geometry = {spec.channels, spec.image_size, spec.image_size};
  std::vector<SuperGroup> groups;
  for (int s = 0; s < spec.n_super; ++s) {
    SuperGroup g{fmt::format("super{}", s), {}};
    for (int f = 0; f < spec.finer_per_super; ++f) g.finers.push_back(fmt::format("s{}f{}", s, f));
    groups.push_back(std::move(g));
  }
  ds.taxonomy = Taxonomy::from_groups(std::move(groups));

  std::mt19937_64 rng(spec.seed);
  for (int s = 0; s < spec.n_super; ++s) {
    const auto shared = blocky_pattern(rng, spec.channels, spec.image_size);
    for (int f = 0; f < spec.finer_per_super; ++f) {
      const auto own = blocky_pattern(rng, spec.channels, spec.image_size);
      std::vector<double> t(shared.size());
      for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] = spec.super_separation * shared[i] + spec.finer_separation * own[i];
      }
      ds.templates.push_back(std::move(t));
    }
  }

  std::normal_distribution<double> gauss(0.0, 1.0);
  const int num_finer = spec.n_super * spec.finer_per_super;
  for (int f = 0; f < num_finer; ++f) {
    for (int k = 0; k < spec.samples_per_finer; ++k) {
      DatasetRecord r;
      r.finer_label = f;
      r.coarse_label = ds.taxonomy.finer_to_super(f);
      r.image.resize(ds.geometry.pixels());
      for (std::size_t i = 0; i < r.image.size(); ++i) {
        const double n = spec.noise > 0.0 ? spec.noise * gauss(rng) : 0.0;
        const double v = std::clamp(0.5 + 0.25 * (ds.templates[f][i] + n), 0.0, 1.0);
        r.image[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
      }
      ds.records.push_back(std::move(r));
    }
  }
  for (auto& t : ds.templates) {
    for (auto& v : t) v = std::clamp(0.5 + 0.25 * v, 0.0, 1.0);
  }
  return ds;
}

}  // namespace sgnet
