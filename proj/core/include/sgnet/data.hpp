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
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgnet/taxonomy.hpp"
#include "sgnet/tensor.hpp"

namespace sgnet {

struct ImageGeometry {
  int channels = 3;
  int height = 32;
  int width = 32;
  std::size_t pixels() const { return static_cast<std::size_t>(channels) * height * width; }
  bool operator==(const ImageGeometry&) const = default;
};

/// One image with its labels. Pixels are channel planes, each row-major.
/// `coarse_label` is the label stored in a CIFAR file, or -1 when absent.
struct DatasetRecord {
  std::vector<std::uint8_t> image;
  int finer_label = 0;
  int coarse_label = -1;
};

inline constexpr std::size_t kCifarRecordBytes = 3074;
inline constexpr int kCifarFinerClasses = 100;
inline constexpr int kCifarTrainPerClass = 500;

/// CIFAR-100 binary layout: [coarse][fine][R plane][G plane][B plane].
std::vector<DatasetRecord> parse_cifar100(std::span<const std::uint8_t> bytes);
std::vector<DatasetRecord> read_cifar100_bin(const std::filesystem::path& path);
std::vector<std::uint8_t> serialize_cifar100(std::span<const DatasetRecord> records);
void write_cifar100_bin(const std::filesystem::path& path, std::span<const DatasetRecord> records);

struct ConsistencyReport {
  std::size_t total = 0;
  std::size_t consistent = 0;
  double consistency = 1.0;  // 1.0 for an empty list
  std::vector<std::size_t> offending;
};

/// Compares each record's file coarse label with the taxonomy parent of its
/// fine label.
ConsistencyReport check_coarse_consistency(std::span<const DatasetRecord> records, const Taxonomy& taxonomy);

/// Per-channel affine map from [0,1] pixel values: (x - mean) / stddev.
struct Normalization {
  std::vector<double> mean;
  std::vector<double> stddev;

  nlohmann::json to_json() const;
  static Normalization from_json(const nlohmann::json& j);
};

/// Training-split statistics of CIFAR-100.
Normalization cifar100_normalization();
Normalization compute_normalization(std::span<const DatasetRecord> records, const ImageGeometry& geometry);

/// Zero-filled padding by `pad`, then a crop at offset (dx, dy) in
/// [-pad, pad]; (0, 0) is the identity.
std::vector<std::uint8_t> pad_crop(std::span<const std::uint8_t> image, const ImageGeometry& geometry, int pad,
                                   int dx, int dy);
/// Reverses each row.
std::vector<std::uint8_t> hflip(std::span<const std::uint8_t> image, const ImageGeometry& geometry);

struct BatchOptions {
  std::size_t batch_size = 128;
  bool shuffle = true;
  bool augment = false;  // pad-4 random crop + horizontal flip
  int pad = 4;
  std::uint64_t seed = 0;
  ImageGeometry geometry;
  Normalization normalization = cifar100_normalization();
};

struct Augmentation {
  bool flip = false;
  int dx = 0;
  int dy = 0;
};

/// Which records form one batch and how each is augmented.
struct BatchPlan {
  std::vector<std::size_t> indices;
  std::vector<Augmentation> augment;
};

template <typename T>
struct Batch {
  BasicTensor<T> images;  // [N, C, H, W], normalized
  std::vector<int> labels;
};

/// Seeded epoch iteration. Each epoch is a permutation of the records split
/// into consecutive batches; the short final batch is kept. The plan for an
/// epoch depends only on (seed, epoch).
class BatchStream {
 public:
  BatchStream(std::span<const DatasetRecord> records, BatchOptions options);

  std::size_t batches_per_epoch() const;
  std::vector<BatchPlan> epoch(std::size_t index) const;

  template <typename T>
  Batch<T> materialize(const BatchPlan& plan) const;

  const BatchOptions& options() const { return options_; }
  std::size_t size() const { return records_.size(); }

 private:
  std::span<const DatasetRecord> records_;
  BatchOptions options_;
};

template <typename T>
std::vector<Batch<T>> make_batches(std::span<const DatasetRecord> records, const BatchOptions& options,
                                   std::size_t epoch = 0);

/// Normalized images of the given records in the given order.
template <typename T>
BasicTensor<T> images_to_tensor(std::span<const DatasetRecord> records, std::span<const std::size_t> indices,
                                const ImageGeometry& geometry, const Normalization& normalization);

struct SubsetResult {
  std::vector<DatasetRecord> records;
  Taxonomy taxonomy;
};

/// Seeded sample of `per_finer` records for each finer class under the
/// named supers, relabelled densely against the returned sub-taxonomy.
SubsetResult subset(std::span<const DatasetRecord> records, const Taxonomy& taxonomy,
                    std::span<const std::string> supers, std::size_t per_finer, std::uint64_t seed);

struct SynthSpec {
  int n_super = 2;
  int finer_per_super = 2;
  int samples_per_finer = 50;
  double super_separation = 1.0;
  double finer_separation = 0.5;
  double noise = 0.0;  // stddev of additive Gaussian noise, in template units
  int image_size = 16;
  int channels = 3;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  static SynthSpec from_json(const nlohmann::json& j);
};

struct SynthDataset {
  std::vector<DatasetRecord> records;
  Taxonomy taxonomy;
  ImageGeometry geometry;
  std::vector<std::vector<double>> templates;  // per finer class, pixel values in [0,1]
};

/// Each finer class renders a template: a blocky +-1 pattern shared by all
/// finers of its super scaled by super_separation, plus a finer-specific
/// pattern scaled by finer_separation, mapped to pixels as
/// 0.5 + 0.25 * (pattern + noise), clamped and quantized to 8 bits.
/// Records are ordered by finer class.
SynthDataset synth_hier_dataset(const SynthSpec& spec);

/// Holds out the first `holdout_per_finer` records of each finer class.
std::pair<std::vector<DatasetRecord>, std::vector<DatasetRecord>> split_per_finer(
    std::span<const DatasetRecord> records, std::size_t holdout_per_finer);

}  // namespace sgnet
