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

#include "sgnet/data.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <random>

#include <fmt/format.h>

#include "sgnet/errors.hpp"

namespace sgnet {

std::vector<DatasetRecord> parse_cifar100(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % kCifarRecordBytes != 0) {
    const std::size_t whole = bytes.size() / kCifarRecordBytes;
    throw FormatError(fmt::format("truncated record at byte offset {}: file holds {} bytes, not a multiple of {}",
                                  whole * kCifarRecordBytes, bytes.size(), kCifarRecordBytes));
  }
  std::vector<DatasetRecord> out;
  out.reserve(bytes.size() / kCifarRecordBytes);
  for (std::size_t off = 0; off < bytes.size(); off += kCifarRecordBytes) {
    const int coarse = bytes[off];
    const int fine = bytes[off + 1];
    if (coarse >= 20) throw FormatError(fmt::format("coarse label {} >= 20 at byte offset {}", coarse, off));
    if (fine >= kCifarFinerClasses) {
      throw FormatError(fmt::format("fine label {} >= {} at byte offset {}", fine, kCifarFinerClasses, off + 1));
    }
    DatasetRecord r;
    r.coarse_label = coarse;
    r.finer_label = fine;
    r.image.assign(bytes.begin() + static_cast<std::ptrdiff_t>(off + 2),
                   bytes.begin() + static_cast<std::ptrdiff_t>(off + kCifarRecordBytes));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<DatasetRecord> read_cifar100_bin(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LookupError("cannot open CIFAR-100 file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_cifar100(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> serialize_cifar100(std::span<const DatasetRecord> records) {
  std::vector<std::uint8_t> out;
  out.reserve(records.size() * kCifarRecordBytes);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.image.size() != kCifarRecordBytes - 2) {
      throw ValidationError(fmt::format("record {} has {} pixel bytes, CIFAR needs {}", i, r.image.size(),
                                        kCifarRecordBytes - 2));
    }
    if (r.coarse_label < 0 || r.coarse_label >= 256 || r.finer_label < 0 || r.finer_label >= 256) {
      throw ValidationError(fmt::format("record {} has labels outside one byte", i));
    }
    out.push_back(static_cast<std::uint8_t>(r.coarse_label));
    out.push_back(static_cast<std::uint8_t>(r.finer_label));
    out.insert(out.end(), r.image.begin(), r.image.end());
  }
  return out;
}

void write_cifar100_bin(const std::filesystem::path& path, std::span<const DatasetRecord> records) {
  const auto bytes = serialize_cifar100(records);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

ConsistencyReport check_coarse_consistency(std::span<const DatasetRecord> records, const Taxonomy& taxonomy) {
  ConsistencyReport rep;
  rep.total = records.size();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const bool ok = r.finer_label >= 0 && r.finer_label < taxonomy.num_finer() &&
                    taxonomy.finer_to_super(r.finer_label) == r.coarse_label;
    if (ok) {
      ++rep.consistent;
    } else {
      rep.offending.push_back(i);
    }
  }
  rep.consistency = rep.total == 0 ? 1.0 : static_cast<double>(rep.consistent) / static_cast<double>(rep.total);
  return rep;
}

nlohmann::json Normalization::to_json() const { return {{"mean", mean}, {"stddev", stddev}}; }

Normalization Normalization::from_json(const nlohmann::json& j) {
  Normalization n;
  try {
    n.mean = j.at("mean").get<std::vector<double>>();
    n.stddev = j.at("stddev").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed normalization: ") + e.what());
  }
  if (n.mean.size() != n.stddev.size() || n.mean.empty()) {
    throw ConfigError("normalization mean and stddev need the same non-zero length");
  }
  for (double s : n.stddev) {
    if (!(s > 0.0)) throw ConfigError("normalization stddev must be positive");
  }
  return n;
}

Normalization cifar100_normalization() { return {{0.5071, 0.4865, 0.4409}, {0.2673, 0.2564, 0.2762}}; }

Normalization compute_normalization(std::span<const DatasetRecord> records, const ImageGeometry& geometry) {
  if (records.empty()) throw ValidationError("cannot compute normalization of an empty dataset");
  const auto plane = static_cast<std::size_t>(geometry.height) * geometry.width;
  Normalization n;
  n.mean.assign(geometry.channels, 0.0);
  n.stddev.assign(geometry.channels, 0.0);
  std::vector<double> sq(geometry.channels, 0.0);
  for (const auto& r : records) {
    if (r.image.size() != geometry.pixels()) throw ShapeError("record size does not match the image geometry");
    for (int c = 0; c < geometry.channels; ++c) {
      for (std::size_t i = 0; i < plane; ++i) {
        const double v = r.image[c * plane + i] / 255.0;
        n.mean[c] += v;
        sq[c] += v * v;
      }
    }
  }
  const double count = static_cast<double>(records.size() * plane);
  for (int c = 0; c < geometry.channels; ++c) {
    n.mean[c] /= count;
    const double var = std::max(sq[c] / count - n.mean[c] * n.mean[c], 0.0);
    n.stddev[c] = std::max(std::sqrt(var), 1e-6);
  }
  return n;
}

std::vector<std::uint8_t> pad_crop(std::span<const std::uint8_t> image, const ImageGeometry& g, int pad, int dx,
                                   int dy) {
  if (image.size() != g.pixels()) throw ShapeError("image size does not match the geometry");
  if (std::abs(dx) > pad || std::abs(dy) > pad) {
    throw ValidationError(fmt::format("crop offset ({}, {}) exceeds padding {}", dx, dy, pad));
  }
  std::vector<std::uint8_t> out(image.size(), 0);
  const auto plane = static_cast<std::size_t>(g.height) * g.width;
  for (int c = 0; c < g.channels; ++c) {
    for (int y = 0; y < g.height; ++y) {
      const int sy = y + dy;
      if (sy < 0 || sy >= g.height) continue;
      for (int x = 0; x < g.width; ++x) {
        const int sx = x + dx;
        if (sx < 0 || sx >= g.width) continue;
        out[c * plane + y * g.width + x] = image[c * plane + sy * g.width + sx];
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> hflip(std::span<const std::uint8_t> image, const ImageGeometry& g) {
  if (image.size() != g.pixels()) throw ShapeError("image size does not match the geometry");
  std::vector<std::uint8_t> out(image.begin(), image.end());
  for (std::size_t row = 0; row < static_cast<std::size_t>(g.channels) * g.height; ++row) {
    auto first = out.begin() + static_cast<std::ptrdiff_t>(row * g.width);
    std::reverse(first, first + g.width);
  }
  return out;
}

BatchStream::BatchStream(std::span<const DatasetRecord> records, BatchOptions options)
    : records_(records), options_(std::move(options)) {
  if (records_.empty()) throw ValidationError("cannot batch an empty dataset");
  if (options_.batch_size == 0) throw ValidationError("batch size must be positive");
  if (options_.normalization.mean.size() != static_cast<std::size_t>(options_.geometry.channels)) {
    throw ValidationError(fmt::format("normalization has {} channels, images have {}",
                                      options_.normalization.mean.size(), options_.geometry.channels));
  }
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].image.size() != options_.geometry.pixels()) {
      throw ShapeError(fmt::format("record {} has {} pixel values, geometry needs {}", i,
                                   records_[i].image.size(), options_.geometry.pixels()));
    }
  }
}

std::size_t BatchStream::batches_per_epoch() const {
  return (records_.size() + options_.batch_size - 1) / options_.batch_size;
}

std::vector<BatchPlan> BatchStream::epoch(std::size_t index) const {
  std::seed_seq seq{static_cast<std::uint32_t>(options_.seed), static_cast<std::uint32_t>(options_.seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::vector<std::size_t> order(records_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (options_.shuffle) std::shuffle(order.begin(), order.end(), rng);

  std::vector<BatchPlan> plans;
  for (std::size_t start = 0; start < order.size(); start += options_.batch_size) {
    BatchPlan p;
    const std::size_t end = std::min(order.size(), start + options_.batch_size);
    p.indices.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                     order.begin() + static_cast<std::ptrdiff_t>(end));
    p.augment.resize(p.indices.size());
    if (options_.augment) {
      std::uniform_int_distribution<int> offset(-options_.pad, options_.pad);
      for (auto& a : p.augment) {
        a.flip = (rng() & 1u) != 0;
        a.dx = offset(rng);
        a.dy = offset(rng);
      }
    }
    plans.push_back(std::move(p));
  }
  return plans;
}

template <typename T>
BasicTensor<T> images_to_tensor(std::span<const DatasetRecord> records, std::span<const std::size_t> indices,
                                const ImageGeometry& g, const Normalization& norm) {
  const auto plane = static_cast<std::size_t>(g.height) * g.width;
  std::vector<T> data(indices.size() * g.pixels());
  for (std::size_t n = 0; n < indices.size(); ++n) {
    const auto& img = records[indices[n]].image;
    if (img.size() != g.pixels()) throw ShapeError("record size does not match the image geometry");
    for (int c = 0; c < g.channels; ++c) {
      const double mean = norm.mean.at(c);
      const double inv = 1.0 / norm.stddev.at(c);
      for (std::size_t i = 0; i < plane; ++i) {
        data[n * g.pixels() + c * plane + i] = static_cast<T>((img[c * plane + i] / 255.0 - mean) * inv);
      }
    }
  }
  return BasicTensor<T>({indices.size(), static_cast<std::size_t>(g.channels), static_cast<std::size_t>(g.height),
                         static_cast<std::size_t>(g.width)},
                        std::move(data));
}

template <typename T>
Batch<T> BatchStream::materialize(const BatchPlan& plan) const {
  Batch<T> b;
  for (auto i : plan.indices) b.labels.push_back(records_[i].finer_label);
  const bool any_aug = std::any_of(plan.augment.begin(), plan.augment.end(),
                                   [](const Augmentation& a) { return a.flip || a.dx != 0 || a.dy != 0; });
  if (!any_aug) {
    b.images = images_to_tensor<T>(records_, plan.indices, options_.geometry, options_.normalization);
    return b;
  }
  std::vector<DatasetRecord> aug;
  aug.reserve(plan.indices.size());
  for (std::size_t k = 0; k < plan.indices.size(); ++k) {
    const auto& src = records_[plan.indices[k]];
    const auto& a = plan.augment[k];
    DatasetRecord r;
    r.finer_label = src.finer_label;
    r.image = pad_crop(src.image, options_.geometry, options_.pad, a.dx, a.dy);
    if (a.flip) r.image = hflip(r.image, options_.geometry);
    aug.push_back(std::move(r));
  }
  std::vector<std::size_t> idx(aug.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  b.images = images_to_tensor<T>(aug, idx, options_.geometry, options_.normalization);
  return b;
}

template <typename T>
std::vector<Batch<T>> make_batches(std::span<const DatasetRecord> records, const BatchOptions& options,
                                   std::size_t epoch) {
  BatchStream stream(records, options);
  std::vector<Batch<T>> out;
  for (const auto& plan : stream.epoch(epoch)) out.push_back(stream.materialize<T>(plan));
  return out;
}

SubsetResult subset(std::span<const DatasetRecord> records, const Taxonomy& taxonomy,
                    std::span<const std::string> supers, std::size_t per_finer, std::uint64_t seed) {
  if (supers.empty()) throw ValidationError("subset needs at least one super-class");
  if (per_finer == 0) throw ValidationError("per_finer must be positive");
  if (per_finer > static_cast<std::size_t>(kCifarTrainPerClass)) {
    throw ValidationError(fmt::format("per_finer {} exceeds the {} training images available per class", per_finer,
                                      kCifarTrainPerClass));
  }
  std::vector<int> chosen_supers;
  for (const auto& name : supers) {
    const int s = taxonomy.super_index(name);
    if (std::find(chosen_supers.begin(), chosen_supers.end(), s) != chosen_supers.end()) {
      throw ValidationError("super-class '" + name + "' listed twice");
    }
    chosen_supers.push_back(s);
  }
  // finers ordered by their original index
  std::vector<int> finers;
  for (int s : chosen_supers) {
    for (int f : taxonomy.members_of(s)) finers.push_back(f);
  }
  std::sort(finers.begin(), finers.end());
  std::vector<int> remap(taxonomy.num_finer(), -1);
  for (std::size_t i = 0; i < finers.size(); ++i) remap[finers[i]] = static_cast<int>(i);

  std::vector<SuperGroup> groups;
  std::vector<std::string> order;
  for (int s : chosen_supers) {
    SuperGroup g{taxonomy.super_name(s), {}};
    for (int f : taxonomy.members_of(s)) g.finers.push_back(taxonomy.finer_name(f));
    groups.push_back(std::move(g));
  }
  for (int f : finers) order.push_back(taxonomy.finer_name(f));
  SubsetResult res{{}, Taxonomy::from_groups(std::move(groups), std::move(order))};

  std::vector<std::vector<std::size_t>> pools(finers.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const int f = records[i].finer_label;
    if (f >= 0 && f < taxonomy.num_finer() && remap[f] >= 0) pools[remap[f]].push_back(i);
  }
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < pools.size(); ++k) {
    auto& pool = pools[k];
    if (pool.size() < per_finer) {
      throw ValidationError(fmt::format("finer class '{}' has {} records, {} requested", taxonomy.finer_name(finers[k]),
                                        pool.size(), per_finer));
    }
    std::vector<std::size_t> picked;
    std::sample(pool.begin(), pool.end(), std::back_inserter(picked), per_finer, rng);
    for (auto i : picked) {
      DatasetRecord r = records[i];
      r.finer_label = static_cast<int>(k);
      r.coarse_label = res.taxonomy.finer_to_super(static_cast<int>(k));
      res.records.push_back(std::move(r));
    }
  }
  return res;
}

std::pair<std::vector<DatasetRecord>, std::vector<DatasetRecord>> split_per_finer(
    std::span<const DatasetRecord> records, std::size_t holdout_per_finer) {
  std::pair<std::vector<DatasetRecord>, std::vector<DatasetRecord>> out;
  std::vector<std::size_t> seen;
  for (const auto& r : records) {
    const auto f = static_cast<std::size_t>(r.finer_label);
    if (f >= seen.size()) seen.resize(f + 1, 0);
    if (seen[f]++ < holdout_per_finer) {
      out.second.push_back(r);
    } else {
      out.first.push_back(r);
    }
  }
  return out;
}

template Batch<float> BatchStream::materialize<float>(const BatchPlan&) const;
template Batch<double> BatchStream::materialize<double>(const BatchPlan&) const;
template std::vector<Batch<float>> make_batches<float>(std::span<const DatasetRecord>, const BatchOptions&,
                                                       std::size_t);
template std::vector<Batch<double>> make_batches<double>(std::span<const DatasetRecord>, const BatchOptions&,
                                                         std::size_t);
template BasicTensor<float> images_to_tensor<float>(std::span<const DatasetRecord>, std::span<const std::size_t>,
                                                    const ImageGeometry&, const Normalization&);
template BasicTensor<double> images_to_tensor<double>(std::span<const DatasetRecord>, std::span<const std::size_t>,
                                                      const ImageGeometry&, const Normalization&);

}  // namespace sgnet
