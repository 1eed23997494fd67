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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sgnet/tensor.hpp"

namespace sgnet {

template <typename T>
struct NamedTensor {
  std::string name;
  BasicTensor<T> tensor;
};

/// Contents of a tensor bundle besides the arrays themselves.
struct TensorManifest {
  int version = 1;
  std::map<std::string, std::string> metadata;
};

// A bundle is two files next to each other:
//   <prefix>.bin       concatenated little-endian arrays
//   <prefix>.manifest  text, one "tensor <name> <dtype> <d0xd1x..> <offset> <bytes>"
//                      line per array plus "meta <key> <value>" lines
inline constexpr int kTensorFormatVersion = 1;

template <typename T>
void save_tensors(const std::filesystem::path& prefix, const std::vector<NamedTensor<T>>& tensors,
                  const std::map<std::string, std::string>& metadata = {});

template <typename T>
std::vector<NamedTensor<T>> load_tensors(const std::filesystem::path& prefix,
                                         TensorManifest* manifest = nullptr);

}  // namespace sgnet
