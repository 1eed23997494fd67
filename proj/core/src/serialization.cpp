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

#include "sgnet/serialization.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "sgnet/errors.hpp"

namespace sgnet {
namespace {

template <typename T>
struct DtypeInfo;
template <>
struct DtypeInfo<float> {
  using Bits = std::uint32_t;
  static constexpr const char* name = "f32";
};
template <>
struct DtypeInfo<double> {
  using Bits = std::uint64_t;
  static constexpr const char* name = "f64";
};

std::filesystem::path with_suffix(const std::filesystem::path& prefix, const char* suffix) {
  return prefix.string() + suffix;
}

bool has_space(const std::string& s) {
  return s.empty() || s.find_first_of(" \t\r\n") != std::string::npos;
}

Shape parse_shape(const std::string& text, const std::string& where) {
  Shape shape;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    try {
      std::size_t used = 0;
      const auto d = std::stoull(part, &used);
      if (used != part.size() || d == 0) throw std::invalid_argument(part);
      shape.push_back(d);
    } catch (const std::exception&) {
      throw FormatError(fmt::format("{}: bad shape '{}'", where, text));
    }
  }
  if (shape.empty()) throw FormatError(fmt::format("{}: empty shape", where));
  return shape;
}

}  // namespace

template <typename T>
void save_tensors(const std::filesystem::path& prefix, const std::vector<NamedTensor<T>>& tensors,
                  const std::map<std::string, std::string>& metadata) {
  using Bits = typename DtypeInfo<T>::Bits;
  std::ofstream bin(with_suffix(prefix, ".bin"), std::ios::binary);
  std::ofstream man(with_suffix(prefix, ".manifest"));
  if (!bin || !man) throw FormatError("cannot open tensor bundle for writing: " + prefix.string());

  man << "format sgnet-tensors\n";
  man << "version " << kTensorFormatVersion << "\n";
  for (const auto& [key, value] : metadata) {
    if (has_space(key) || value.find('\n') != std::string::npos) {
      throw FormatError("metadata keys must be single tokens and values single lines: " + key);
    }
    man << "meta " << key << " " << value << "\n";
  }

  std::uint64_t offset = 0;
  std::vector<char> buffer;
  for (const auto& [name, tensor] : tensors) {
    if (has_space(name)) throw FormatError("tensor names must not contain whitespace: '" + name + "'");
    const auto& shape = tensor.shape();
    std::string dims;
    for (std::size_t i = 0; i < shape.size(); ++i) dims += (i ? "x" : "") + std::to_string(shape[i]);
    const std::uint64_t nbytes = tensor.numel() * sizeof(T);
    man << "tensor " << name << " " << DtypeInfo<T>::name << " " << dims << " " << offset << " "
        << nbytes << "\n";

    buffer.resize(nbytes);
    std::size_t pos = 0;
    for (T v : tensor.data()) {
      const auto bits = std::bit_cast<Bits>(v);
      for (std::size_t b = 0; b < sizeof(Bits); ++b) {
        buffer[pos++] = static_cast<char>((bits >> (8 * b)) & 0xFFu);
      }
    }
    bin.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    offset += nbytes;
  }
  if (!bin || !man) throw FormatError("failed writing tensor bundle: " + prefix.string());
}

template <typename T>
std::vector<NamedTensor<T>> load_tensors(const std::filesystem::path& prefix,
                                         TensorManifest* manifest) {
  using Bits = typename DtypeInfo<T>::Bits;
  const auto man_path = with_suffix(prefix, ".manifest");
  const auto bin_path = with_suffix(prefix, ".bin");
  std::ifstream man(man_path);
  if (!man) throw FormatError("cannot open manifest " + man_path.string());
  std::ifstream bin(bin_path, std::ios::binary);
  if (!bin) throw FormatError("cannot open tensor data " + bin_path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());

  TensorManifest info;
  std::vector<NamedTensor<T>> out;
  std::string line;
  int lineno = 0;
  bool saw_format = false;
  while (std::getline(man, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto where = fmt::format("{}:{}", man_path.string(), lineno);
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "format") {
      std::string f;
      ls >> f;
      if (f != "sgnet-tensors") throw FormatError(where + ": unknown format '" + f + "'");
      saw_format = true;
    } else if (kind == "version") {
      ls >> info.version;
      if (info.version != kTensorFormatVersion) {
        throw FormatError(fmt::format("{}: unsupported version {}", where, info.version));
      }
    } else if (kind == "meta") {
      std::string key;
      ls >> key;
      std::string value;
      std::getline(ls, value);
      if (!value.empty() && value.front() == ' ') value.erase(0, 1);
      info.metadata[key] = value;
    } else if (kind == "tensor") {
      std::string name, dtype, dims;
      std::uint64_t offset = 0, nbytes = 0;
      if (!(ls >> name >> dtype >> dims >> offset >> nbytes)) {
        throw FormatError(where + ": malformed tensor line");
      }
      if (dtype != DtypeInfo<T>::name) {
        throw FormatError(fmt::format("{}: tensor '{}' has dtype {}, expected {}", where, name,
                                      dtype, DtypeInfo<T>::name));
      }
      auto shape = parse_shape(dims, where);
      const auto n = shape_numel(shape);
      if (nbytes != n * sizeof(T)) {
        throw FormatError(fmt::format("{}: byte length {} inconsistent with shape {}", where,
                                      nbytes, dims));
      }
      if (offset + nbytes > bytes.size()) {
        throw FormatError(fmt::format("{}: tensor '{}' at byte offset {} runs past end of {}",
                                      where, name, offset, bin_path.string()));
      }
      std::vector<T> values(n);
      const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
      for (std::size_t i = 0; i < n; ++i) {
        Bits bits = 0;
        for (std::size_t b = 0; b < sizeof(Bits); ++b) {
          bits |= static_cast<Bits>(p[i * sizeof(Bits) + b]) << (8 * b);
        }
        values[i] = std::bit_cast<T>(bits);
      }
      out.push_back({name, BasicTensor<T>(std::move(shape), std::move(values))});
    } else {
      throw FormatError(where + ": unknown record '" + kind + "'");
    }
  }
  if (!saw_format) throw FormatError(man_path.string() + ": missing format header");
  if (manifest) *manifest = std::move(info);
  return out;
}

template void save_tensors<float>(const std::filesystem::path&, const std::vector<NamedTensor<float>>&,
                                  const std::map<std::string, std::string>&);
template void save_tensors<double>(const std::filesystem::path&,
                                   const std::vector<NamedTensor<double>>&,
                                   const std::map<std::string, std::string>&);
template std::vector<NamedTensor<float>> load_tensors<float>(const std::filesystem::path&,
                                                             TensorManifest*);
template std::vector<NamedTensor<double>> load_tensors<double>(const std::filesystem::path&,
                                                               TensorManifest*);

}  // namespace sgnet
