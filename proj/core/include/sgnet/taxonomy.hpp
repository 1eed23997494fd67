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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace sgnet {

/// A super-class and the names of its finer classes, as written in a
/// taxonomy document.
struct SuperGroup {
  std::string name;
  std::vector<std::string> finers;
};

/// Two-level class hierarchy. Every finer class has exactly one parent
/// super-class and every super-class has at least one finer class.
/// Immutable once built.
class Taxonomy {
 public:
  Taxonomy() = default;

  /// Validates and indexes the groups. Super indices follow group order.
  /// Finer indices follow `finer_order` when given (it must list exactly the
  /// finers of all groups), otherwise first appearance in the groups.
  static Taxonomy from_groups(std::vector<SuperGroup> groups,
                              std::optional<std::vector<std::string>> finer_order = std::nullopt);

  int num_super() const { return static_cast<int>(super_names_.size()); }
  int num_finer() const { return static_cast<int>(finer_names_.size()); }
  const std::vector<std::string>& super_names() const { return super_names_; }
  const std::vector<std::string>& finer_names() const { return finer_names_; }
  const std::string& super_name(int super) const;
  const std::string& finer_name(int finer) const;

  int super_index(std::string_view name) const;
  int finer_index(std::string_view name) const;

  int finer_to_super(int finer) const;
  int finer_to_super(std::string_view finer) const;

  /// Finer indices whose parent is `super`, ascending.
  std::span<const int> members_of(int super) const;

  /// Elementwise parent lookup.
  std::vector<int> derive_super_labels(std::span<const int> finer_labels) const;

  /// Groups in super order with finers in finer-index order.
  std::vector<SuperGroup> groups() const;

  /// Document form: {"supers": [{"name", "finers"}...], "finer_order": [...]}.
  nlohmann::json to_json() const;

 private:
  std::vector<std::string> super_names_;
  std::vector<std::string> finer_names_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> members_;
  std::unordered_map<std::string, int> super_lookup_;
  std::unordered_map<std::string, int> finer_lookup_;
};

/// Parses a taxonomy document (JSON). Accepts either an object with a
/// "supers" array (and optional "finer_order") or a bare array of super
/// objects. Only two levels are allowed.
Taxonomy load_taxonomy(std::string_view document);
Taxonomy load_taxonomy(const nlohmann::json& document);
Taxonomy load_taxonomy_file(const std::filesystem::path& path);

/// Builtin hierarchies: "cifar100" and "coco".
const Taxonomy& builtin_taxonomy(std::string_view name);
const Taxonomy& cifar100_taxonomy();
const Taxonomy& coco_taxonomy();
std::vector<std::string> builtin_taxonomy_names();

/// Where the CIFAR-100 label table in the original grouping spells a finer
/// class differently from the dataset's meta file: (table, dataset) pairs.
/// The builtin uses the dataset spelling so labels join against data files.
std::span<const std::pair<std::string_view, std::string_view>> cifar100_table_spellings();

}  // namespace sgnet
