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

#include "sgnet/taxonomy.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>

#include "sgnet/errors.hpp"

namespace sgnet {

Taxonomy Taxonomy::from_groups(std::vector<SuperGroup> groups,
                               std::optional<std::vector<std::string>> finer_order) {
  if (groups.empty()) throw ValidationError("taxonomy has no super-classes");
  Taxonomy t;
  std::unordered_map<std::string, std::string> owner;
  std::vector<std::string> appearance;
  for (const auto& g : groups) {
    if (g.name.empty()) throw ValidationError("super-class with an empty name");
    if (!t.super_lookup_.emplace(g.name, static_cast<int>(t.super_names_.size())).second) {
      throw ValidationError(fmt::format("duplicate super-class name '{}'", g.name));
    }
    t.super_names_.push_back(g.name);
    if (g.finers.empty()) throw ValidationError(fmt::format("super-class '{}' has no finer classes", g.name));
    std::unordered_set<std::string> local;
    for (const auto& f : g.finers) {
      if (f.empty()) throw ValidationError(fmt::format("empty finer class name under '{}'", g.name));
      if (!local.insert(f).second) {
        throw ValidationError(fmt::format("duplicate finer class '{}' under '{}'", f, g.name));
      }
      auto [it, fresh] = owner.emplace(f, g.name);
      if (!fresh) throw ValidationError(fmt::format("{} assigned to two super-classes", f));
      appearance.push_back(f);
    }
  }

  if (finer_order) {
    if (finer_order->size() != appearance.size()) {
      throw ValidationError(fmt::format("finer_order lists {} names but the groups hold {}",
                                        finer_order->size(), appearance.size()));
    }
    std::unordered_set<std::string> listed;
    for (const auto& f : *finer_order) {
      if (!owner.count(f)) {
        throw ValidationError(fmt::format("finer_order names '{}' which no super-class contains", f));
      }
      if (!listed.insert(f).second) throw ValidationError(fmt::format("finer_order repeats '{}'", f));
    }
    t.finer_names_ = std::move(*finer_order);
  } else {
    t.finer_names_ = std::move(appearance);
  }

  t.parent_.resize(t.finer_names_.size());
  t.members_.resize(t.super_names_.size());
  for (std::size_t i = 0; i < t.finer_names_.size(); ++i) {
    const auto& f = t.finer_names_[i];
    t.finer_lookup_.emplace(f, static_cast<int>(i));
    const int s = t.super_lookup_.at(owner.at(f));
    t.parent_[i] = s;
    t.members_[s].push_back(static_cast<int>(i));
  }
  return t;
}

const std::string& Taxonomy::super_name(int super) const {
  if (super < 0 || super >= num_super()) throw LookupError(fmt::format("unknown super-class index {}", super));
  return super_names_[super];
}

const std::string& Taxonomy::finer_name(int finer) const {
  if (finer < 0 || finer >= num_finer()) throw LookupError(fmt::format("unknown finer class index {}", finer));
  return finer_names_[finer];
}

int Taxonomy::super_index(std::string_view name) const {
  auto it = super_lookup_.find(std::string(name));
  if (it == super_lookup_.end()) throw LookupError(fmt::format("unknown super-class '{}'", name));
  return it->second;
}

int Taxonomy::finer_index(std::string_view name) const {
  auto it = finer_lookup_.find(std::string(name));
  if (it == finer_lookup_.end()) throw LookupError(fmt::format("unknown finer class '{}'", name));
  return it->second;
}

int Taxonomy::finer_to_super(int finer) const {
  if (finer < 0 || finer >= num_finer()) throw LookupError(fmt::format("unknown finer class index {}", finer));
  return parent_[finer];
}

int Taxonomy::finer_to_super(std::string_view finer) const {
  return parent_[finer_index(finer)];
}

std::span<const int> Taxonomy::members_of(int super) const {
  if (super < 0 || super >= num_super()) throw LookupError(fmt::format("unknown super-class index {}", super));
  return members_[super];
}

std::vector<int> Taxonomy::derive_super_labels(std::span<const int> finer_labels) const {
  std::vector<int> out(finer_labels.size());
  for (std::size_t i = 0; i < finer_labels.size(); ++i) {
    const int f = finer_labels[i];
    if (f < 0 || f >= num_finer()) {
      throw ValidationError(fmt::format("finer label {} at position {} outside [0,{})", f, i, num_finer()));
    }
    out[i] = parent_[f];
  }
  return out;
}

std::vector<SuperGroup> Taxonomy::groups() const {
  std::vector<SuperGroup> out;
  for (int s = 0; s < num_super(); ++s) {
    SuperGroup g{super_names_[s], {}};
    for (int f : members_[s]) g.finers.push_back(finer_names_[f]);
    out.push_back(std::move(g));
  }
  return out;
}

nlohmann::json Taxonomy::to_json() const {
  nlohmann::json supers = nlohmann::json::array();
  for (const auto& g : groups()) supers.push_back({{"name", g.name}, {"finers", g.finers}});
  return {{"supers", supers}, {"finer_order", finer_names_}};
}

Taxonomy load_taxonomy(const nlohmann::json& doc) {
  const nlohmann::json* supers = &doc;
  std::optional<std::vector<std::string>> order;
  if (doc.is_object()) {
    if (!doc.contains("supers")) throw ValidationError("taxonomy document lacks a \"supers\" array");
    supers = &doc.at("supers");
    if (doc.contains("finer_order")) {
      const auto& fo = doc.at("finer_order");
      if (!fo.is_array()) throw ValidationError("\"finer_order\" must be an array of names");
      order.emplace();
      for (const auto& n : fo) {
        if (!n.is_string()) throw ValidationError("\"finer_order\" entries must be strings");
        order->push_back(n.get<std::string>());
      }
    }
  }
  if (!supers->is_array()) throw ValidationError("\"supers\" must be an array");

  std::vector<SuperGroup> groups;
  std::size_t idx = 0;
  for (const auto& s : *supers) {
    if (!s.is_object() || !s.contains("name") || !s.at("name").is_string()) {
      throw ValidationError(fmt::format("super-class entry {} needs a string \"name\"", idx));
    }
    SuperGroup g{s.at("name").get<std::string>(), {}};
    if (!s.contains("finers") || !s.at("finers").is_array()) {
      throw ValidationError(fmt::format("super-class '{}' needs a \"finers\" array", g.name));
    }
    for (const auto& f : s.at("finers")) {
      if (f.is_object() || f.is_array()) {
        throw ValidationError(fmt::format(
            "super-class '{}' nests a deeper level; only two-level taxonomies are supported", g.name));
      }
      if (!f.is_string()) throw ValidationError(fmt::format("finer entries of '{}' must be strings", g.name));
      g.finers.push_back(f.get<std::string>());
    }
    groups.push_back(std::move(g));
    ++idx;
  }
  return Taxonomy::from_groups(std::move(groups), std::move(order));
}

Taxonomy load_taxonomy(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("taxonomy document is not valid JSON: ") + e.what());
  }
  return load_taxonomy(doc);
}

Taxonomy load_taxonomy_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LookupError("cannot open taxonomy file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return load_taxonomy(std::string_view(ss.str()));
}

}  // namespace sgnet
