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

#include "run_config.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "sgnet/errors.hpp"
#include "sgnet/report.hpp"

namespace sgnet::cli {
namespace {

std::size_t line_at(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

// Line of the first occurrence of "key" in the document, 1 when absent.
std::size_t key_line(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? 1 : line_at(text, pos);
}

std::filesystem::path resolve_path(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative()) path = base / path;
  return path.lexically_normal();
}

Taxonomy taxonomy_from_source(const std::string& source, const std::filesystem::path& base) {
  if (source.rfind("builtin:", 0) == 0) return builtin_taxonomy(source.substr(8));
  const auto path = resolve_path(base, source);
  if (!std::filesystem::exists(path)) throw LookupError("taxonomy file not found: " + path.string());
  return load_taxonomy_file(path);
}

Taxonomy synthetic_taxonomy(const SynthSpec& s) {
  std::vector<SuperGroup> groups;
  for (int i = 0; i < s.n_super; ++i) {
    SuperGroup g{fmt::format("super{}", i), {}};
    for (int f = 0; f < s.finer_per_super; ++f) g.finers.push_back(fmt::format("s{}f{}", i, f));
    groups.push_back(std::move(g));
  }
  return Taxonomy::from_groups(std::move(groups));
}

DatasetSpec parse_dataset(const nlohmann::json& j, const std::filesystem::path& base) {
  DatasetSpec d;
  d.kind = j.at("kind").get<std::string>();
  if (d.kind == "synthetic") {
    d.synth = SynthSpec::from_json(j);
    d.holdout_per_finer = j.value("holdout_per_finer", std::size_t{0});
    if (d.holdout_per_finer >= static_cast<std::size_t>(d.synth.samples_per_finer)) {
      throw ConfigError("holdout_per_finer must be smaller than samples_per_finer");
    }
  } else if (d.kind == "cifar" || d.kind == "subset") {
    d.train = resolve_path(base, j.at("train").get<std::string>());
    if (j.contains("test")) d.test = resolve_path(base, j.at("test").get<std::string>());
    d.limit = j.value("limit", std::size_t{0});
    if (d.kind == "subset") {
      d.supers = j.at("supers").get<std::vector<std::string>>();
      d.per_finer = j.at("per_finer").get<std::size_t>();
      d.subset_seed = j.value("seed", std::uint64_t{0});
    }
  } else {
    throw ConfigError("dataset kind must be \"synthetic\", \"cifar\" or \"subset\", got \"" + d.kind + "\"");
  }
  return d;
}

nlohmann::json dataset_json(const DatasetSpec& d) {
  nlohmann::json j{{"kind", d.kind}};
  if (d.kind == "synthetic") {
    j.update(d.synth.to_json());
    j["holdout_per_finer"] = d.holdout_per_finer;
    return j;
  }
  j["train"] = d.train.string();
  if (!d.test.empty()) j["test"] = d.test.string();
  j["limit"] = d.limit;
  if (d.kind == "subset") {
    j["supers"] = d.supers;
    j["per_finer"] = d.per_finer;
    j["seed"] = d.subset_seed;
  }
  return j;
}

// Runs `fn`, turning any library error into a line-anchored ConfigError.
template <typename Fn>
auto anchored(const std::filesystem::path& source, const std::string& text, const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("{}:{}: \"{}\": {}", source.string(), key_line(text, key), key, e.what()));
  } catch (const Error& e) {
    throw ConfigError(fmt::format("{}:{}: \"{}\": {}", source.string(), key_line(text, key), key, e.what()));
  }
}

RunConfig parse(const nlohmann::json& doc, const std::filesystem::path& source, const std::string& text) {
  const auto base = source.has_parent_path() ? source.parent_path() : std::filesystem::path(".");
  RunConfig c;
  c.source = source;
  if (!doc.is_object()) throw ConfigError(source.string() + ":1: run config must be a JSON object");
  static const std::vector<std::string> known{"name",      "seed",      "dataset",   "taxonomy",
                                              "architecture", "schedule", "alpha",     "augment",
                                              "precision", "normalization", "output_dir"};
  for (const auto& [k, v] : doc.items()) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw ConfigError(fmt::format("{}:{}: unknown key \"{}\"", source.string(), key_line(text, k), k));
    }
  }

  anchored(source, text, "name", [&] { c.name = doc.value("name", std::string("run")); return 0; });
  anchored(source, text, "seed", [&] { c.seed = doc.value("seed", std::uint64_t{0}); return 0; });
  if (!doc.contains("dataset")) throw ConfigError(source.string() + ":1: missing \"dataset\"");
  c.dataset = anchored(source, text, "dataset", [&] { return parse_dataset(doc.at("dataset"), base); });

  Taxonomy taxonomy = anchored(source, text, "taxonomy", [&] {
    if (c.dataset.kind == "synthetic") {
      if (doc.contains("taxonomy")) throw ConfigError("synthetic datasets define their own taxonomy");
      return synthetic_taxonomy(c.dataset.synth);
    }
    std::string src = doc.value("taxonomy", std::string("builtin:cifar100"));
    Taxonomy t = taxonomy_from_source(src, base);
    c.taxonomy = src.rfind("builtin:", 0) == 0 ? src : resolve_path(base, src).string();
    if (c.dataset.kind == "subset") {
      // validates the names; the exact sub-taxonomy comes from subset()
      std::vector<SuperGroup> groups;
      for (const auto& s : c.dataset.supers) {
        SuperGroup g{s, {}};
        for (int f : t.members_of(t.super_index(s))) g.finers.push_back(t.finer_name(f));
        groups.push_back(std::move(g));
      }
      return Taxonomy::from_groups(std::move(groups));
    }
    return t;
  });

  c.architecture = anchored(source, text, "architecture", [&] {
    if (!doc.contains("architecture")) throw ConfigError("missing \"architecture\"");
    const auto& a = doc.at("architecture");
    SgnetConfig arch;
    if (a.is_string()) {
      const auto s = a.get<std::string>();
      if (s == "vgg16-sgnet-cifar" || s == "vgg16-baseline-cifar") {
        arch = builtin_architecture(s);
      } else {
        const auto path = resolve_path(base, s);
        std::ifstream in(path);
        if (!in) throw LookupError("architecture file not found: " + path.string());
        arch = SgnetConfig::from_json(nlohmann::json::parse(in));
      }
    } else {
      arch = SgnetConfig::from_json(a);
    }
    arch.validate();
    if (arch.num_finer != taxonomy.num_finer() || (arch.has_scb() && arch.num_super != taxonomy.num_super())) {
      throw ConfigError(fmt::format("architecture outputs {} finer / {} super classes but the taxonomy has {} / {}",
                                    arch.num_finer, arch.num_super, taxonomy.num_finer(), taxonomy.num_super()));
    }
    if (c.dataset.kind == "synthetic" &&
        (arch.input_size != c.dataset.synth.image_size || arch.input_channels != c.dataset.synth.channels)) {
      throw ConfigError("architecture input geometry does not match the synthetic images");
    }
    return arch;
  });

  c.schedule = anchored(source, text, "schedule",
                        [&] { return TrainSchedule::from_json(doc.value("schedule", nlohmann::json::object())); });
  anchored(source, text, "alpha", [&] {
    c.alpha = doc.value("alpha", 0.5);
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError(fmt::format("alpha must lie in (0,1), got {}", c.alpha));
    return 0;
  });
  anchored(source, text, "augment", [&] { c.augment = doc.value("augment", false); return 0; });
  anchored(source, text, "precision", [&] {
    c.precision = doc.value("precision", std::string("f32"));
    if (c.precision != "f32" && c.precision != "f64") throw ConfigError("precision must be \"f32\" or \"f64\"");
    return 0;
  });
  anchored(source, text, "normalization", [&] {
    if (!doc.contains("normalization")) return 0;
    const auto& n = doc.at("normalization");
    if (n.is_string()) {
      c.normalization = n.get<std::string>();
      if (c.normalization != "dataset" && c.normalization != "cifar100") {
        throw ConfigError("normalization must be \"dataset\", \"cifar100\" or an object");
      }
    } else {
      c.normalization = "inline";
      c.inline_normalization = Normalization::from_json(n);
    }
    return 0;
  });
  anchored(source, text, "output_dir", [&] {
    c.output_dir = resolve_path(base, doc.value("output_dir", "runs/" + c.name));
    return 0;
  });
  return c;
}

}  // namespace

nlohmann::json RunConfig::resolved() const {
  nlohmann::json j{{"name", name},
                   {"seed", seed},
                   {"dataset", dataset_json(dataset)},
                   {"architecture", architecture.to_json()},
                   {"schedule", schedule.to_json()},
                   {"alpha", alpha},
                   {"augment", augment},
                   {"precision", precision}};
  if (!taxonomy.empty()) j["taxonomy"] = taxonomy;
  j["normalization"] = inline_normalization ? inline_normalization->to_json() : nlohmann::json(normalization);
  return j;
}

std::string RunConfig::digest() const { return config_digest(resolved()); }

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open run config");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(fmt::format("{}:{}: invalid JSON: {}", path.string(), line_at(text, e.byte), e.what()));
  }
  return parse(doc, path, text);
}

RunConfig run_config_from_resolved(const nlohmann::json& doc) {
  auto copy = doc;
  copy["output_dir"] = ".";
  return parse(copy, std::filesystem::path("checkpoint"), copy.dump(2));
}

std::vector<DatasetRecord> relabel(std::vector<DatasetRecord> records, const Taxonomy& from, const Taxonomy& to) {
  std::vector<DatasetRecord> out;
  for (auto& r : records) {
    if (r.finer_label < 0 || r.finer_label >= from.num_finer()) continue;
    const auto& name = from.finer_name(r.finer_label);
    const auto& names = to.finer_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) continue;
    r.finer_label = to.finer_index(name);
    r.coarse_label = to.finer_to_super(r.finer_label);
    out.push_back(std::move(r));
  }
  return out;
}

RunData load_run_data(const RunConfig& cfg) {
  RunData d;
  const auto& ds = cfg.dataset;
  if (ds.kind == "synthetic") {
    auto synth = synth_hier_dataset(ds.synth);
    auto [train, test] = split_per_finer(synth.records, ds.holdout_per_finer);
    d.train = std::move(train);
    d.test = std::move(test);
    d.taxonomy = synth.taxonomy;
    d.geometry = synth.geometry;
  } else {
    for (const auto& p : {ds.train, ds.test}) {
      if (!p.empty() && !std::filesystem::exists(p)) throw LookupError("dataset file not found: " + p.string());
    }
    const Taxonomy& cifar = cifar100_taxonomy();
    auto train = read_cifar100_bin(ds.train);
    auto test = ds.test.empty() ? std::vector<DatasetRecord>{} : read_cifar100_bin(ds.test);
    if (ds.kind == "subset") {
      auto res = subset(train, cifar, ds.supers, ds.per_finer, ds.subset_seed);
      d.train = std::move(res.records);
      d.taxonomy = std::move(res.taxonomy);
      d.test = relabel(std::move(test), cifar, d.taxonomy);
    } else {
      d.taxonomy = taxonomy_from_source(cfg.taxonomy.empty() ? "builtin:cifar100" : cfg.taxonomy, ".");
      const bool same = d.taxonomy.finer_names() == cifar.finer_names();
      d.train = same ? std::move(train) : relabel(std::move(train), cifar, d.taxonomy);
      d.test = same ? std::move(test) : relabel(std::move(test), cifar, d.taxonomy);
    }
    if (ds.limit > 0 && d.train.size() > ds.limit) d.train.resize(ds.limit);
    d.geometry = {3, 32, 32};
  }
  if (d.train.empty()) throw ValidationError("training set is empty");
  if (cfg.normalization == "cifar100") {
    d.normalization = cifar100_normalization();
  } else if (cfg.inline_normalization) {
    d.normalization = *cfg.inline_normalization;
  } else {
    d.normalization = compute_normalization(d.train, d.geometry);
  }
  return d;
}

}  // namespace sgnet::cli
