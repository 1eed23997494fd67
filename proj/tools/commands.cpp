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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "run_config.hpp"
#include "sgnet/checkpoint.hpp"
#include "sgnet/errors.hpp"
#include "sgnet/gradcheck_suite.hpp"
#include "sgnet/inference.hpp"
#include "sgnet/report.hpp"
#include "sgnet/trainer.hpp"

namespace sgnet::cli {
namespace {

constexpr double kGradTolerance = 1e-4;

std::filesystem::path output_dir_or(const std::filesystem::path& fallback) {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return fallback;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string provenance(std::uint64_t seed, const std::string& digest) {
  return fmt::format("# seed={} config_digest={}\n", seed, digest);
}

// Defaults that no published source pins down, flagged in every report.
std::string assumption_notes(const RunConfig& cfg) {
  return fmt::format(
      "# assumptions: optimizer SGD momentum={} weight_decay={}; warmup linear per step over {} epoch(s); "
      "augmentation {}; normalization {}; ties broken by lowest index\n",
      cfg.schedule.momentum, cfg.schedule.weight_decay, cfg.schedule.warmup_epochs, cfg.augment ? "pad-4 crop + flip" : "off",
      cfg.normalization);
}

template <typename T>
int run_training(const RunConfig& cfg, RunData& data, const std::filesystem::path& out_dir, std::ostream& out) {
  const auto digest = cfg.digest();
  SgnetModel<T> model(cfg.architecture, cfg.seed);
  const auto eval_records = data.test.empty() ? std::span<const DatasetRecord>(data.train)
                                              : std::span<const DatasetRecord>(data.test);
  const std::string eval_name = data.test.empty() ? "train" : "test";
  std::vector<EvalSet> eval_sets{{eval_name, eval_records}};

  TrainOptions opt;
  opt.schedule = cfg.schedule;
  opt.alpha = cfg.alpha;
  opt.seed = cfg.seed;
  opt.augment = cfg.augment;
  opt.geometry = data.geometry;
  opt.normalization = data.normalization;
  opt.checkpoint_dir = out_dir / "checkpoints";
  opt.config_digest = digest;
  opt.checkpoint_extra = {{"run_config", cfg.resolved()}, {"run_name", cfg.name}};
  opt.on_epoch = [&](const EpochRecord& e) {
    out << fmt::format("epoch {:>3}  lr {:.5g}  loss {:.6f} (fc {:.6f}, sc {:.6f})", e.epoch, e.lr, e.loss_total,
                       e.loss_fc, e.loss_sc);
    for (const auto& r : e.eval) {
      out << fmt::format("  {}-{} {:.2f}%", r.dataset, mode_name(r.metrics.mode), 100.0 * r.metrics.finer_top1);
    }
    out << fmt::format("  {:.1f}s\n", e.seconds);
  };

  const auto log = train(model, data.train, data.taxonomy, opt, eval_sets);

  const auto head = provenance(cfg.seed, digest);
  write_file(out_dir / "epochs.csv", log.epochs_csv());
  write_file(out_dir / "steps.csv", log.steps_csv());
  write_file(out_dir / "loss_curve.csv", loss_curve_csv(log));
  write_file(out_dir / "run_log.json", log.to_json().dump(2) + "\n");

  std::vector<AccuracyRow> rows;
  for (const auto& r : log.epochs.back().eval) {
    rows.push_back({fmt::format("{} ({})", cfg.architecture.name, mode_name(r.metrics.mode)),
                    std::to_string(log.epochs.back().epoch + 1), r.metrics, model.parameter_count()});
  }
  const auto table = accuracy_table(rows);
  write_file(out_dir / "summary.txt", head + assumption_notes(cfg) + "# evaluated on: " + eval_name + "\n" + table);
  nlohmann::json summary{{"seed", cfg.seed},
                         {"config_digest", digest},
                         {"parameters", model.parameter_count()},
                         {"best_epoch", log.best_epoch},
                         {"final", nlohmann::json::array()}};
  for (const auto& r : log.epochs.back().eval) {
    auto m = r.metrics.to_json();
    m["dataset"] = r.dataset;
    summary["final"].push_back(m);
  }
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");

  out << "\n" << table;
  for (const auto& r : log.epochs.back().eval) {
    if (r.metrics.mode == InferenceMode::kDi) {
      out << fmt::format("final DI accuracy: {:.2f}% ({})\n", 100.0 * r.metrics.finer_top1, r.dataset);
    }
  }
  out << "artifacts written to " << out_dir.string() << "\n";
  return kExitOk;
}

struct EvalContext {
  CheckpointInfo info;
  Taxonomy taxonomy;
  Normalization normalization;
  ImageGeometry geometry;
  std::vector<DatasetRecord> records;
  std::string seed;
  std::string digest;
};

EvalContext prepare_eval(const std::filesystem::path& checkpoint, const std::string& spec) {
  EvalContext ctx;
  if (!std::filesystem::exists(checkpoint / "config.json")) {
    throw LookupError("no checkpoint at " + checkpoint.string() + " (expected config.json inside)");
  }
  ctx.info = read_checkpoint_info(checkpoint);
  const auto& extra = ctx.info.extra;
  try {
    ctx.taxonomy = load_taxonomy(extra.at("taxonomy"));
    ctx.normalization = Normalization::from_json(extra.at("normalization"));
    const auto g = extra.at("geometry").get<std::vector<int>>();
    ctx.geometry = {g.at(0), g.at(1), g.at(2)};
    ctx.seed = extra.contains("seed") ? extra.at("seed").dump() : "unknown";
    ctx.digest = extra.value("config_digest", std::string("unknown"));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(checkpoint.string() + ": checkpoint lacks evaluation metadata: " + e.what());
  }

  if (spec.rfind("config:", 0) == 0) {
    const auto split = spec.substr(7);
    if (split != "train" && split != "test") throw ConfigError("dataset spec config:SPLIT needs train or test");
    if (!extra.contains("run_config")) throw ConfigError("checkpoint does not record its run config");
    auto data = load_run_data(run_config_from_resolved(extra.at("run_config")));
    ctx.records = split == "train" ? std::move(data.train) : std::move(data.test);
    if (ctx.records.empty()) throw ConfigError("the run config has no " + split + " split");
  } else if (spec.rfind("cifar:", 0) == 0) {
    const std::filesystem::path path = spec.substr(6);
    if (!std::filesystem::exists(path)) throw LookupError("dataset file not found: " + path.string());
    auto records = read_cifar100_bin(path);
    const auto& cifar = cifar100_taxonomy();
    ctx.records = ctx.taxonomy.finer_names() == cifar.finer_names() ? std::move(records)
                                                                     : relabel(std::move(records), cifar, ctx.taxonomy);
    if (ctx.records.empty()) throw ValidationError("no records of " + path.string() + " belong to the checkpoint taxonomy");
  } else {
    throw ConfigError("dataset spec must be cifar:PATH, config:train or config:test, got '" + spec + "'");
  }
  if (ctx.info.config.input_size != ctx.geometry.height || ctx.info.config.input_channels != ctx.geometry.channels) {
    throw ShapeError("checkpoint geometry does not match its architecture");
  }
  return ctx;
}

template <typename T>
int eval_impl(const std::filesystem::path& checkpoint, EvalContext& ctx, const std::string& mode, std::ostream& out) {
  auto model = load_checkpoint<T>(checkpoint);
  std::vector<InferenceMode> modes;
  if (mode == "tsi" || mode == "both") {
    if (model.config().has_scb()) {
      modes.push_back(InferenceMode::kTsi);
    } else if (mode == "tsi") {
      throw ConfigError("architecture '" + model.config().name + "' has no super-class branch; TSI is unavailable");
    }
  }
  if (mode == "di" || mode == "both") modes.push_back(InferenceMode::kDi);

  const std::string epoch = ctx.info.extra.contains("epoch") ? std::to_string(ctx.info.extra.at("epoch").get<int>() + 1) : "-";
  std::vector<AccuracyRow> rows;
  nlohmann::json js{{"seed", ctx.info.extra.value("seed", nlohmann::json())}, {"config_digest", ctx.digest},
                    {"parameters", model.parameter_count()}, {"metrics", nlohmann::json::array()}};
  for (auto m : modes) {
    const auto metrics = evaluate(model, ctx.records, ctx.geometry, ctx.normalization, m, ctx.taxonomy);
    rows.push_back({fmt::format("{} ({})", model.config().name, mode_name(m)), epoch, metrics, model.parameter_count()});
    js["metrics"].push_back(metrics.to_json());
  }
  const auto text = fmt::format("# seed={} config_digest={}\n", ctx.seed, ctx.digest) + accuracy_table(rows);
  out << text;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
    std::filesystem::create_directories(env);
    write_file(std::filesystem::path(env) / "eval.txt", text);
    write_file(std::filesystem::path(env) / "eval.json", js.dump(2) + "\n");
  }
  return kExitOk;
}

template <typename T>
int analyze_impl(const std::filesystem::path& checkpoint, EvalContext& ctx, std::ostream& out) {
  auto model = load_checkpoint<T>(checkpoint);
  if (!model.config().has_scb()) {
    throw ConfigError("architecture '" + model.config().name + "' has no super-class branch to analyze");
  }
  const auto logits = collect_logits(model, ctx.records, ctx.geometry, ctx.normalization, true);
  const auto rep = mismatch_analysis(logits.super_logits, logits.finer_logits, logits.finer_truth, ctx.taxonomy);
  std::string text = fmt::format("# seed={} config_digest={}\n", ctx.seed, ctx.digest);
  text += fmt::format("# samples={}\n", rep.total_samples);
  text += mismatch_table(rep);
  text += "\nConflicting samples:\n" + conflict_listing(rep, ctx.taxonomy);
  out << text;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
    std::filesystem::create_directories(env);
    auto js = rep.to_json();
    js["seed"] = ctx.seed;
    js["config_digest"] = ctx.digest;
    write_file(std::filesystem::path(env) / "analyze.txt", text);
    write_file(std::filesystem::path(env) / "analyze.json", js.dump(2) + "\n");
  }
  return kExitOk;
}

// Maps library errors onto exit codes: unresolvable references and invalid
// configuration give 2, everything else 1.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const LookupError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

int cmd_train(const std::filesystem::path& config, bool dry_run, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  RunData data;
  const int rc = guarded(err, [&] {
    cfg = load_run_config(config);
    if (dry_run) return kExitOk;
    try {
      data = load_run_data(cfg);
    } catch (const Error& e) {
      throw ConfigError(fmt::format("{}: \"dataset\": {}", config.string(), e.what()));
    }
    return kExitOk;
  });
  if (rc != kExitOk) return rc;

  if (dry_run) {
    out << "config: " << config.string() << "\n";
    out << "config_digest: " << cfg.digest() << "\n";
    out << "seed: " << cfg.seed << "\n";
    out << "architecture: " << cfg.architecture.name << "\n";
    out << "parameters: " << parameter_count(cfg.architecture) << " ("
        << format_param_count(parameter_count(cfg.architecture)) << ")\n";
    out << "resolved: " << cfg.resolved().dump() << "\n";
    return kExitOk;
  }
  return guarded(err, [&] {
    const auto out_dir = output_dir_or(cfg.output_dir);
    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "resolved_config.json",
               nlohmann::json{{"seed", cfg.seed}, {"config_digest", cfg.digest()}, {"config", cfg.resolved()}}.dump(2) +
                   "\n");
    out << provenance(cfg.seed, cfg.digest()) << assumption_notes(cfg);
    out << fmt::format("training {} on {} records ({} held out), {} parameters\n", cfg.architecture.name,
                       data.train.size(), data.test.size(), parameter_count(cfg.architecture));
    return cfg.precision == "f64" ? run_training<double>(cfg, data, out_dir, out)
                                  : run_training<float>(cfg, data, out_dir, out);
  });
}

int cmd_eval(const std::filesystem::path& checkpoint, const std::string& dataset, const std::string& mode,
             std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (mode != "tsi" && mode != "di" && mode != "both") throw ConfigError("--mode must be tsi, di or both");
    auto ctx = prepare_eval(checkpoint, dataset);
    return ctx.info.dtype == "f64" ? eval_impl<double>(checkpoint, ctx, mode, out)
                                   : eval_impl<float>(checkpoint, ctx, mode, out);
  });
}

int cmd_analyze(const std::filesystem::path& checkpoint, const std::string& dataset, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    auto ctx = prepare_eval(checkpoint, dataset);
    return ctx.info.dtype == "f64" ? analyze_impl<double>(checkpoint, ctx, out) : analyze_impl<float>(checkpoint, ctx, out);
  });
}

int cmd_gradcheck(int cases, unsigned long long seed, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (cases < 1) throw ConfigError("--cases must be positive");
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::vector<std::vector<std::string>> rows;
    for (const auto& op : gradcheck_op_names()) {
      const auto r = gradcheck_op(op, cases, seed);
      const bool pass = r.max_relative_error <= kGradTolerance;
      ok = ok && pass;
      rows.push_back({op, std::to_string(r.cases), std::to_string(r.elements), fmt::format("{:.3e}", r.max_relative_error),
                      pass ? "PASS" : "FAIL", r.worst});
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out << format_table({"Op", "Cases", "Elements", "Max Rel Error", "Status", "Worst"}, rows);
    out << fmt::format("tolerance {:.0e}, eps 1e-5, double precision, {:.2f}s: {}\n", kGradTolerance, secs,
                       ok ? "all passed" : "FAILED");
    return ok ? kExitOk : kExitRuntime;
  });
}

int cmd_taxonomy_export(const std::string& name, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto doc = builtin_taxonomy(name).to_json();
    doc["name"] = name;
    out << doc.dump(2) << "\n";
    return kExitOk;
  });
}

int cmd_taxonomy_validate(const std::filesystem::path& path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!std::filesystem::exists(path)) throw LookupError("taxonomy file not found: " + path.string());
    try {
      const auto t = load_taxonomy_file(path);
      out << fmt::format("{}: valid two-level taxonomy, {} super-classes, {} finer classes\n", path.string(),
                         t.num_super(), t.num_finer());
      return kExitOk;
    } catch (const ValidationError& e) {
      err << path.string() << ": invalid taxonomy: " << e.what() << "\n";
      return kExitConfig;
    }
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Super-class guided hierarchical classification toolkit"};
  app.require_subcommand(1);

  std::string config;
  bool dry_run = false;
  auto* train = app.add_subcommand("train", "Train from a run config");
  train->add_option("--config", config, "Run config (JSON)")->required();
  train->add_flag("--dry-run", dry_run, "Print the config digest and parameter count only");

  std::string checkpoint, dataset, mode = "both";
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval->add_option("--checkpoint", checkpoint, "Checkpoint directory")->required();
  eval->add_option("--dataset", dataset, "cifar:PATH, config:train or config:test")->required();
  eval->add_option("--mode", mode, "tsi, di or both")->check(CLI::IsMember({"tsi", "di", "both"}));

  auto* analyze = app.add_subcommand("analyze", "Mismatch analysis of a checkpoint");
  analyze->add_option("--checkpoint", checkpoint, "Checkpoint directory")->required();
  analyze->add_option("--dataset", dataset, "cifar:PATH, config:train or config:test")->required();

  int cases = 100;
  unsigned long long seed = 0;
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of every differentiable op");
  gradcheck->add_option("--cases", cases, "Seeded cases per op");
  gradcheck->add_option("--seed", seed, "Base seed");

  auto* taxonomy = app.add_subcommand("taxonomy", "Builtin taxonomy export and document validation");
  taxonomy->require_subcommand(1);
  std::string tax_name, tax_path;
  auto* tax_export = taxonomy->add_subcommand("export", "Print a builtin taxonomy as JSON");
  tax_export->add_option("name", tax_name, "cifar100 or coco")->required();
  auto* tax_validate = taxonomy->add_subcommand("validate", "Validate a taxonomy document");
  tax_validate->add_option("path", tax_path, "Taxonomy JSON file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kExitConfig;
  }

  if (*train) return cmd_train(config, dry_run, out, err);
  if (*eval) return cmd_eval(checkpoint, dataset, mode, out, err);
  if (*analyze) return cmd_analyze(checkpoint, dataset, out, err);
  if (*gradcheck) return cmd_gradcheck(cases, seed, out, err);
  if (*tax_export) return cmd_taxonomy_export(tax_name, out, err);
  if (*tax_validate) return cmd_taxonomy_validate(tax_path, out, err);
  return kExitConfig;
}

}  // namespace sgnet::cli
