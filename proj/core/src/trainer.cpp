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

#include "sgnet/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "sgnet/checkpoint.hpp"
#include "sgnet/errors.hpp"

namespace sgnet {

std::string RunLog::epochs_csv() const {
  std::string out = "# seed=" + std::to_string(seed) + " config_digest=" + config_digest + "\n";
  out += "epoch,lr,loss_total,loss_fc,loss_sc";
  std::vector<std::string> cols;
  if (!epochs.empty()) {
    for (const auto& e : epochs.front().eval) {
      const auto tag = e.dataset + "_" + std::string(mode_name(e.metrics.mode));
      for (const char* m : {"finer_top1", "super_top1", "serious_error_rate"}) out += "," + tag + "_" + m;
    }
  }
  out += ",seconds\n";
  for (const auto& e : epochs) {
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}", e.epoch, e.lr, e.loss_total, e.loss_fc, e.loss_sc);
    for (const auto& r : e.eval) {
      out += fmt::format(",{:.6f},{:.6f},{:.6f}", r.metrics.finer_top1, r.metrics.super_top1,
                         r.metrics.serious_error_rate);
    }
    out += fmt::format(",{:.3f}\n", e.seconds);
  }
  return out;
}

std::string RunLog::steps_csv() const {
  std::string out = "# seed=" + std::to_string(seed) + " config_digest=" + config_digest + "\n";
  out += "epoch,step,batch,lr,loss_total,loss_fc,loss_sc\n";
  for (const auto& s : steps) {
    out += fmt::format("{},{},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", s.epoch, s.step, s.batch, s.lr, s.loss_total,
                       s.loss_fc, s.loss_sc);
  }
  return out;
}

nlohmann::json RunLog::to_json() const {
  nlohmann::json ep = nlohmann::json::array();
  for (const auto& e : epochs) {
    nlohmann::json ev = nlohmann::json::array();
    for (const auto& r : e.eval) {
      auto m = r.metrics.to_json();
      m["dataset"] = r.dataset;
      ev.push_back(m);
    }
    ep.push_back({{"epoch", e.epoch},
                  {"lr", e.lr},
                  {"loss_total", e.loss_total},
                  {"loss_fc", e.loss_fc},
                  {"loss_sc", e.loss_sc},
                  {"eval", ev},
                  {"seconds", e.seconds}});
  }
  return {{"seed", seed},          {"config_digest", config_digest}, {"alpha", alpha},
          {"best_epoch", best_epoch}, {"best_score", best_score},     {"epochs", ep}};
}

template <typename T>
RunLog train(SgnetModel<T>& model, std::span<const DatasetRecord> records, const Taxonomy& taxonomy,
             const TrainOptions& options, std::span<const EvalSet> eval_sets) {
  const auto& sched = options.schedule;
  sched.validate();
  model.config().validate();
  if (model.config().num_finer != taxonomy.num_finer() ||
      (model.config().has_scb() && model.config().num_super != taxonomy.num_super())) {
    throw ConfigError(fmt::format("architecture has {} finer / {} super outputs, taxonomy has {} / {}",
                                  model.config().num_finer, model.config().num_super, taxonomy.num_finer(),
                                  taxonomy.num_super()));
  }

  BatchOptions bo;
  bo.batch_size = sched.batch_size;
  bo.shuffle = true;
  bo.augment = options.augment;
  bo.seed = options.seed;
  bo.geometry = options.geometry;
  bo.normalization = options.normalization;
  BatchStream stream(records, bo);

  SgdOptimizer<T> opt(model.parameters(), sched.momentum, sched.weight_decay);
  RunLog log;
  log.seed = options.seed;
  log.config_digest = options.config_digest;
  log.alpha = options.alpha;
  const std::size_t steps_per_epoch = stream.batches_per_epoch();

  auto extra = options.checkpoint_extra;
  extra["seed"] = options.seed;
  extra["config_digest"] = options.config_digest;
  extra["normalization"] = options.normalization.to_json();
  extra["geometry"] = {options.geometry.channels, options.geometry.height, options.geometry.width};
  extra["taxonomy"] = taxonomy.to_json();

  for (int epoch = 0; epoch < sched.total_epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    EpochRecord rec;
    rec.epoch = epoch;
    std::size_t seen = 0;
    std::size_t step = 0;
    for (const auto& plan : stream.epoch(static_cast<std::size_t>(epoch))) {
      const double lr = lr_at(sched, epoch, step, steps_per_epoch);
      auto batch = stream.materialize<T>(plan);
      const auto out = model.forward(batch.images);
      auto lb = combined_loss(out, batch.labels, taxonomy, options.alpha);
      if (!std::isfinite(lb.total)) {
        throw TrainingError(fmt::format("non-finite loss {} at epoch {}, step {}, lr {}", lb.total, epoch, step, lr));
      }
      backward(lb.loss);
      opt.step(lr);

      const std::size_t n = batch.labels.size();
      log.steps.push_back({epoch, step, n, lr, lb.total, lb.loss_fc, lb.loss_sc});
      rec.loss_total += lb.total * static_cast<double>(n);
      rec.loss_fc += lb.loss_fc * static_cast<double>(n);
      rec.loss_sc += lb.loss_sc * static_cast<double>(n);
      rec.lr = lr;
      seen += n;
      ++step;
    }
    rec.loss_total /= static_cast<double>(seen);
    rec.loss_fc /= static_cast<double>(seen);
    rec.loss_sc /= static_cast<double>(seen);

    for (const auto& set : eval_sets) {
      if (model.config().has_scb()) {
        rec.eval.push_back({set.name, evaluate(model, set.records, options.geometry, options.normalization,
                                               InferenceMode::kTsi, taxonomy)});
      }
      rec.eval.push_back({set.name, evaluate(model, set.records, options.geometry, options.normalization,
                                             InferenceMode::kDi, taxonomy)});
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    double score = -rec.loss_total;
    for (const auto& r : rec.eval) {
      if (r.metrics.mode == InferenceMode::kDi) {
        score = r.metrics.finer_top1;
        break;
      }
    }
    const bool best = log.best_epoch < 0 || score > log.best_score;
    if (best) {
      log.best_epoch = epoch;
      log.best_score = score;
    }
    if (!options.checkpoint_dir.empty()) {
      extra["epoch"] = epoch;
      save_checkpoint(options.checkpoint_dir / "latest", model, extra);
      if (best) save_checkpoint(options.checkpoint_dir / "best", model, extra);
    }
    log.epochs.push_back(std::move(rec));
    if (options.on_epoch) options.on_epoch(log.epochs.back());
  }
  return log;
}

NormalizedCurve normalize_loss_curve(std::span<const double> losses) {
  if (losses.size() < 2) throw ValidationError("loss curve needs at least two epochs");
  const auto [lo, hi] = std::minmax_element(losses.begin(), losses.end());
  NormalizedCurve c;
  if (*hi == *lo) {
    c.values.assign(losses.size(), 0.0);
    c.degenerate = true;
    return c;
  }
  for (double v : losses) c.values.push_back((v - *lo) / (*hi - *lo));
  return c;
}

NormalizedCurve normalize_loss_curve(const RunLog& log) {
  std::vector<double> losses;
  for (const auto& e : log.epochs) losses.push_back(e.loss_total);
  return normalize_loss_curve(losses);
}

template RunLog train<float>(SgnetModel<float>&, std::span<const DatasetRecord>, const Taxonomy&,
                             const TrainOptions&, std::span<const EvalSet>);
template RunLog train<double>(SgnetModel<double>&, std::span<const DatasetRecord>, const Taxonomy&,
                              const TrainOptions&, std::span<const EvalSet>);

}  // namespace sgnet
