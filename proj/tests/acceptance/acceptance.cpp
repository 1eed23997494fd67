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

// Acceptance harness: one status line per criterion.
//
//   sgnet_acceptance [--core | --cifar]
//
// --core runs everything that needs no external data. --cifar runs only the
// checks on the canonical CIFAR-100 training file and exits 77 when the file
// is absent. Without a flag both parts run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "run_config.hpp"
#include "sgnet/data.hpp"
#include "sgnet/detection.hpp"
#include "sgnet/gradcheck_suite.hpp"
#include "sgnet/inference.hpp"
#include "sgnet/taxonomy.hpp"
#include "sgnet/trainer.hpp"

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Tolerances and budgets of the acceptance contract.
constexpr double kGradTol = 1e-4;
constexpr int kGradCases = 100;
constexpr double kGradBudgetSeconds = 60.0;
constexpr int kFuzzInstances = 1000;
constexpr double kLossCompositionTol = 1e-6;
constexpr int kCompositionEpochs = 10;
constexpr double kDetectionLossTol = 1e-6;
constexpr double kRoiLossTarget = 0.01;
constexpr int kRoiSteps = 200;
constexpr double kRoiLr = 20.0;
constexpr double kSynthFinerTarget = 0.90;
constexpr double kSynthSuperTarget = 0.95;
constexpr int kSynthEpochs = 30;
constexpr double kSynthBudgetSeconds = 300.0;
constexpr double kOverfitTarget = 0.99;
constexpr int kOverfitEpochs = 200;
constexpr double kOverfitBudgetSeconds = 600.0;
constexpr std::size_t kOverfitImages = 64;
constexpr std::size_t kCifarTrainRecords = 50000;
constexpr double kParamTolerance = 0.02;

enum class Status { kPass, kFail, kBlocked };

const char* label(Status s) {
  switch (s) {
    case Status::kPass: return "PASS";
    case Status::kFail: return "FAIL";
    case Status::kBlocked: return "BLOCKED";
  }
  return "?";
}

struct Line {
  int id;
  Status status;
  std::string summary;
  std::vector<std::string> details;
};

Status combine(std::initializer_list<Status> parts) {
  Status out = Status::kPass;
  for (auto s : parts) {
    if (s == Status::kFail) return Status::kFail;
    if (s == Status::kBlocked) out = Status::kBlocked;
  }
  return out;
}

Status pass_if(bool ok) { return ok ? Status::kPass : Status::kFail; }

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

fs::path source_path(const std::string& rel) { return fs::path(SGNET_SOURCE_DIR) / rel; }

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("sgnet_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct CliRun {
  int code = 0;
  std::string out, err;
};

CliRun cli(const std::vector<std::string>& args, const std::optional<fs::path>& out_dir = std::nullopt) {
  if (out_dir) {
    ::setenv(sgnet::cli::kOutputDirEnv, out_dir->c_str(), 1);
  } else {
    ::unsetenv(sgnet::cli::kOutputDirEnv);
  }
  std::ostringstream out, err;
  CliRun r;
  r.code = sgnet::cli::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  ::unsetenv(sgnet::cli::kOutputDirEnv);
  return r;
}

// Writes the shipped synthetic config with a different epoch count. The
// resolved form carries the architecture inline, so the copy is
// self-contained.
fs::path synth_config_with_epochs(int epochs, const fs::path& dir) {
  auto cfg = sgnet::cli::load_run_config(source_path("configs/synth-2x2.json"));
  auto doc = cfg.resolved();
  doc["schedule"]["total_epochs"] = epochs;
  auto path = dir / "synth.json";
  std::ofstream(path) << doc.dump(2);
  return path;
}

struct StepRow {
  double loss_total, loss_fc, loss_sc;
};

std::vector<StepRow> read_steps(const fs::path& csv) {
  std::ifstream in(csv);
  std::vector<StepRow> rows;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) f.push_back(c);
    rows.push_back({std::stod(f.at(4)), std::stod(f.at(5)), std::stod(f.at(6))});
  }
  return rows;
}

std::optional<fs::path> cifar_dir() {
  if (const char* env = std::getenv("SGNET_CIFAR100_DIR"); env && *env) {
    if (fs::exists(fs::path(env) / "train.bin")) return fs::path(env);
    return std::nullopt;
  }
  auto local = source_path("data/cifar-100-binary");
  if (fs::exists(local / "train.bin")) return local;
  return std::nullopt;
}

const std::string kCifarHint =
    "canonical CIFAR-100 binary not found (set SGNET_CIFAR100_DIR to the directory holding train.bin)";

// ---------------------------------------------------------------- 1
Line criterion_gradients() {
  auto start = Clock::now();
  auto reports = sgnet::run_gradcheck_suite(kGradCases, 0);
  double secs = seconds_since(start);
  double worst = 0;
  std::string worst_op;
  int min_cases = kGradCases;
  std::vector<std::string> details;
  bool ok = true;
  for (const auto& r : reports) {
    if (r.max_relative_error > worst) {
      worst = r.max_relative_error;
      worst_op = r.op;
    }
    min_cases = std::min(min_cases, r.cases);
    bool pass = r.max_relative_error <= kGradTol && r.cases >= kGradCases;
    ok = ok && pass;
    details.push_back(fmt::format("{:<16} cases {:>3}  max rel err {:.2e}{}", r.op, r.cases, r.max_relative_error,
                                  pass ? "" : "  <-- exceeds"));
  }
  ok = ok && secs < kGradBudgetSeconds;
  return {1, pass_if(ok),
          fmt::format("gradient correctness: {} ops incl. full two-branch loss, >= {} cases each, max rel err {:.2e} "
                      "({}) <= {:.0e}, {:.1f}s < {:.0f}s",
                      reports.size(), min_cases, worst, worst_op, kGradTol, secs, kGradBudgetSeconds),
          details};
}

// ---------------------------------------------------------------- 2
struct Row {
  std::string super;
  std::vector<std::string> finers;
};

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<Row> read_rows(const std::string& file) {
  std::ifstream in(std::string(SGNET_TEST_DATA_DIR) + "/" + file);
  std::vector<Row> rows;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    Row r{trim(line.substr(0, colon)), {}};
    std::stringstream rest(line.substr(colon + 1));
    for (std::string item; std::getline(rest, item, ',');) r.finers.push_back(trim(item));
    rows.push_back(std::move(r));
  }
  return rows;
}

// Grouping-table spelling -> dataset meta spelling.
std::string dataset_spelling(const std::string& table) {
  static const std::map<std::string, std::string> irregular{
      {"computer keyboard", "keyboard"}, {"maple", "maple_tree"},   {"oak", "oak_tree"},
      {"palm", "palm_tree"},             {"pine", "pine_tree"},     {"willow", "willow_tree"},
      {"lawn-mower", "lawn_mower"},      {"poppies", "poppy"},      {"aquarium fish", "aquarium_fish"},
      {"sweet peppers", "sweet_pepper"}, {"pickup truck", "pickup_truck"}};
  if (auto it = irregular.find(table); it != irregular.end()) return it->second;
  static const std::set<std::string> plural{"orchids", "roses", "sunflowers", "tulips", "bottles", "bowls", "cans",
                                            "cups",    "plates", "apples", "mushrooms", "oranges", "pears"};
  return plural.count(table) ? table.substr(0, table.size() - 1) : table;
}

std::size_t golden_mismatches(const sgnet::Taxonomy& t, const std::vector<Row>& rows, bool respell,
                              std::size_t expect_super, std::size_t expect_finer) {
  std::size_t bad = 0;
  if (static_cast<std::size_t>(t.num_super()) != expect_super || rows.size() != expect_super) ++bad;
  if (static_cast<std::size_t>(t.num_finer()) != expect_finer) ++bad;
  for (std::size_t s = 0; s < std::min<std::size_t>(rows.size(), t.num_super()); ++s) {
    if (t.super_name(static_cast<int>(s)) != rows[s].super) ++bad;
    std::set<std::string> want, got;
    for (const auto& f : rows[s].finers) want.insert(respell ? dataset_spelling(f) : f);
    for (int f : t.members_of(static_cast<int>(s))) got.insert(t.finer_name(f));
    if (want != got) ++bad;
  }
  return bad;
}

Status cifar_consistency(std::vector<std::string>& details) {
  auto dir = cifar_dir();
  if (!dir) {
    details.push_back("file coarse-label consistency: BLOCKED, " + kCifarHint);
    return Status::kBlocked;
  }
  auto recs = sgnet::read_cifar100_bin(*dir / "train.bin");
  auto rep = sgnet::check_coarse_consistency(recs, sgnet::cifar100_taxonomy());
  bool ok = recs.size() == kCifarTrainRecords && rep.consistency == 1.0;
  details.push_back(fmt::format("file coarse-label consistency: {} records (expected {}), consistency {:.6f} "
                                "({} offending)",
                                recs.size(), kCifarTrainRecords, rep.consistency, rep.offending.size()));
  return pass_if(ok);
}

Line criterion_taxonomy(bool core, bool cifar) {
  std::vector<std::string> details;
  Status golden = Status::kPass;
  if (core) {
    auto c = golden_mismatches(sgnet::cifar100_taxonomy(), read_rows("cifar100_groups.txt"), true, 20, 100);
    auto k = golden_mismatches(sgnet::coco_taxonomy(), read_rows("coco_groups.txt"), false, 12, 80);
    details.push_back(fmt::format("CIFAR-100 builtin vs transcribed grouping: {} discrepancies (20 x 5)", c));
    details.push_back(fmt::format("COCO builtin vs transcribed grouping: {} discrepancies (12 supers, 80 finers)", k));
    golden = pass_if(c == 0 && k == 0);
  }
  Status data = Status::kPass;
  if (cifar) {
    data = cifar_consistency(details);
  } else {
    details.push_back("file coarse-label consistency: run by --cifar");
  }
  std::string summary = "taxonomy goldens and CIFAR-100 file consistency";
  if (!cifar) summary += " [builtin goldens only here; the file check is the --cifar part]";
  if (!core) summary += " [file check only here]";
  return {2, combine({golden, data}), summary, details};
}

// ---------------------------------------------------------------- 3
Line criterion_inference() {
  std::mt19937_64 rng(20260101);
  std::size_t tsi_ok = 0, di_ok = 0, contain_ok = 0, parent_ok = 0, mismatches = 0;
  for (int trial = 0; trial < kFuzzInstances; ++trial) {
    int n_super = std::uniform_int_distribution<int>(1, 10)(rng);
    std::vector<sgnet::SuperGroup> groups;
    std::vector<std::string> order;
    std::map<std::string, int> parent_by_name;
    for (int s = 0; s < n_super; ++s) {
      sgnet::SuperGroup g{fmt::format("S{}", s), {}};
      int k = std::uniform_int_distribution<int>(1, 7)(rng);
      for (int j = 0; j < k; ++j) {
        g.finers.push_back(fmt::format("S{}F{}", s, j));
        order.push_back(g.finers.back());
        parent_by_name[g.finers.back()] = s;
      }
      groups.push_back(std::move(g));
    }
    std::shuffle(order.begin(), order.end(), rng);
    auto t = sgnet::Taxonomy::from_groups(groups, order);
    const bool ties = trial % 2 == 0;
    std::normal_distribution<double> normal(0, 2);
    std::uniform_int_distribution<int> coarse(-2, 2);
    auto draw = [&] { return ties ? static_cast<double>(coarse(rng)) : normal(rng); };
    std::vector<double> sl(n_super), fl(order.size());
    for (auto& v : sl) v = draw();
    for (auto& v : fl) v = draw();

    // oracles index through `order`, independent of the taxonomy's lookups
    int s_star = 0;
    for (int s = 1; s < n_super; ++s)
      if (sl[s] > sl[s_star]) s_star = s;
    int f_restricted = -1, f_global = 0;
    for (std::size_t f = 0; f < order.size(); ++f) {
      if (fl[f] > fl[f_global]) f_global = static_cast<int>(f);
      if (parent_by_name[order[f]] == s_star && (f_restricted < 0 || fl[f] > fl[f_restricted])) {
        f_restricted = static_cast<int>(f);
      }
    }
    auto tsi = sgnet::predict_tsi<double>(sl, fl, t);
    auto di = sgnet::predict_di<double>(fl, t);
    tsi_ok += tsi.super_id == s_star && tsi.finer_id == f_restricted &&
              tsi.mismatch == (parent_by_name[order[f_global]] != s_star);
    di_ok += di.finer_id == f_global;
    contain_ok += parent_by_name[order[tsi.finer_id]] == tsi.super_id;
    parent_ok += parent_by_name[order[di.finer_id]] == di.super_id;
    mismatches += tsi.mismatch;
  }
  const std::size_t n = kFuzzInstances;
  bool ok = tsi_ok == n && di_ok == n && contain_ok == n && parent_ok == n;
  return {3, pass_if(ok),
          fmt::format("inference oracles: {} fuzzed instances, TSI {}/{}, DI {}/{}, containment {}/{}, "
                      "parent consistency {}/{}",
                      n, tsi_ok, n, di_ok, n, contain_ok, n, parent_ok, n),
          {fmt::format("{} instances had a hierarchical mismatch; half used small-integer logits to force ties",
                       mismatches)}};
}

// ---------------------------------------------------------------- 4
Line criterion_loss_composition() {
  auto dir = scratch("composition");
  auto cfg_path = synth_config_with_epochs(kCompositionEpochs, dir);
  auto run = cli({"train", "--config", cfg_path.string()}, dir / "out");
  if (run.code != 0) return {4, Status::kFail, "loss composition: training run failed", {run.err}};
  const double alpha = sgnet::cli::load_run_config(cfg_path).alpha;
  auto steps = read_steps(dir / "out" / "steps.csv");
  double worst = 0;
  for (const auto& s : steps) {
    double expect = (1 - alpha) * s.loss_fc + alpha * s.loss_sc;
    worst = std::max(worst, std::abs(s.loss_total - expect) / std::max(std::abs(expect), 1e-300));
  }
  bool ok = !steps.empty() && worst <= kLossCompositionTol;
  return {4, pass_if(ok),
          fmt::format("loss composition: {} logged steps over {} epochs, max |total - ((1-a) fc + a sc)| / total = "
                      "{:.2e} <= {:.0e} (alpha {})",
                      steps.size(), kCompositionEpochs, worst, kLossCompositionTol, alpha),
          {}};
}

// ---------------------------------------------------------------- 5
double direct_ce(const std::vector<double>& v, std::size_t begin, std::size_t end, std::size_t target) {
  long double z = 0;
  for (std::size_t i = begin; i < end; ++i) z += std::exp(static_cast<long double>(v[i]));
  return static_cast<double>(std::log(z) - v[begin + target]);
}

Line criterion_detection() {
  auto cfg = sgnet::DetectionHeadConfig::from_taxonomy(sgnet::coco_taxonomy());
  std::vector<std::string> details;
  const bool sizes = cfg.c() == 94 && cfg.c_sc == 13 && cfg.c_fc == 81;

  std::mt19937_64 rng(5);
  std::normal_distribution<double> d(0, 3);
  std::uniform_int_distribution<int> label(0, cfg.c_fc - 1);
  bool roundtrip = true;
  double worst_loss = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(cfg.c());
    for (auto& x : v) x = d(rng);
    auto [sc, fc] = sgnet::split_scores<double>(v, cfg);
    roundtrip = roundtrip && sgnet::concat_scores<double>(sc, fc, cfg) == v &&
                std::equal(sc.begin(), sc.end(), v.begin()) && std::equal(fc.begin(), fc.end(), v.begin() + 13);
    std::vector<int> gt{label(rng)};
    auto l = sgnet::detection_class_loss(sgnet::Tensor64({1, v.size()}, v), gt, cfg);
    double expect = direct_ce(v, 0, 13, cfg.taxonomy.finer_to_super(gt[0])) + direct_ce(v, 13, 94, gt[0]);
    worst_loss = std::max(worst_loss, std::abs(l.total - expect) / expect);
  }
  details.push_back(fmt::format("C = {} = {} + {}; 200 random vectors: split/concat exact {}, max rel loss error {:.2e}",
                                cfg.c(), cfg.c_sc, cfg.c_fc, roundtrip ? "yes" : "NO", worst_loss));

  auto harness = sgnet::synth_roi_harness(cfg, 400, 0.0, 17);
  auto fit = sgnet::train_roi_scorer(harness, cfg, kRoiSteps, kRoiLr);
  int reached = -1;
  for (std::size_t i = 0; i < fit.losses.size(); ++i) {
    if (fit.losses[i] < kRoiLossTarget) {
      reached = static_cast<int>(i);
      break;
    }
  }
  std::size_t tsi_ok = 0, di_ok = 0;
  for (std::size_t i = 0; i < harness.samples.size(); ++i) {
    auto row = fit.scores.data().subspan(i * cfg.c(), cfg.c());
    tsi_ok += sgnet::roi_predict<double>(row, cfg, sgnet::InferenceMode::kTsi).finer_id == harness.samples[i].finer_label;
    di_ok += sgnet::roi_predict<double>(row, cfg, sgnet::InferenceMode::kDi).finer_id == harness.samples[i].finer_label;
  }
  const std::size_t n = harness.samples.size();
  details.push_back(fmt::format("zero-noise RoI harness, {} RoIs, momentum SGD lr {}: loss {:.4f} -> {:.2e}, below {} "
                                "at step {}",
                                n, kRoiLr, fit.losses.front(), fit.losses.back(), kRoiLossTarget, reached));
  bool ok = sizes && roundtrip && worst_loss <= kDetectionLossTol && reached >= 0 && reached < kRoiSteps &&
            tsi_ok == n && di_ok == n;
  return {5, pass_if(ok),
          fmt::format("detection split: 94 = 13 + 81, loss = sum of segment CEs within {:.0e}, RoI loss < {} within "
                      "{} steps, accuracy TSI {}/{} DI {}/{}",
                      kDetectionLossTol, kRoiLossTarget, kRoiSteps, tsi_ok, n, di_ok, n),
          details};
}

// ---------------------------------------------------------------- 6
Status synthetic_run(std::vector<std::string>& details) {
  auto dir = scratch("synthetic");
  auto start = Clock::now();
  auto run = cli({"train", "--config", source_path("configs/synth-2x2.json").string()}, dir);
  double secs = seconds_since(start);
  if (run.code != 0) {
    details.push_back("synthetic 2x2 run failed: " + run.err);
    return Status::kFail;
  }
  auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  auto log = nlohmann::json::parse(slurp(dir / "run_log.json"));
  bool ok = secs < kSynthBudgetSeconds && log.at("epochs").size() == static_cast<std::size_t>(kSynthEpochs);
  for (const auto& m : summary.at("final")) {
    double f = m.at("finer_top1"), s = m.at("super_top1");
    ok = ok && f >= kSynthFinerTarget && s >= kSynthSuperTarget;
    details.push_back(fmt::format("(b) synthetic 2x2, {} epochs, held-out {} ({} samples): finer {:.2f}% (>= {:.0f}%), "
                                  "super {:.2f}% (>= {:.0f}%)",
                                  kSynthEpochs, m.at("mode").get<std::string>(), m.at("samples").get<int>(), 100 * f,
                                  100 * kSynthFinerTarget, 100 * s, 100 * kSynthSuperTarget));
  }
  details.push_back(fmt::format("(b) wall time {:.1f}s (< {:.0f}s)", secs, kSynthBudgetSeconds));
  return pass_if(ok);
}

Status overfit_run(std::vector<std::string>& details) {
  auto dir = cifar_dir();
  if (!dir) {
    details.push_back("(a) 64-image CIFAR overfit: BLOCKED, " + kCifarHint);
    return Status::kBlocked;
  }
  auto cfg = sgnet::cli::load_run_config(source_path("configs/cifar-overfit-64.json"));
  cfg.dataset.train = *dir / "train.bin";
  auto data = sgnet::cli::load_run_data(cfg);
  if (data.train.size() != kOverfitImages) {
    details.push_back(fmt::format("(a) expected {} images, config yields {}", kOverfitImages, data.train.size()));
    return Status::kFail;
  }
  sgnet::SgnetModel<float> model(cfg.architecture, cfg.seed);
  sgnet::TrainOptions opt;
  opt.schedule = cfg.schedule;
  opt.alpha = cfg.alpha;
  opt.seed = cfg.seed;
  opt.augment = cfg.augment;
  opt.geometry = data.geometry;
  opt.normalization = data.normalization;
  std::vector<sgnet::EvalSet> evals{{"train", data.train}};
  auto start = Clock::now();
  auto log = sgnet::train(model, data.train, data.taxonomy, opt, evals);
  double secs = seconds_since(start);
  int first = -1;
  double best = 0;
  for (const auto& e : log.epochs) {
    for (const auto& r : e.eval) {
      if (r.metrics.mode != sgnet::InferenceMode::kDi) continue;
      best = std::max(best, r.metrics.finer_top1);
      if (first < 0 && r.metrics.finer_top1 >= kOverfitTarget) first = e.epoch;
    }
  }
  details.push_back(fmt::format("(a) 64-image CIFAR overfit, {} ({} params): best train finer accuracy {:.2f}%, "
                                "first >= {:.0f}% at epoch {}, {:.1f}s (< {:.0f}s)",
                                cfg.architecture.name, sgnet::parameter_count(cfg.architecture), 100 * best,
                                100 * kOverfitTarget, first, secs, kOverfitBudgetSeconds));
  return pass_if(first >= 0 && first < kOverfitEpochs && secs < kOverfitBudgetSeconds);
}

Line criterion_learning(bool core, bool cifar) {
  std::vector<std::string> details;
  Status b = core ? synthetic_run(details) : Status::kPass;
  Status a = Status::kPass;
  if (cifar) {
    a = overfit_run(details);
  } else {
    details.push_back("(a) 64-image CIFAR overfit: run by --cifar");
  }
  std::string summary = "desk-scale learning: (a) CIFAR overfit sanity, (b) synthetic hierarchy";
  if (!cifar) summary += " [(b) only here; (a) is the --cifar part]";
  if (!core) summary += " [(a) only here]";
  return {6, combine({a, b}), summary, details};
}

// ---------------------------------------------------------------- 7
Line criterion_determinism(fs::path& checkpoint_out) {
  auto dir = scratch("determinism");
  auto cfg_path = synth_config_with_epochs(3, dir);
  auto a = cli({"train", "--config", cfg_path.string()}, dir / "a");
  auto b = cli({"train", "--config", cfg_path.string()}, dir / "b");
  if (a.code != 0 || b.code != 0) return {7, Status::kFail, "determinism: training failed", {a.err, b.err}};
  bool steps = slurp(dir / "a" / "steps.csv") == slurp(dir / "b" / "steps.csv");
  bool curve = slurp(dir / "a" / "loss_curve.csv") == slurp(dir / "b" / "loss_curve.csv");
  bool ckpt = true;
  for (const char* sub : {"latest", "best"}) {
    for (const char* file : {"model.bin", "model.manifest"}) {
      auto pa = dir / "a" / "checkpoints" / sub / file;
      ckpt = ckpt && fs::exists(pa) && slurp(pa) == slurp(dir / "b" / "checkpoints" / sub / file);
    }
  }
  checkpoint_out = dir / "a" / "checkpoints" / "best";
  auto n_steps = read_steps(dir / "a" / "steps.csv").size();
  return {7, pass_if(steps && curve && ckpt),
          fmt::format("determinism: two seeded runs, {} step losses bitwise {}, loss curve {}, checkpoints {}", n_steps,
                      steps ? "identical" : "DIFFER", curve ? "identical" : "DIFFERS", ckpt ? "identical" : "DIFFER"),
          {}};
}

// ---------------------------------------------------------------- 8
std::vector<std::string> split_cells(const std::string& row) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    auto next = row.find(" | ", pos);
    auto cell = trim(row.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    out.push_back(cell);
    if (next == std::string::npos) break;
    pos = next + 3;
  }
  return out;
}

std::vector<std::string> header_of(const std::string& text) {
  std::stringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') return split_cells(line);
  }
  return {};
}

Line criterion_reports(const fs::path& checkpoint) {
  std::vector<std::string> details;
  auto eval = cli({"eval", "--checkpoint", checkpoint.string(), "--dataset", "config:test", "--mode", "both"});
  auto eh = header_of(eval.out);
  const std::vector<std::string> want_eval{"Accuracy (%)", "Inference Time", "# Params"};
  bool eval_ok = eval.code == 0 && eh.size() >= 5 && eh[0] == "Model";
  for (const auto& c : want_eval) eval_ok = eval_ok && std::find(eh.begin(), eh.end(), c) != eh.end();
  std::size_t rows = 0;
  {
    std::stringstream in(eval.out);
    for (std::string l; std::getline(in, l);) rows += l.find("(TSI)") != std::string::npos || l.find("(DI)") != std::string::npos;
  }
  eval_ok = eval_ok && rows == 2;
  details.push_back(fmt::format("eval header: {}; {} mode rows", fmt::join(eh, " | "), rows));

  auto analyze = cli({"analyze", "--checkpoint", checkpoint.string(), "--dataset", "config:test"});
  auto ah = header_of(analyze.out);
  const std::vector<std::string> want_analyze{"Mismatch", "Correct SC", "Correct FC", "Correct Combined"};
  bool analyze_ok = analyze.code == 0 && ah == want_analyze;
  details.push_back(fmt::format("analyze header: {}", fmt::join(ah, " | ")));

  bool params_ok = true;
  for (auto [file, target] : {std::pair{"configs/vgg16-sgnet-cifar.json", 40.8e6},
                              std::pair{"configs/vgg16-baseline-cifar.json", 34.0e6}}) {
    auto cfg = sgnet::cli::load_run_config(source_path(file));
    double n = static_cast<double>(sgnet::parameter_count(cfg.architecture));
    double rel = std::abs(n - target) / target;
    params_ok = params_ok && rel <= kParamTolerance;
    details.push_back(fmt::format("{}: {:.0f} parameters, {:.2f}% from {:.1f}M (<= {:.0f}%)", file, n, 100 * rel,
                                  target / 1e6, 100 * kParamTolerance));
  }
  return {8, pass_if(eval_ok && analyze_ok && params_ok),
          "report fidelity: eval and analyze table layouts, shipped VGG-16 parameter counts within 2%", details};
}

// ---------------------------------------------------------------- 9
Line criterion_scope() {
  auto cfg = sgnet::cli::load_run_config(source_path("configs/vgg16-sgnet-cifar.json"));
  const auto& s = cfg.schedule;
  bool recipe = s.base_lr == 0.1 && s.milestones == std::vector<int>{60, 120, 160} && s.gamma == 0.2 &&
                s.warmup_epochs == 1 && s.batch_size == 128 && s.total_epochs == 200 && cfg.alpha == 0.5 &&
                cfg.augment;
  return {9, pass_if(recipe),
          "NOT reproducible at desk scale, stated explicitly: CIFAR-100 top-1 72.84%, mismatch counts "
          "537/189/132/113 and COCO AP 29.2 are full-scale GPU results and are not claimed here",
          {fmt::format("full-scale recipe shipped in configs/vgg16-sgnet-cifar.json: lr {} decayed x{} at {}, warmup {} "
                       "epoch, batch {}, {} epochs, alpha {}: {}",
                       s.base_lr, s.gamma, fmt::join(s.milestones, "/"), s.warmup_epochs, s.batch_size, s.total_epochs,
                       cfg.alpha, recipe ? "present" : "MISSING")}};
}

void print(const Line& l) {
  std::cout << fmt::format("[{}] criterion {}: {}\n", label(l.status), l.id, l.summary);
  for (const auto& d : l.details) std::cout << "       " << d << "\n";
  std::cout.flush();
}

}  // namespace

int main(int argc, char** argv) {
  bool core = true, cifar = true;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--core") {
      cifar = false;
    } else if (a == "--cifar") {
      core = false;
    } else {
      std::cerr << "usage: sgnet_acceptance [--core | --cifar]\n";
      return 2;
    }
  }

  std::vector<Line> lines;
  auto emit = [&](Line l) {
    print(l);
    lines.push_back(std::move(l));
  };
  try {
    if (core) {
      emit(criterion_gradients());
      emit(criterion_taxonomy(true, cifar));
      emit(criterion_inference());
      emit(criterion_loss_composition());
      emit(criterion_detection());
      emit(criterion_learning(true, cifar));
      fs::path checkpoint;
      emit(criterion_determinism(checkpoint));
      emit(criterion_reports(checkpoint));
      emit(criterion_scope());
    } else {
      if (!cifar_dir()) {
        std::cout << "[BLOCKED] criterion 2 (file consistency) and criterion 6(a): " << kCifarHint << "\n";
        return 77;
      }
      emit(criterion_taxonomy(false, true));
      emit(criterion_learning(false, true));
    }
  } catch (const std::exception& e) {
    std::cout << "[FAIL] harness error: " << e.what() << "\n";
    return 1;
  }

  std::size_t pass = 0, fail = 0, blocked = 0;
  for (const auto& l : lines) {
    pass += l.status == Status::kPass;
    fail += l.status == Status::kFail;
    blocked += l.status == Status::kBlocked;
  }
  std::cout << fmt::format("summary: {} passed, {} failed, {} blocked\n", pass, fail, blocked);
  return fail == 0 ? 0 : 1;
}
