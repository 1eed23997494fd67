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

#include "sgnet/report.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace sgnet {

std::string format_table(const std::vector<std::string>& headers, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) width[c] = headers[c].size();
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < width.size(); ++c) {
      const std::string cell = c < cells.size() ? cells[c] : "";
      if (c) out += " | ";
      out += c + 1 == width.size() ? cell : fmt::format("{:<{}}", cell, width[c]);
    }
    return out + "\n";
  };
  std::string out = line(headers);
  std::string rule;
  for (std::size_t c = 0; c < width.size(); ++c) {
    if (c) rule += "-+-";
    rule += std::string(width[c], '-');
  }
  out += rule + "\n";
  for (const auto& r : rows) out += line(r);
  return out;
}

std::string format_param_count(std::size_t n) {
  if (n >= 1'000'000) return fmt::format("{:.1f}M", static_cast<double>(n) / 1e6);
  if (n >= 1'000) return fmt::format("{:.1f}K", static_cast<double>(n) / 1e3);
  return std::to_string(n);
}

std::string accuracy_table(const std::vector<AccuracyRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    cells.push_back({r.model, fmt::format("{:.2f}", 100.0 * m.finer_top1), r.epoch,
                     fmt::format("{:.3g} ms", 1e3 * m.seconds_per_sample), format_param_count(r.params),
                     fmt::format("{:.2f}", 100.0 * m.super_top1), fmt::format("{:.2f}", 100.0 * m.serious_error_rate),
                     std::to_string(m.containment_violations)});
  }
  return format_table(kAccuracyColumns, cells);
}

std::string mismatch_table(const MismatchReport& r) {
  return format_table(kMismatchColumns, {{std::to_string(r.mismatch_count), std::to_string(r.correct_sc_count),
                                          std::to_string(r.correct_fc_count),
                                          std::to_string(r.correct_combined_count)}});
}

std::string conflict_listing(const MismatchReport& r, const Taxonomy& t) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& c : r.conflicts) {
    cells.push_back({std::to_string(c.sample), t.finer_name(c.truth_finer), t.super_name(c.super_argmax),
                     t.finer_name(c.finer_argmax), t.finer_name(c.combined_finer)});
  }
  return format_table({"Sample", "Truth", "Super Argmax", "Finer Argmax", "Combined"}, cells);
}

std::string loss_curve_csv(const RunLog& log) {
  std::string out = fmt::format("# seed={} config_digest={}\n", log.seed, log.config_digest);
  out += "epoch,loss_total,normalized\n";
  if (log.epochs.size() < 2) {
    for (const auto& e : log.epochs) out += fmt::format("{},{:.17g},0\n", e.epoch, e.loss_total);
    return out;
  }
  const auto curve = normalize_loss_curve(log);
  if (curve.degenerate) out += "# degenerate: constant loss\n";
  for (std::size_t i = 0; i < log.epochs.size(); ++i) {
    out += fmt::format("{},{:.17g},{:.17g}\n", log.epochs[i].epoch, log.epochs[i].loss_total, curve.values[i]);
  }
  return out;
}

}  // namespace sgnet
