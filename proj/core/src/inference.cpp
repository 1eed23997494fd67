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

#include "sgnet/inference.hpp"

#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "sgnet/errors.hpp"

namespace sgnet {
namespace {

// First index of the maximum.
template <typename T>
std::size_t argmax(std::span<const T> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

// Softmax probability of `pick` among `idx` entries of `v`.
template <typename T>
double restricted_softmax(std::span<const T> v, std::span<const int> idx, int pick) {
  double mx = -INFINITY;
  for (int i : idx) mx = std::max(mx, static_cast<double>(v[i]));
  double denom = 0.0;
  for (int i : idx) denom += std::exp(static_cast<double>(v[i]) - mx);
  return std::exp(static_cast<double>(v[pick]) - mx) / denom;
}

// Max-shifted normalizer of a softmax over all of `v`.
struct SoftmaxNorm {
  double mx = -INFINITY;
  double denom = 0.0;
  double prob(double x) const { return std::exp(x - mx) / denom; }
};

template <typename T>
SoftmaxNorm softmax_norm(std::span<const T> v) {
  SoftmaxNorm n;
  for (auto x : v) n.mx = std::max(n.mx, static_cast<double>(x));
  for (auto x : v) n.denom += std::exp(static_cast<double>(x) - n.mx);
  return n;
}

void check_length(std::size_t got, int want, const char* what) {
  if (got != static_cast<std::size_t>(want)) {
    throw ValidationError(fmt::format("{} logits have length {}, taxonomy expects {}", what, got, want));
  }
}

template <typename T>
void check_batch(const BasicTensor<T>& t, std::size_t rows, int cols, const char* what) {
  if (!t.defined() || t.rank() != 2 || t.dim(0) != rows || t.dim(1) != static_cast<std::size_t>(cols)) {
    throw ValidationError(fmt::format("{} logits must have shape [{},{}], got {}", what, rows, cols,
                                      t.defined() ? shape_str(t.shape()) : "undefined"));
  }
}

template <typename T>
std::span<const T> row(const BasicTensor<T>& t, std::size_t n) {
  return t.data().subspan(n * t.dim(1), t.dim(1));
}

}  // namespace

std::string_view mode_name(InferenceMode mode) { return mode == InferenceMode::kTsi ? "TSI" : "DI"; }

template <typename T>
Prediction predict_tsi(std::span<const T> super_logits, std::span<const T> finer_logits, const Taxonomy& t) {
  check_length(super_logits.size(), t.num_super(), "super");
  check_length(finer_logits.size(), t.num_finer(), "finer");
  Prediction p;
  p.mode = InferenceMode::kTsi;
  p.super_id = static_cast<int>(argmax(super_logits));
  p.super_confidence = softmax_norm(super_logits).prob(static_cast<double>(super_logits[p.super_id]));
  const auto members = t.members_of(p.super_id);
  int best = members[0];
  for (int f : members) {
    if (finer_logits[f] > finer_logits[best]) best = f;
  }
  p.finer_id = best;
  p.finer_confidence = restricted_softmax(finer_logits, members, best);
  p.mismatch = t.finer_to_super(static_cast<int>(argmax(finer_logits))) != p.super_id;
  return p;
}

template <typename T>
Prediction predict_di(std::span<const T> finer_logits, const Taxonomy& t) {
  check_length(finer_logits.size(), t.num_finer(), "finer");
  Prediction p;
  p.mode = InferenceMode::kDi;
  p.finer_id = static_cast<int>(argmax(finer_logits));
  p.super_id = t.finer_to_super(p.finer_id);
  const auto norm = softmax_norm(finer_logits);
  p.finer_confidence = norm.prob(static_cast<double>(finer_logits[p.finer_id]));
  double mass = 0.0;
  for (int f : t.members_of(p.super_id)) mass += norm.prob(static_cast<double>(finer_logits[f]));
  p.super_confidence = std::min(mass, 1.0);
  return p;
}

template <typename T>
std::vector<Prediction> predict_batch(const BasicTensor<T>& super_logits, const BasicTensor<T>& finer_logits,
                                      InferenceMode mode, const Taxonomy& t) {
  if (!finer_logits.defined() || finer_logits.rank() != 2) {
    throw ValidationError("finer logits must be a [N,C] tensor");
  }
  const std::size_t n = finer_logits.dim(0);
  check_batch(finer_logits, n, t.num_finer(), "finer");
  if (mode == InferenceMode::kTsi) check_batch(super_logits, n, t.num_super(), "super");
  std::vector<Prediction> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(mode == InferenceMode::kTsi ? predict_tsi(row(super_logits, i), row(finer_logits, i), t)
                                              : predict_di(row(finer_logits, i), t));
  }
  return out;
}

nlohmann::json MismatchReport::to_json() const {
  nlohmann::json c = nlohmann::json::array();
  for (const auto& x : conflicts) {
    c.push_back({{"sample", x.sample},
                 {"truth_finer", x.truth_finer},
                 {"super_argmax", x.super_argmax},
                 {"finer_argmax", x.finer_argmax},
                 {"combined_finer", x.combined_finer}});
  }
  return {{"mismatch", mismatch_count},
          {"correct_sc", correct_sc_count},
          {"correct_fc", correct_fc_count},
          {"correct_combined", correct_combined_count},
          {"total_samples", total_samples},
          {"conflicts", c}};
}

template <typename T>
MismatchReport mismatch_analysis(const BasicTensor<T>& super_logits, const BasicTensor<T>& finer_logits,
                                 std::span<const int> truth, const Taxonomy& t) {
  check_batch(finer_logits, truth.size(), t.num_finer(), "finer");
  check_batch(super_logits, truth.size(), t.num_super(), "super");
  const auto truth_super = t.derive_super_labels(truth);
  MismatchReport rep;
  rep.total_samples = truth.size();
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto p = predict_tsi(row(super_logits, i), row(finer_logits, i), t);
    if (!p.mismatch) continue;
    const int fa = static_cast<int>(argmax(row(finer_logits, i)));
    ++rep.mismatch_count;
    if (p.super_id == truth_super[i]) ++rep.correct_sc_count;
    if (fa == truth[i]) ++rep.correct_fc_count;
    if (p.finer_id == truth[i]) ++rep.correct_combined_count;
    rep.conflicts.push_back({i, truth[i], p.super_id, fa, p.finer_id});
  }
  return rep;
}

nlohmann::json Metrics::to_json() const {
  return {{"mode", std::string(mode_name(mode))},
          {"samples", samples},
          {"finer_top1", finer_top1},
          {"super_top1", super_top1},
          {"serious_error_rate", serious_error_rate},
          {"containment_violations", containment_violations},
          {"seconds_per_sample", seconds_per_sample}};
}

template <typename T>
Metrics evaluate_logits(const BasicTensor<T>& super_logits, const BasicTensor<T>& finer_logits,
                        std::span<const int> truth, InferenceMode mode, const Taxonomy& t) {
  if (truth.empty()) throw ValidationError("cannot evaluate an empty dataset");
  check_batch(finer_logits, truth.size(), t.num_finer(), "finer");
  const auto truth_super = t.derive_super_labels(truth);
  const auto preds = predict_batch(super_logits, finer_logits, mode, t);
  Metrics m;
  m.mode = mode;
  m.samples = truth.size();
  std::size_t finer_ok = 0, super_ok = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].finer_id == truth[i]) ++finer_ok;
    if (preds[i].super_id == truth_super[i]) ++super_ok;
    if (t.finer_to_super(preds[i].finer_id) != preds[i].super_id) ++m.containment_violations;
  }
  const double n = static_cast<double>(truth.size());
  m.finer_top1 = static_cast<double>(finer_ok) / n;
  m.super_top1 = static_cast<double>(super_ok) / n;
  m.serious_error_rate = 1.0 - m.super_top1;
  return m;
}

template <typename T>
LogitSet<T> collect_logits(const SgnetModel<T>& model, std::span<const DatasetRecord> records,
                           const ImageGeometry& geometry, const Normalization& normalization, bool super_head,
                           std::size_t batch_size) {
  if (records.empty()) throw ValidationError("cannot evaluate an empty dataset");
  if (super_head && !model.config().has_scb()) {
    throw UsageError("architecture '" + model.config().name + "' has no super-class branch");
  }
  NoGradGuard guard;
  LogitSet<T> out;
  std::vector<T> sup, fin;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t b = 0; b < records.size(); b += batch_size) {
    const std::size_t e = std::min(records.size(), b + batch_size);
    std::vector<std::size_t> idx;
    for (std::size_t i = b; i < e; ++i) {
      idx.push_back(i);
      out.finer_truth.push_back(records[i].finer_label);
    }
    const auto x = images_to_tensor<T>(records, idx, geometry, normalization);
    const auto o = model.forward(x, {.super_head = super_head});
    fin.insert(fin.end(), o.finer_logits.data().begin(), o.finer_logits.data().end());
    if (super_head) sup.insert(sup.end(), o.super_logits.data().begin(), o.super_logits.data().end());
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.finer_logits = BasicTensor<T>({records.size(), static_cast<std::size_t>(model.config().num_finer)}, fin);
  if (super_head) {
    out.super_logits = BasicTensor<T>({records.size(), static_cast<std::size_t>(model.config().num_super)}, sup);
  }
  return out;
}

template <typename T>
Metrics evaluate(const SgnetModel<T>& model, std::span<const DatasetRecord> records, const ImageGeometry& geometry,
                 const Normalization& normalization, InferenceMode mode, const Taxonomy& taxonomy,
                 std::size_t batch_size) {
  const auto start = std::chrono::steady_clock::now();
  const auto logits =
      collect_logits(model, records, geometry, normalization, mode == InferenceMode::kTsi, batch_size);
  auto m = evaluate_logits(logits.super_logits, logits.finer_logits, logits.finer_truth, mode, taxonomy);
  m.seconds_per_sample = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() /
                         static_cast<double>(records.size());
  return m;
}

#define SGNET_INSTANTIATE(T)                                                                                       \
  template Prediction predict_tsi<T>(std::span<const T>, std::span<const T>, const Taxonomy&);                     \
  template Prediction predict_di<T>(std::span<const T>, const Taxonomy&);                                          \
  template std::vector<Prediction> predict_batch<T>(const BasicTensor<T>&, const BasicTensor<T>&, InferenceMode,   \
                                                    const Taxonomy&);                                              \
  template MismatchReport mismatch_analysis<T>(const BasicTensor<T>&, const BasicTensor<T>&, std::span<const int>, \
                                               const Taxonomy&);                                                   \
  template Metrics evaluate_logits<T>(const BasicTensor<T>&, const BasicTensor<T>&, std::span<const int>,          \
                                      InferenceMode, const Taxonomy&);                                             \
  template LogitSet<T> collect_logits<T>(const SgnetModel<T>&, std::span<const DatasetRecord>,                     \
                                         const ImageGeometry&, const Normalization&, bool, std::size_t);           \
  template Metrics evaluate<T>(const SgnetModel<T>&, std::span<const DatasetRecord>, const ImageGeometry&,         \
                               const Normalization&, InferenceMode, const Taxonomy&, std::size_t);

SGNET_INSTANTIATE(float)
SGNET_INSTANTIATE(double)

}  // namespace sgnet
