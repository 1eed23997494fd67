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

#include "sgnet/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "sgnet/errors.hpp"

namespace sgnet {

GradCheckResult grad_check(const std::function<Tensor64()>& computation,
                           std::span<Tensor64> inputs, double eps,
                           double floor) {
  if (!(eps > 0.0 && eps <= 1e-3)) {
    throw UsageError(fmt::format("grad_check eps must lie in (0, 1e-3], got {}", eps));
  }
  if (!(floor > 0.0)) throw UsageError("grad_check floor must be positive");
  for (auto& in : inputs) {
    in.set_requires_grad(true);
    in.zero_grad();
  }

  Tensor64 out = computation();
  if (out.numel() != 1) {
    throw UsageError("grad_check needs a scalar computation, got shape " + shape_str(out.shape()));
  }
  // A computation that ignores every input records no graph; its analytic
  // gradient is zero everywhere.
  if (out.requires_grad()) backward(out);

  std::vector<std::vector<double>> analytic;
  analytic.reserve(inputs.size());
  for (auto& in : inputs) {
    if (in.has_grad()) {
      auto g = in.grad();
      analytic.emplace_back(g.begin(), g.end());
    } else {
      analytic.emplace_back(in.numel(), 0.0);
    }
  }

  GradCheckResult result;
  NoGradGuard no_grad;
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    auto values = inputs[t].mutable_data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double original = values[i];
      values[i] = original + eps;
      const double f_plus = computation().item();
      values[i] = original - eps;
      const double f_minus = computation().item();
      values[i] = original;

      const double numeric = (f_plus - f_minus) / (2.0 * eps);
      const double a = analytic[t][i];
      const double denom = std::max({std::abs(a), std::abs(numeric), floor});
      const double rel = std::abs(a - numeric) / denom;
      ++result.elements_checked;
      if (result.worst.empty() || rel > result.max_relative_error) {
        result.max_relative_error = rel;
        result.worst = fmt::format("input#{}[{}]", t, i);
        result.worst_analytic = a;
        result.worst_numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace sgnet
