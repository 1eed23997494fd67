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

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "sgnet/tensor.hpp"

namespace sgnet {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t elements_checked = 0;
  // Location of the worst element, "input#i[j]".
  std::string worst;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

/// Compares reverse-mode gradients of a scalar computation against central
/// differences (f(x+eps) - f(x-eps)) / (2 eps) for every element of every
/// input. Relative error uses the denominator max(|a|, |n|, floor). The
/// default floor reflects central-difference roundoff in double precision,
/// about 1e-16 |f| / eps: components far below 1e-6 cannot be resolved to a
/// relative 1e-4 and are compared on an absolute scale instead.
///
/// Only double tensors are accepted: finite differences in single precision
/// cannot resolve the tolerances this check is used for.
GradCheckResult grad_check(const std::function<Tensor64()>& computation,
                           std::span<Tensor64> inputs, double eps = 1e-5,
                           double floor = 1e-6);

}  // namespace sgnet
