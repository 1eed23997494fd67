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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sgnet/model.hpp"

namespace sgnet {

struct GradCheckOpReport {
  std::string op;
  int cases = 0;
  std::size_t elements = 0;
  double max_relative_error = 0.0;
  std::string worst;  // "case k input#i[j]"
};

/// Differentiable ops covered by the suite, plus "sgnet_loss" for the full
/// two-branch forward pass with the combined loss and "detection_loss".
std::vector<std::string> gradcheck_op_names();

/// Finite-difference checks in double precision on `cases` seeded random
/// instances of one op. Non-scalar outputs are reduced by a fixed random
/// projection.
GradCheckOpReport gradcheck_op(std::string_view op, int cases, std::uint64_t seed, double eps = 1e-5);

std::vector<GradCheckOpReport> run_gradcheck_suite(int cases_per_op = 100, std::uint64_t seed = 0,
                                                   double eps = 1e-5);

/// The small two-branch architecture the suite differentiates end to end.
SgnetConfig gradcheck_sgnet_config();

}  // namespace sgnet
