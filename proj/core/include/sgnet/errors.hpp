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

#include <stdexcept>
#include <string>

namespace sgnet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Incompatible tensor extents.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Bad input values: labels out of range, malformed documents, broken
// partitions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Unknown class name or index.
class LookupError : public Error {
 public:
  using Error::Error;
};

// API misuse, e.g. a second backward pass over a consumed graph.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Architecture or run configuration violates its invariants.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed binary or manifest file.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Training diverged (non-finite loss).
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace sgnet
