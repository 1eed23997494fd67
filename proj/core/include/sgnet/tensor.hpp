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
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace sgnet {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

namespace detail {

// One vertex of the recorded autodiff graph. Leaves have no backward
// function; op results carry the closure that pushes their gradient into
// `inputs`.
template <typename T>
struct TensorNode {
  Shape shape;
  std::vector<T> data;
  std::vector<T> grad;
  bool requires_grad = false;

  std::uint64_t sequence = 0;
  std::vector<std::shared_ptr<TensorNode>> inputs;
  std::function<void(std::span<const T>)> backward_fn;
  bool consumed = false;

  // Gradient buffer, allocated as zeros on first use.
  std::span<T> grad_buffer();
};

std::uint64_t next_sequence();

}  // namespace detail

/// Returns false inside a NoGradGuard scope. Ops then skip graph recording.
bool grad_enabled();

class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

/// Dense row-major tensor with an optional gradient slot.
///
/// A BasicTensor is a handle: copies share the same storage and graph node,
/// which is what lets the optimizer update the exact parameters a forward
/// pass used. Use clone() for an independent copy.
///
/// The scalar type doubles as the precision mode: float for training,
/// double for gradient verification.
template <typename T>
class BasicTensor {
 public:
  using value_type = T;
  using Node = detail::TensorNode<T>;

  BasicTensor() = default;
  BasicTensor(Shape shape, std::vector<T> data, bool requires_grad = false);

  static BasicTensor zeros(Shape shape, bool requires_grad = false);
  static BasicTensor filled(Shape shape, T value, bool requires_grad = false);
  static BasicTensor scalar(T value, bool requires_grad = false);

  bool defined() const { return static_cast<bool>(node_); }
  const Shape& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t dim(std::size_t axis) const;
  std::size_t numel() const;

  std::span<const T> data() const;
  // In-place writes bypass the graph; intended for parameter updates and
  // perturbation probes.
  std::span<T> mutable_data();
  T item() const;

  bool requires_grad() const;
  void set_requires_grad(bool value);
  bool has_grad() const;
  std::span<const T> grad() const;
  std::span<T> mutable_grad();
  void zero_grad();

  bool is_leaf() const;
  BasicTensor clone() const;
  BasicTensor detach() const { return clone(); }

  template <typename U>
  BasicTensor<U> cast() const;

  const std::shared_ptr<Node>& node() const { return node_; }
  static BasicTensor from_node(std::shared_ptr<Node> node);

 private:
  std::shared_ptr<Node> node_;
};

using Tensor = BasicTensor<float>;
using Tensor64 = BasicTensor<double>;

/// Reverse-mode pass from a scalar loss. Gradients accumulate into every
/// reachable tensor with requires_grad; the graph is consumed afterwards.
template <typename T>
void backward(const BasicTensor<T>& loss);

template <typename T>
template <typename U>
BasicTensor<U> BasicTensor<T>::cast() const {
  std::vector<U> out(numel());
  auto src = data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<U>(src[i]);
  return BasicTensor<U>(shape(), std::move(out), requires_grad());
}

extern template class BasicTensor<float>;
extern template class BasicTensor<double>;

}  // namespace sgnet
