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
#include <span>

#include "sgnet/tensor.hpp"

// Differentiable tensor operations. All ops validate shapes explicitly and
// never broadcast, except the per-channel / per-feature bias in conv2d and
// linear.
namespace sgnet::ops {

/// 2-D cross-correlation. input [N,Cin,H,W], weight [Cout,Cin,kH,kW],
/// bias [Cout]. Output extent is floor((H + 2*padding - kH)/stride) + 1.
template <typename T>
BasicTensor<T> conv2d(const BasicTensor<T>& input, const BasicTensor<T>& weight,
                      const BasicTensor<T>& bias, std::size_t stride, std::size_t padding);

/// Max pooling without padding. The gradient goes to the first maximal
/// element of each window in row-major order.
template <typename T>
BasicTensor<T> maxpool2d(const BasicTensor<T>& input, std::size_t kernel, std::size_t stride);

template <typename T>
BasicTensor<T> relu(const BasicTensor<T>& input);

/// input [N,Din] times weight [Dout,Din] transposed, plus bias [Dout].
template <typename T>
BasicTensor<T> linear(const BasicTensor<T>& input, const BasicTensor<T>& weight,
                      const BasicTensor<T>& bias);

/// [N,C,H,W] -> [N, C*H*W].
template <typename T>
BasicTensor<T> flatten(const BasicTensor<T>& input);

/// Channels of `a` first, then channels of `b`.
template <typename T>
BasicTensor<T> concat_channels(const BasicTensor<T>& a, const BasicTensor<T>& b);

/// Channels [begin, end) of a [N,C,H,W] tensor.
template <typename T>
BasicTensor<T> slice_channels(const BasicTensor<T>& input, std::size_t begin, std::size_t end);

/// Columns [begin, end) of a [N,K] tensor.
template <typename T>
BasicTensor<T> slice_columns(const BasicTensor<T>& input, std::size_t begin, std::size_t end);

/// Softmax along the last axis, stabilised by subtracting the row maximum.
template <typename T>
BasicTensor<T> softmax(const BasicTensor<T>& logits);

/// Mean over the batch of -log softmax(logits)[target]. logits [N,K].
template <typename T>
BasicTensor<T> cross_entropy(const BasicTensor<T>& logits, std::span<const int> targets);

template <typename T>
BasicTensor<T> scale(const BasicTensor<T>& input, T factor);

template <typename T>
BasicTensor<T> add(const BasicTensor<T>& a, const BasicTensor<T>& b);

/// wa*a + wb*b for same-shape tensors.
template <typename T>
BasicTensor<T> weighted_sum(const BasicTensor<T>& a, T wa, const BasicTensor<T>& b, T wb);

/// Sum of all elements, shape [1].
template <typename T>
BasicTensor<T> sum(const BasicTensor<T>& input);

/// Output spatial extent of a sliding window.
constexpr std::size_t window_extent(std::size_t in, std::size_t kernel, std::size_t stride,
                                    std::size_t padding) {
  return (in + 2 * padding - kernel) / stride + 1;
}

}  // namespace sgnet::ops
