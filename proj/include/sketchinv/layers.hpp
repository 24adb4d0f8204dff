// Copyright 2026 The sketchinv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <string>

#include "sketchinv/adam.hpp"
#include "sketchinv/autograd.hpp"

namespace sketchinv {

enum class Mode { kTrain, kInfer };

template <typename T>
struct BatchNormState {
  BatchNormState() = default;
  BatchNormState(const std::string& prefix, std::size_t channels, double decay = 0.9, double epsilon = 1e-5);

  std::size_t channels() const { return running_mean.size(); }

  Parameter<T> gamma;
  Parameter<T> beta;
  BasicTensor<T> running_mean;
  BasicTensor<T> running_var;
  double decay = 0.9;
  double epsilon = 1e-5;
};

// 2-D cross-correlation. weights: O x I x K x K, bias: O.
template <typename T>
Var<T> conv2d(const Var<T>& input, const Var<T>& weights, const Var<T>& bias, std::size_t stride, std::size_t pad);

// Transposed convolution, the adjoint of conv2d with the same weight tensor.
// weights: I x O x K x K where I is the input channel count; bias: O.
template <typename T>
Var<T> deconv2d(const Var<T>& input, const Var<T>& weights, const Var<T>& bias, std::size_t stride,
                std::size_t pad, std::size_t out_h, std::size_t out_w);

// Train mode normalizes with batch statistics and updates the running
// statistics in `state`; infer mode uses the running statistics only.
template <typename T>
Var<T> batch_norm(const Var<T>& input, BatchNormState<T>& state, Mode mode);

template <typename T>
Var<T> relu(const Var<T>& x);

template <typename T>
Var<T> tanh(const Var<T>& x);

// scale * x + shift, elementwise.
template <typename T>
Var<T> affine(const Var<T>& x, T scale, T shift);

template <typename T>
Var<T> add(const Var<T>& a, const Var<T>& b);

// 2x2 max pooling, stride 2.
template <typename T>
Var<T> max_pool2x2(const Var<T>& x);

// Mean of squared differences, a scalar.
template <typename T>
Var<T> mean_squared_error(const Var<T>& a, const Var<T>& b);

// Isotropic total variation summed over batch and channels.
template <typename T>
Var<T> total_variation(const Var<T>& y);

// Output spatial extent of a convolution; throws when the kernel does not fit.
std::size_t conv_output_size(std::size_t in, std::size_t kernel, std::size_t stride, std::size_t pad);

}  // namespace sketchinv
