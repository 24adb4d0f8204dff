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

#include <cstdint>
#include <span>
#include <string>

#include "sketchinv/tensor.hpp"

namespace sketchinv {

// A trainable tensor together with its gradient and Adam moments.
template <typename T>
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, BasicTensor<T> init);

  void zero_grad() { grad.fill(T{0}); }

  std::string name;
  BasicTensor<T> value;
  BasicTensor<T> grad;
  BasicTensor<T> m;
  BasicTensor<T> v;
  std::uint64_t step_count = 0;
};

struct AdamConfig {
  double alpha = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

// One bias-corrected Adam update of every parameter. Gradients are left in
// place; the caller clears them.
template <typename T>
void adam_step(std::span<Parameter<T>* const> params, const AdamConfig& config);

extern template struct Parameter<float>;
extern template struct Parameter<double>;

}  // namespace sketchinv
