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
#include <functional>
#include <span>

#include "sketchinv/adam.hpp"
#include "sketchinv/autograd.hpp"

namespace sketchinv {

struct GradCheckOptions {
  double step = 1e-3;
  std::size_t samples = 200;
  std::uint64_t seed = 0;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t coordinates = 0;
};

// Compares analytic gradients of a scalar objective against central finite
// differences. Coordinates are drawn round-robin over `params` so that small
// tensors (biases, batch-norm affine terms) are always covered. The relative
// error of one coordinate is |analytic - numeric| / max(1, |analytic|, |numeric|).
// `objective` must rebuild the graph from the current parameter values.
template <typename T>
GradCheckResult grad_check(const std::function<Var<T>()>& objective, std::span<Parameter<T>* const> params,
                           const GradCheckOptions& options = {});

}  // namespace sketchinv
