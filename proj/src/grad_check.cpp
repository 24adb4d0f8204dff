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

#include "sketchinv/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sketchinv/error.hpp"
#include "sketchinv/random.hpp"

namespace sketchinv {

template <typename T>
GradCheckResult grad_check(const std::function<Var<T>()>& objective, std::span<Parameter<T>* const> params,
                           const GradCheckOptions& options) {
  if (!(options.step > 0.0)) throw ValidationError("grad_check step must be positive");
  if (params.empty()) throw ValidationError("grad_check needs at least one parameter");

  for (Parameter<T>* p : params) p->zero_grad();
  Var<T> out = objective();
  if (out.value().size() != 1) {
    throw ValidationError("grad_check objective must be scalar, got " + shape_string(out.shape()));
  }
  backward(out);
  std::vector<BasicTensor<T>> analytic;
  analytic.reserve(params.size());
  for (Parameter<T>* p : params) analytic.push_back(p->grad);

  auto evaluate = [&]() { return static_cast<double>(objective().value()[0]); };

  Rng rng(options.seed);
  GradCheckResult result;
  for (std::size_t s = 0; s < options.samples; ++s) {
    const std::size_t which = s % params.size();
    Parameter<T>& p = *params[which];
    const std::size_t idx = static_cast<std::size_t>(rng.below(p.value.size()));
    const T saved = p.value[idx];
    p.value[idx] = static_cast<T>(saved + options.step);
    const double plus = evaluate();
    p.value[idx] = static_cast<T>(saved - options.step);
    const double minus = evaluate();
    p.value[idx] = saved;
    const double numeric = (plus - minus) / (2.0 * options.step);
    const double a = analytic[which][idx];
    const double denom = std::max({1.0, std::abs(a), std::abs(numeric)});
    result.max_relative_error = std::max(result.max_relative_error, std::abs(a - numeric) / denom);
    ++result.coordinates;
  }
  return result;
}

template GradCheckResult grad_check(const std::function<Var<float>()>&, std::span<Parameter<float>* const>,
                                    const GradCheckOptions&);
template GradCheckResult grad_check(const std::function<Var<double>()>&, std::span<Parameter<double>* const>,
                                    const GradCheckOptions&);

}  // namespace sketchinv
