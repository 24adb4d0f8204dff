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

#include "sketchinv/adam.hpp"

#include <cmath>

#include "sketchinv/error.hpp"

namespace sketchinv {

template <typename T>
Parameter<T>::Parameter(std::string name_, BasicTensor<T> init)
    : name(std::move(name_)),
      value(std::move(init)),
      grad(value.shape()),
      m(value.shape()),
      v(value.shape()) {}

void AdamConfig::validate() const {
  if (!(alpha > 0.0)) throw ValidationError("adam alpha must be positive");
  if (!(beta1 > 0.0 && beta1 < 1.0)) throw ValidationError("adam beta1 must lie in (0, 1)");
  if (!(beta2 > 0.0 && beta2 < 1.0)) throw ValidationError("adam beta2 must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw ValidationError("adam epsilon must be positive");
}

template <typename T>
void adam_step(std::span<Parameter<T>* const> params, const AdamConfig& config) {
  for (Parameter<T>* p : params) {
    p->step_count += 1;
    const double t = static_cast<double>(p->step_count);
    const double c1 = 1.0 - std::pow(config.beta1, t);
    const double c2 = 1.0 - std::pow(config.beta2, t);
    const T b1 = static_cast<T>(config.beta1);
    const T b2 = static_cast<T>(config.beta2);
    T* x = p->value.ptr();
    const T* g = p->grad.ptr();
    T* m = p->m.ptr();
    T* v = p->v.ptr();
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      m[i] = b1 * m[i] + (T{1} - b1) * g[i];
      v[i] = b2 * v[i] + (T{1} - b2) * g[i] * g[i];
      const double m_hat = static_cast<double>(m[i]) / c1;
      const double v_hat = static_cast<double>(v[i]) / c2;
      x[i] -= static_cast<T>(config.alpha * m_hat / (std::sqrt(v_hat) + config.epsilon));
    }
  }
}

template struct Parameter<float>;
template struct Parameter<double>;
template void adam_step(std::span<Parameter<float>* const>, const AdamConfig&);
template void adam_step(std::span<Parameter<double>* const>, const AdamConfig&);

}  // namespace sketchinv
