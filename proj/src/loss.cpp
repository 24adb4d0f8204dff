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

#include "sketchinv/loss.hpp"

#include <cmath>

#include "sketchinv/error.hpp"
#include "sketchinv/random.hpp"

namespace sketchinv {
namespace {

struct PhiConv {
  std::size_t in, out;
};
constexpr PhiConv kPhiConvs[4] = {{3, 64}, {64, 64}, {64, 128}, {128, 128}};

std::string phi_name(std::size_t i, const char* what) {
  return "phi.conv" + std::to_string(i + 1) + "." + what;
}

}  // namespace

void LossWeights::validate() const {
  if (!(pixel >= 0.0) || !(feature >= 0.0) || !(tv >= 0.0)) {
    throw ValidationError("loss weights must be non-negative");
  }
}

template <typename T>
BasicFeatureExtractor<T> BasicFeatureExtractor<T>::identity() {
  return BasicFeatureExtractor();
}

template <typename T>
BasicFeatureExtractor<T> BasicFeatureExtractor<T>::seeded(std::uint64_t seed) {
  Rng rng(seed);
  BasicFeatureExtractor phi;
  for (const auto& c : kPhiConvs) {
    const double bound = std::sqrt(6.0 / static_cast<double>(c.in * 9));
    BasicTensor<T> w(Shape{c.out, c.in, 3, 3});
    for (auto& v : w.data()) v = static_cast<T>(rng.uniform(-bound, bound));
    phi.weights_.push_back(std::move(w));
    phi.biases_.push_back(BasicTensor<T>(Shape{c.out}));
  }
  return phi;
}

template <typename T>
BasicFeatureExtractor<T> BasicFeatureExtractor<T>::from_file(const TensorFile& file) {
  BasicFeatureExtractor phi;
  for (std::size_t i = 0; i < kConvs; ++i) {
    const auto& c = kPhiConvs[i];
    phi.weights_.push_back(require_tensor(file, phi_name(i, "weight"), Shape{c.out, c.in, 3, 3}).cast<T>());
    phi.biases_.push_back(require_tensor(file, phi_name(i, "bias"), Shape{c.out}).cast<T>());
  }
  return phi;
}

template <typename T>
void BasicFeatureExtractor<T>::export_weights(TensorFile& file) const {
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    file.tensors[phi_name(i, "weight")] = weights_[i].template cast<float>();
    file.tensors[phi_name(i, "bias")] = biases_[i].template cast<float>();
  }
}

template <typename T>
Var<T> BasicFeatureExtractor<T>::operator()(const Var<T>& images) const {
  if (is_identity()) return images;
  Var<T> x = images;
  for (std::size_t i = 0; i < kConvs; ++i) {
    x = relu(conv2d(x, Var<T>::constant(weights_[i]), Var<T>::constant(biases_[i]), 1, 1));
    if (i == 1) x = max_pool2x2(x);
  }
  return x;
}

template <typename T>
Var<T> pixel_loss(const Var<T>& t, const Var<T>& y) {
  return mean_squared_error(t, y);
}

template <typename T>
Var<T> feature_loss(const Var<T>& t, const Var<T>& y, const BasicFeatureExtractor<T>& phi) {
  for (const Var<T>* v : {&t, &y}) {
    require_rank4(v->shape(), "feature_loss input");
    if (v->shape()[1] != 3) {
      throw ValidationError("feature_loss needs 3-channel images, got " + std::to_string(v->shape()[1]));
    }
  }
  if (t.shape() != y.shape()) {
    throw ValidationError("feature_loss: shape " + shape_string(t.shape()) + " does not match " +
                          shape_string(y.shape()));
  }
  if (!phi.is_identity() && (t.shape()[2] % 2 != 0 || t.shape()[3] % 2 != 0)) {
    throw ValidationError("feature_loss needs even spatial size, got " + shape_string(t.shape()));
  }
  return mean_squared_error(phi(t), phi(y));
}

template <typename T>
Var<T> tv_loss(const Var<T>& y) {
  return total_variation(y);
}

template <typename T>
LossTerms<T> total_loss(const Var<T>& t, const Var<T>& y, const BasicFeatureExtractor<T>& phi,
                        const LossWeights& weights) {
  weights.validate();
  LossTerms<T> terms;
  terms.pixel = pixel_loss(t, y);
  terms.tv = tv_loss(y);
  if (weights.feature > 0.0) terms.feature = feature_loss(t, y, phi);

  Var<T> sum;
  auto accumulate = [&](const Var<T>& term, double weight) {
    if (weight == 0.0) return;
    Var<T> scaled = weight == 1.0 ? term : affine(term, static_cast<T>(weight), T{0});
    sum = sum.valid() ? add(sum, scaled) : scaled;
  };
  accumulate(terms.pixel, weights.pixel);
  accumulate(terms.feature, weights.feature);
  accumulate(terms.tv, weights.tv);
  terms.total = sum.valid() ? sum : affine(terms.pixel, T{0}, T{0});
  return terms;
}

#define SKETCHINV_INSTANTIATE(T)                                                                          \
  template class BasicFeatureExtractor<T>;                                                                \
  template Var<T> pixel_loss(const Var<T>&, const Var<T>&);                                               \
  template Var<T> feature_loss(const Var<T>&, const Var<T>&, const BasicFeatureExtractor<T>&);            \
  template Var<T> tv_loss(const Var<T>&);                                                                 \
  template LossTerms<T> total_loss(const Var<T>&, const Var<T>&, const BasicFeatureExtractor<T>&,         \
                                   const LossWeights&);

SKETCHINV_INSTANTIATE(float)
SKETCHINV_INSTANTIATE(double)

}  // namespace sketchinv
