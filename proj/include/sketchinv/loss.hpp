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
#include <vector>

#include "sketchinv/layers.hpp"
#include "sketchinv/tensor_file.hpp"

namespace sketchinv {

struct LossWeights {
  double pixel = 1.0;
  double feature = 1.0;
  double tv = 1e-5;

  void validate() const;
};

inline constexpr std::uint64_t kDefaultFeatureSeed = 0x5EEDF00DULL;

// Fixed feature transform used by the feature loss. The default stack mirrors
// the first two VGG-16 stages: conv(3->64) relu conv(64->64) relu maxpool
// conv(64->128) relu conv(128->128) relu. Weights never receive gradients.
template <typename T>
class BasicFeatureExtractor {
 public:
  static constexpr std::size_t kConvs = 4;

  // Pass-through transform; reduces the feature loss to the pixel loss.
  static BasicFeatureExtractor identity();
  // He-uniform random weights from a fixed seed.
  static BasicFeatureExtractor seeded(std::uint64_t seed = kDefaultFeatureSeed);
  // Reads phi.conv{1..4}.{weight,bias}; shapes must match the stack above.
  static BasicFeatureExtractor from_file(const TensorFile& file);

  Var<T> operator()(const Var<T>& images) const;

  bool is_identity() const { return weights_.empty(); }
  void export_weights(TensorFile& file) const;

  template <typename U>
  BasicFeatureExtractor<U> cast() const {
    BasicFeatureExtractor<U> out;
    for (const auto& w : weights_) out.weights_.push_back(w.template cast<U>());
    for (const auto& b : biases_) out.biases_.push_back(b.template cast<U>());
    return out;
  }

 private:
  template <typename U>
  friend class BasicFeatureExtractor;

  std::vector<BasicTensor<T>> weights_;
  std::vector<BasicTensor<T>> biases_;
};

using FeatureExtractor = BasicFeatureExtractor<float>;

// Mean over elements of (t - y)^2.
template <typename T>
Var<T> pixel_loss(const Var<T>& t, const Var<T>& y);

// Mean over feature coordinates of (phi(t) - phi(y))^2. Images must be N x 3 x H x W.
template <typename T>
Var<T> feature_loss(const Var<T>& t, const Var<T>& y, const BasicFeatureExtractor<T>& phi);

// Sum of sqrt(dv^2 + dh^2) over interior pixels, batch and channels.
template <typename T>
Var<T> tv_loss(const Var<T>& y);

template <typename T>
struct LossTerms {
  Var<T> total;
  Var<T> pixel;
  Var<T> feature;  // invalid when the feature weight is zero (not evaluated)
  Var<T> tv;
};

// weights.pixel * pixel + weights.feature * feature + weights.tv * tv.
// Zero-weight terms are left out of the sum.
template <typename T>
LossTerms<T> total_loss(const Var<T>& t, const Var<T>& y, const BasicFeatureExtractor<T>& phi,
                        const LossWeights& weights);

}  // namespace sketchinv
