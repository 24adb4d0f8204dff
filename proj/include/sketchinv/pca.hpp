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

#include <array>
#include <vector>

#include "sketchinv/image.hpp"
#include "sketchinv/tensor.hpp"

namespace sketchinv {

// Projection of a C-channel feature map onto its top three principal
// components, computed over spatial positions. Missing components (C < 3)
// are zero. Each component's sign makes its largest-magnitude loading positive.
struct PcaProjection {
  std::size_t channels = 0;
  std::size_t positions = 0;
  std::vector<double> mean;                  // C
  std::array<std::vector<double>, 3> basis;  // each of length C (unit or zero)
  std::array<double, 3> variances{};         // eigenvalues, descending
  std::vector<double> scores;                // positions x 3
};

// `features` is channel-major: features[c * positions + p].
PcaProjection pca_top3(const float* features, std::size_t channels, std::size_t positions);

// Rescales each component to [0, 255] over positions; a constant component
// maps to mid-gray (127.5, rounded to 128).
ImageU8 pca_image(const PcaProjection& pca, std::size_t width, std::size_t height);

// Visualizes sample `index` of an N x C x H x W activation tensor.
ImageU8 visualize_feature_map(const Tensor& activations, std::size_t index = 0);

}  // namespace sketchinv
