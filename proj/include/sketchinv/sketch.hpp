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
#include <string>

#include "sketchinv/image.hpp"

namespace sketchinv {

enum class SketchStyle { kLine, kGrayscale, kColor };

std::string to_string(SketchStyle style);
SketchStyle parse_style(const std::string& name);
// Channel count of sketches in this style.
std::size_t style_channels(SketchStyle style);

struct LineSketchConfig {
  double blur_sigma = 3.0;  // pixels at 96x96; callers scale for other sizes
  std::array<float, 3> luma = {0.299f, 0.587f, 0.114f};

  void validate() const;
};

struct StylizeConfig {
  double sigma_s = 40.0;  // pixels at 96x96
  double sigma_r = 0.4;   // normalized intensity
  int iterations = 3;
  double edge_gain = 4.0;
  bool grayscale = false;

  void validate() const;
};

// Separable Gaussian blur, kernel truncated at ceil(4 sigma), edge replication.
// Each output is center + sum_k w_k (neighbor_k - center), which keeps flat
// regions exactly flat.
ImageF gaussian_blur(const ImageF& img, double sigma);

// if blend >= 255: 255, else min(255, base * 255 / (255 - blend)).
ImageF color_dodge(const ImageF& base, const ImageF& blend);

// gray -> negative -> blur -> dodge(gray, blurred negative) -> 8 bits.
ImageU8 line_sketch(const ImageU8& photo, const LineSketchConfig& cfg);

// Recursive edge-aware smoothing (domain transform). Intensities are in
// [0, 255]; the edge term uses intensities normalized to [0, 1].
ImageF domain_transform_filter(const ImageF& img, double sigma_s, double sigma_r, int iterations);

// Filter, attenuate by the normalized gradient magnitude of the filtered
// image, then rescale so the brightest sample is 255.
ImageU8 stylize(const ImageU8& photo, const StylizeConfig& cfg);

}  // namespace sketchinv
