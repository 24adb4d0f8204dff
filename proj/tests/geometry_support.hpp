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

#include <cmath>

#include "sketchinv/preprocess.hpp"
#include "sketchinv/random.hpp"

namespace sketchinv::testing {

struct MarkerCase {
  ImageU8 photo;
  LandmarkSet landmarks;
};

// Dark 320x320 photo with a bright Gaussian marker on the eye center and on
// the mouth center. Landmarks are jittered (tilt, asymmetric spacing, a
// sub-pixel horizontal offset of the mouth) but stay upright.
inline MarkerCase random_marker_case(Rng& rng) {
  constexpr std::size_t kSide = 320;
  const double scale = rng.uniform(0.35, 1.5);
  const double d = 32.0 / scale;
  const double sigma = 2.0 / scale;
  const double margin = 4.0 * sigma + 0.6 * d + 4.0;
  const double cx = rng.uniform(margin, kSide - 1.0 - margin);
  const double ey = rng.uniform(margin, kSide - 1.0 - margin - d);
  const double dx = rng.uniform(-0.5, 0.5);
  const double a = rng.uniform(0.3, 0.6) * d, b = rng.uniform(0.2, 0.5) * d;
  const double te = rng.uniform(-0.1, 0.1) * d, tm = rng.uniform(-0.1, 0.1) * d;

  MarkerCase mc;
  mc.landmarks = LandmarkSet{{cx - a, ey - te}, {cx + a, ey + te}, {cx, ey + 0.55 * d},
                             {cx + dx - b, ey + d - tm}, {cx + dx + b, ey + d + tm}};
  ImageF img(kSide, kSide, 3);
  const Point marks[2] = {{cx, ey}, {cx + dx, ey + d}};
  for (std::size_t y = 0; y < kSide; ++y) {
    for (std::size_t x = 0; x < kSide; ++x) {
      double v = 0.0;
      for (const Point& m : marks) {
        const double r2 = (x - m.x) * (x - m.x) + (y - m.y) * (y - m.y);
        v += 255.0 * std::exp(-r2 / (2.0 * sigma * sigma));
      }
      for (std::size_t c = 0; c < 3; ++c) img.at(x, y, c) = static_cast<float>(v);
    }
  }
  mc.photo = quantize(img);
  return mc;
}

// Intensity-weighted centroid of channel 0 over rows [y0, y1).
inline Point centroid(const ImageU8& img, std::size_t y0, std::size_t y1) {
  double sx = 0.0, sy = 0.0, sw = 0.0;
  for (std::size_t y = y0; y < y1; ++y) {
    for (std::size_t x = 0; x < img.width; ++x) {
      const double w = img.at(x, y, 0);
      sx += w * static_cast<double>(x);
      sy += w * static_cast<double>(y);
      sw += w;
    }
  }
  return sw > 0.0 ? Point{sx / sw, sy / sw} : Point{-1.0, -1.0};
}

}  // namespace sketchinv::testing
