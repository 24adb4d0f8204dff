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

#include "sketchinv/image.hpp"

namespace sketchinv {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Five facial landmarks in source pixel coordinates (pixel centers at integers).
struct LandmarkSet {
  Point left_eye, right_eye, nose, left_mouth, right_mouth;

  Point eye_center() const;
  Point mouth_center() const;
  // Order: left eye, right eye, nose, left mouth corner, right mouth corner.
  static LandmarkSet from_array(const std::array<Point, 5>& pts);
  std::array<Point, 5> to_array() const;
};

// Canonical geometry of a 96 x 96 crop: eye center at row 38, mouth center at
// row 70 (26 rows above the bottom), both centered horizontally.
struct CropGeometry {
  static constexpr double kReferenceSize = 96.0;
  static constexpr double kEyeRow = 38.0;
  static constexpr double kMouthRow = 70.0;
  static constexpr double kCenterColumn = 48.0;

  // Targets for an output of `size` pixels, scaled from the 96-pixel reference.
  static double eye_row(std::size_t size) { return kEyeRow * static_cast<double>(size) / kReferenceSize; }
  static double mouth_row(std::size_t size) { return kMouthRow * static_cast<double>(size) / kReferenceSize; }
  static double center_column(std::size_t size) {
    return kCenterColumn * static_cast<double>(size) / kReferenceSize;
  }
};

// Scale + translation mapping the eye center to (48, 38) and the mouth
// center to (48, 70) of a 96 x 96 grid (proportionally for other sizes).
// The horizontal anchor is the mean of the eye-center and mouth-center
// columns. Bilinear sampling with edge replication. Gray sources are
// replicated to RGB.
struct AlignTransform {
  double scale;     // output pixels per source pixel
  double source_cx;  // source column mapped to the output center column
  double source_ey;  // source row mapped to the eye row
  std::size_t size;

  Point to_output(Point source) const;
  Point to_source(Point output) const;
};

AlignTransform alignment_for(const LandmarkSet& lm, std::size_t width, std::size_t height, std::size_t size = 96);

ImageU8 align_crop(const ImageU8& photo, const LandmarkSet& lm, std::size_t size = 96);

// Bilinear sample with edge replication.
float sample_bilinear(const ImageU8& img, double x, double y, std::size_t c);

}  // namespace sketchinv
