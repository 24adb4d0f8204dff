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

#include "sketchinv/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "sketchinv/error.hpp"

namespace sketchinv {

Point LandmarkSet::eye_center() const {
  return {(left_eye.x + right_eye.x) / 2.0, (left_eye.y + right_eye.y) / 2.0};
}

Point LandmarkSet::mouth_center() const {
  return {(left_mouth.x + right_mouth.x) / 2.0, (left_mouth.y + right_mouth.y) / 2.0};
}

LandmarkSet LandmarkSet::from_array(const std::array<Point, 5>& pts) {
  return {pts[0], pts[1], pts[2], pts[3], pts[4]};
}

std::array<Point, 5> LandmarkSet::to_array() const {
  return {left_eye, right_eye, nose, left_mouth, right_mouth};
}

Point AlignTransform::to_output(Point s) const {
  return {CropGeometry::center_column(size) + scale * (s.x - source_cx),
          CropGeometry::eye_row(size) + scale * (s.y - source_ey)};
}

Point AlignTransform::to_source(Point o) const {
  return {source_cx + (o.x - CropGeometry::center_column(size)) / scale,
          source_ey + (o.y - CropGeometry::eye_row(size)) / scale};
}

AlignTransform alignment_for(const LandmarkSet& lm, std::size_t width, std::size_t height, std::size_t size) {
  if (size == 0) throw ValidationError("crop size must be positive");
  for (const Point& p : lm.to_array()) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0.0 || p.y < 0.0 ||
        p.x > static_cast<double>(width) - 1.0 || p.y > static_cast<double>(height) - 1.0) {
      throw ValidationError("landmark (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                            ") lies outside the source image");
    }
  }
  const Point eye = lm.eye_center();
  const Point mouth = lm.mouth_center();
  const double span = mouth.y - eye.y;
  if (span == 0.0) throw ValidationError("degenerate landmarks: eye and mouth centers share a row");
  if (span < 0.0) throw ValidationError("landmarks are not upright: eye center lies below the mouth center");
  const double target_span = CropGeometry::mouth_row(size) - CropGeometry::eye_row(size);
  return {target_span / span, (eye.x + mouth.x) / 2.0, eye.y, size};
}

float sample_bilinear(const ImageU8& img, double x, double y, std::size_t c) {
  const double cx = std::clamp(x, 0.0, static_cast<double>(img.width) - 1.0);
  const double cy = std::clamp(y, 0.0, static_cast<double>(img.height) - 1.0);
  const auto x0 = static_cast<std::size_t>(std::floor(cx));
  const auto y0 = static_cast<std::size_t>(std::floor(cy));
  const std::size_t x1 = std::min(x0 + 1, img.width - 1);
  const std::size_t y1 = std::min(y0 + 1, img.height - 1);
  const double fx = cx - static_cast<double>(x0);
  const double fy = cy - static_cast<double>(y0);
  const double top = (1.0 - fx) * img.at(x0, y0, c) + fx * img.at(x1, y0, c);
  const double bottom = (1.0 - fx) * img.at(x0, y1, c) + fx * img.at(x1, y1, c);
  return static_cast<float>((1.0 - fy) * top + fy * bottom);
}

ImageU8 align_crop(const ImageU8& source, const LandmarkSet& lm, std::size_t size) {
  const ImageU8 photo = replicate_to_rgb(source);
  const AlignTransform t = alignment_for(lm, photo.width, photo.height, size);
  ImageF out(size, size, photo.channels);
  for (std::size_t y = 0; y < size; ++y) {
    for (std::size_t x = 0; x < size; ++x) {
      const Point s = t.to_source({static_cast<double>(x), static_cast<double>(y)});
      for (std::size_t c = 0; c < photo.channels; ++c) out.at(x, y, c) = sample_bilinear(photo, s.x, s.y, c);
    }
  }
  return quantize(out);
}

}  // namespace sketchinv
