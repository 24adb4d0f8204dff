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

#include <doctest.h>

#include <cmath>

#include "geometry_support.hpp"
#include "sketchinv/error.hpp"
#include "test_support.hpp"

using namespace sketchinv;
using namespace sketchinv::testing;

namespace {

LandmarkSet upright(double cx, double ey, double d) {
  return {{cx - 15, ey}, {cx + 15, ey}, {cx, ey + d / 2}, {cx - 12, ey + d}, {cx + 12, ey + d}};
}

}  // namespace

TEST_CASE("crop geometry constants") {
  CHECK(CropGeometry::eye_row(96) == 38.0);
  CHECK(CropGeometry::mouth_row(96) == 70.0);
  CHECK(CropGeometry::center_column(96) == 48.0);
  CHECK(96.0 - CropGeometry::mouth_row(96) == 26.0);
}

TEST_CASE("landmarks already in place give the central crop") {
  Rng rng(1);
  const ImageU8 src = random_image(128, 128, 3, rng);
  const ImageU8 out = align_crop(src, upright(64, 54, 32));
  REQUIRE(out.width == 96);
  for (std::size_t y = 0; y < 96; ++y)
    for (std::size_t x = 0; x < 96; ++x)
      for (std::size_t c = 0; c < 3; ++c) CHECK(out.at(x, y, c) == src.at(x + 16, y + 16, c));
}

TEST_CASE("eye to mouth distance sets the scale") {
  const auto t = alignment_for(upright(100, 60, 64), 200, 200);
  CHECK(t.scale == 0.5);
  const Point e = t.to_output({100, 60});
  const Point m = t.to_output({100, 124});
  CHECK(e.x == 48.0);
  CHECK(e.y == 38.0);
  CHECK(m.y == 70.0);
  const Point back = t.to_source(t.to_output({37.5, 81.25}));
  CHECK(back.x == doctest::Approx(37.5));
  CHECK(back.y == doctest::Approx(81.25));
}

TEST_CASE("markers land on the canonical rows") {
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    const auto mc = random_marker_case(rng);
    const ImageU8 out = align_crop(mc.photo, mc.landmarks);
    const Point eye = centroid(out, 28, 54);
    const Point mouth = centroid(out, 54, 86);
    CHECK(std::abs(eye.x - 48.0) <= 0.5);
    CHECK(std::abs(eye.y - 38.0) <= 0.5);
    CHECK(std::abs(mouth.x - 48.0) <= 0.5);
    CHECK(std::abs(mouth.y - 70.0) <= 0.5);
  }
}

TEST_CASE("aligning an aligned image is the identity") {
  Rng rng(3);
  const ImageU8 img = random_image(96, 96, 3, rng);
  const ImageU8 out = align_crop(img, upright(48, 38, 32));
  for (std::size_t i = 0; i < img.data.size(); ++i) CHECK(std::abs(int(out.data[i]) - int(img.data[i])) <= 2);
}

TEST_CASE("gray sources are replicated and sizes scale") {
  Rng rng(4);
  const ImageU8 gray = random_image(64, 64, 1, rng);
  const ImageU8 out = align_crop(gray, upright(32, 20, 24), 32);
  CHECK(out.channels == 3);
  CHECK(out.width == 32);
  const auto t = alignment_for(upright(32, 20, 24), 64, 64, 32);
  CHECK(t.to_output({32, 20}).y == doctest::Approx(38.0 / 3.0));
  CHECK(t.to_output({32, 44}).y == doctest::Approx(70.0 / 3.0));
}

TEST_CASE("invalid landmarks are rejected") {
  const ImageU8 img(100, 100, 3);
  CHECK_THROWS_AS(align_crop(img, upright(50, 40, 0)), ValidationError);
  CHECK_THROWS_AS(align_crop(img, upright(50, 80, -30)), ValidationError);
  CHECK_THROWS_AS(align_crop(img, upright(50, 80, 30)), ValidationError);
  CHECK_THROWS_AS(align_crop(img, upright(5, 20, 30)), ValidationError);
}
