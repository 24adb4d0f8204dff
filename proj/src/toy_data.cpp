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

#include "sketchinv/toy_data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "sketchinv/random.hpp"

namespace sketchinv {
namespace {

using Color = std::array<double, 3>;

struct Ellipse {
  double cx, cy, rx, ry;

  // Coverage in [0, 1] with a one-pixel soft edge.
  double coverage(double x, double y) const {
    const double dx = (x - cx) / rx, dy = (y - cy) / ry;
    const double r = std::sqrt(dx * dx + dy * dy);
    const double edge = (r - 1.0) * std::min(rx, ry);
    return std::clamp(0.5 - edge, 0.0, 1.0);
  }
};

Color random_color(Rng& rng, double lo, double hi) {
  return {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
}

void blend(Color& dst, const Color& src, double alpha) {
  for (int c = 0; c < 3; ++c) dst[c] = (1.0 - alpha) * dst[c] + alpha * src[c];
}

}  // namespace

ToyFace render_toy_face(std::uint64_t seed, std::size_t size) {
  Rng rng(seed);
  const double s = static_cast<double>(size) / 128.0;
  const Color background = random_color(rng, 20.0, 235.0);
  const Color skin = {rng.uniform(120.0, 240.0), rng.uniform(80.0, 200.0), rng.uniform(60.0, 170.0)};
  const Color hair = random_color(rng, 10.0, 200.0);
  const Color iris = random_color(rng, 10.0, 120.0);
  const Color lips = {rng.uniform(140.0, 230.0), rng.uniform(30.0, 110.0), rng.uniform(40.0, 120.0)};
  const Color shirt = random_color(rng, 10.0, 245.0);

  const double cx = (64.0 + rng.uniform(-6.0, 6.0)) * s;
  const double cy = (66.0 + rng.uniform(-5.0, 5.0)) * s;
  const double rx = rng.uniform(28.0, 36.0) * s;
  const double ry = rng.uniform(38.0, 46.0) * s;
  const Ellipse face{cx, cy, rx, ry};
  const Ellipse hair_cap{cx, cy - ry * rng.uniform(0.25, 0.45), rx * 1.12, ry * rng.uniform(0.7, 0.85)};
  const double eye_y = cy - ry * rng.uniform(0.15, 0.28);
  const double eye_dx = rx * rng.uniform(0.35, 0.48);
  const double eye_r = rng.uniform(3.0, 5.0) * s;
  const Ellipse left_eye{cx - eye_dx, eye_y, eye_r * 1.5, eye_r};
  const Ellipse right_eye{cx + eye_dx, eye_y, eye_r * 1.5, eye_r};
  const Ellipse left_iris{cx - eye_dx, eye_y, eye_r * 0.7, eye_r * 0.7};
  const Ellipse right_iris{cx + eye_dx, eye_y, eye_r * 0.7, eye_r * 0.7};
  const double nose_y = cy + ry * rng.uniform(0.05, 0.15);
  const Ellipse nose{cx, nose_y, rx * 0.12, ry * 0.1};
  const double mouth_y = cy + ry * rng.uniform(0.4, 0.52);
  const double mouth_dx = rx * rng.uniform(0.25, 0.4);
  const Ellipse mouth{cx, mouth_y, mouth_dx, rng.uniform(2.0, 4.5) * s};
  const Ellipse body{cx, cy + ry * 1.9, rx * 1.9, ry * 1.0};
  const double shade = rng.uniform(-0.25, 0.25);

  ToyFace out;
  ImageF img(size, size, 3);
  for (std::size_t y = 0; y < size; ++y) {
    for (std::size_t x = 0; x < size; ++x) {
      const double px = static_cast<double>(x), py = static_cast<double>(y);
      Color c = background;
      blend(c, shirt, body.coverage(px, py));
      blend(c, hair, hair_cap.coverage(px, py));
      Color sk = skin;
      const double light = 1.0 + shade * (px - cx) / rx;
      for (auto& v : sk) v *= light;
      const double fc = face.coverage(px, py) * (1.0 - 0.9 * std::clamp((hair_cap.cy - py) / (8.0 * s), 0.0, 1.0));
      blend(c, sk, fc);
      blend(c, {245.0, 245.0, 245.0}, std::max(left_eye.coverage(px, py), right_eye.coverage(px, py)));
      blend(c, iris, std::max(left_iris.coverage(px, py), right_iris.coverage(px, py)));
      Color nose_color = sk;
      for (auto& v : nose_color) v *= 0.75;
      blend(c, nose_color, nose.coverage(px, py));
      blend(c, lips, mouth.coverage(px, py));
      for (std::size_t k = 0; k < 3; ++k) img.at(x, y, k) = static_cast<float>(c[k] + rng.uniform(-4.0, 4.0));
    }
  }
  out.photo = quantize(img);
  out.landmarks = LandmarkSet{{cx - eye_dx, eye_y},
                              {cx + eye_dx, eye_y},
                              {cx, nose_y},
                              {cx - mouth_dx, mouth_y},
                              {cx + mouth_dx, mouth_y}};
  return out;
}

DatasetManifest write_toy_corpus(const std::filesystem::path& dir, std::size_t count, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  DatasetManifest manifest;
  manifest.base_dir = dir;
  for (std::size_t i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "toy%02zu", i);
    const ToyFace face = render_toy_face(derive_seed(seed, i));
    write_png(dir / (std::string(name) + ".png"), face.photo);
    ManifestRecord r;
    r.path = std::string(name) + ".png";
    r.identity = name;
    r.landmarks = face.landmarks;
    manifest.records.push_back(std::move(r));
  }
  return manifest;
}

}  // namespace sketchinv
