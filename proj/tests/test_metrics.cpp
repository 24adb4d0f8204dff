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
#include <numeric>

#include "sketchinv/error.hpp"
#include "sketchinv/metrics.hpp"
#include "test_support.hpp"

using namespace sketchinv;
using namespace sketchinv::testing;

TEST_CASE("metric config") {
  MetricConfig cfg;
  CHECK(cfg.c1() == doctest::Approx(6.5025));
  CHECK(cfg.c2() == doctest::Approx(58.5225));
  CHECK(cfg.bootstrap_resamples == 1000);
  CHECK(cfg.window == 11);
  CHECK(cfg.window_sigma == 1.5);
  cfg.bootstrap_resamples = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("psnr closed forms") {
  Rng rng(1);
  ImageU8 t = random_image(16, 12, 3, rng);
  for (auto& v : t.data) v = static_cast<std::uint8_t>(std::min<int>(v, 254));
  ImageU8 y = t;
  for (auto& v : y.data) v += 1;
  CHECK(psnr(t, y) == doctest::Approx(48.1308).epsilon(1e-3 / 48.1308));
  CHECK(psnr(t, y) == doctest::Approx(10.0 * std::log10(65025.0)));
  CHECK(psnr(t, t) == 100.0);
  CHECK(psnr(ImageU8(8, 8, 3, 0), ImageU8(8, 8, 3, 255)) == doctest::Approx(0.0));
  CHECK_THROWS_AS(psnr(t, ImageU8(16, 11, 3)), ValidationError);
}

TEST_CASE("ssim") {
  Rng rng(2);
  const ImageU8 a = random_image(24, 20, 3, rng);
  const ImageU8 b = random_image(24, 20, 3, rng);
  CHECK(std::abs(ssim(a, a) - 1.0) <= 1e-9);
  CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-12));
  CHECK(ssim(a, b) < 0.5);
  MetricConfig cfg;
  const double closed = cfg.c1() * cfg.c2() / ((255.0 * 255.0 + cfg.c1()) * cfg.c2());
  CHECK(ssim(ImageU8(16, 16, 3, 0), ImageU8(16, 16, 3, 255)) == doctest::Approx(closed).epsilon(1e-9));
  CHECK(closed == doctest::Approx(1e-4).epsilon(0.01));
  CHECK_THROWS_AS(ssim(ImageU8(10, 20, 3), ImageU8(10, 20, 3)), ValidationError);
}

TEST_CASE("pearson r") {
  Rng rng(3);
  const ImageU8 t = random_image(20, 20, 3, rng);
  CHECK(pearson_r(t, t) == doctest::Approx(1.0).epsilon(1e-12));
  ImageU8 neg = t;
  for (auto& v : neg.data) v = static_cast<std::uint8_t>(255 - v);
  CHECK(pearson_r(t, neg) == doctest::Approx(-1.0).epsilon(1e-12));
  ImageU8 small = random_image(20, 20, 3, rng);
  for (auto& v : small.data) v = static_cast<std::uint8_t>(v / 3);
  ImageU8 aff = small;
  for (auto& v : aff.data) v = static_cast<std::uint8_t>(2 * v + 7);
  CHECK(std::abs(pearson_r(small, aff) - 1.0) <= 1e-9);
}

TEST_CASE("bootstrap sem") {
  const std::vector<double> flat(50, 3.25);
  CHECK(bootstrap_sem(flat, 200, 1) == 0.0);
  std::vector<double> coin(400);
  for (std::size_t i = 0; i < coin.size(); ++i) coin[i] = static_cast<double>(i % 2);
  const double sem = bootstrap_sem(coin, 4000, 7);
  CHECK(sem == doctest::Approx(0.5 / 20.0).epsilon(0.08));
  CHECK(sem == bootstrap_sem(coin, 4000, 7));
  CHECK(sem >= 0.0);
}

TEST_CASE("report summary and serialization") {
  Rng rng(4);
  std::vector<ImageQuality> rows;
  for (int i = 0; i < 5; ++i) {
    const ImageU8 t = random_image(16, 16, 3, rng);
    ImageU8 y = t;
    for (std::size_t k = 0; k < y.data.size(); k += 3 + i) y.data[k] = static_cast<std::uint8_t>(255 - y.data[k]);
    rows.push_back(evaluate_pair("img" + std::to_string(i), t, y));
  }
  const QualityReport rep = summarize(rows);
  CHECK(rep.count == 5);
  double sp = 0.0, ss = 0.0, sr = 0.0;
  for (const auto& r : rows) {
    sp += r.psnr;
    ss += r.ssim;
    sr += r.r;
  }
  CHECK(std::abs(rep.psnr.mean - sp / 5.0) <= 1e-9);
  CHECK(std::abs(rep.ssim.mean - ss / 5.0) <= 1e-9);
  CHECK(std::abs(rep.r.mean - sr / 5.0) <= 1e-9);
  CHECK(rep.psnr.sem > 0.0);
  const std::string csv = report_csv(rep);
  CHECK(csv.rfind("image,psnr,ssim,r\n", 0) == 0);
  CHECK(csv.find("\nmean,") != std::string::npos);
  CHECK(csv.find("\nsem,") != std::string::npos);
  CHECK(report_json(rep).at("images").size() == 5);

  const QualityReport one = summarize({rows.front()});
  CHECK(one.psnr.sem == 0.0);
}

TEST_CASE("perfect reconstruction report") {
  Rng rng(5);
  std::vector<ImageQuality> rows;
  for (int i = 0; i < 3; ++i) {
    const ImageU8 t = random_image(16, 16, 3, rng);
    rows.push_back(evaluate_pair("p", t, t));
  }
  const auto rep = summarize(rows);
  CHECK(rep.ssim.mean == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.r.mean == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.psnr.mean == 100.0);
}
