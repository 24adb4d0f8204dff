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
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sketchinv/image.hpp"

namespace sketchinv {

struct MetricConfig {
  double dynamic_range = 255.0;
  double k1 = 0.01;
  double k2 = 0.03;
  std::size_t window = 11;
  double window_sigma = 1.5;
  std::size_t bootstrap_resamples = 1000;
  std::uint64_t bootstrap_seed = 0;
  // Per-channel PSNR reported for identical channels.
  double psnr_cap = 100.0;

  double c1() const { return (k1 * dynamic_range) * (k1 * dynamic_range); }
  double c2() const { return (k2 * dynamic_range) * (k2 * dynamic_range); }
  void validate() const;
};

// Channel-averaged 10 log10(DR^2 / MSE_k).
double psnr(const ImageU8& t, const ImageU8& y, const MetricConfig& cfg = {});

// Channel-averaged mean SSIM over valid Gaussian-window positions.
double ssim(const ImageU8& t, const ImageU8& y, const MetricConfig& cfg = {});

// Pearson correlation of all samples pooled into one vector pair.
double pearson_r(const ImageU8& t, const ImageU8& y);

// Standard deviation (divisor B) of B seeded resampled means.
double bootstrap_sem(std::span<const double> values, std::size_t resamples, std::uint64_t seed);

struct ImageQuality {
  std::string name;
  double psnr = 0.0;
  double ssim = 0.0;
  double r = 0.0;
};

struct MetricSummary {
  double mean = 0.0;
  double sem = 0.0;  // 0 when fewer than two images
};

struct QualityReport {
  std::vector<ImageQuality> images;
  MetricSummary psnr, ssim, r;
  std::size_t count = 0;
};

ImageQuality evaluate_pair(const std::string& name, const ImageU8& truth, const ImageU8& inverted,
                           const MetricConfig& cfg = {});
QualityReport summarize(std::vector<ImageQuality> images, const MetricConfig& cfg = {});

// One row per image, then "mean" and "sem" rows.
std::string report_csv(const QualityReport& report);
nlohmann::json report_json(const QualityReport& report);

}  // namespace sketchinv
