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

#include "sketchinv/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "sketchinv/error.hpp"
#include "sketchinv/random.hpp"

namespace sketchinv {
namespace {

void require_same(const ImageU8& t, const ImageU8& y, const char* what) {
  if (!t.same_geometry(y)) {
    throw ValidationError(std::string(what) + ": image dimensions differ (" + std::to_string(t.width) + "x" +
                          std::to_string(t.height) + "x" + std::to_string(t.channels) + " vs " +
                          std::to_string(y.width) + "x" + std::to_string(y.height) + "x" +
                          std::to_string(y.channels) + ")");
  }
}

std::vector<double> gaussian_window(std::size_t size, double sigma) {
  std::vector<double> w1(size);
  const double mid = (static_cast<double>(size) - 1.0) / 2.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    const double d = static_cast<double>(i) - mid;
    w1[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += w1[i];
  }
  std::vector<double> w(size * size);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) w[i * size + j] = w1[i] * w1[j] / (sum * sum);
  }
  return w;
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void MetricConfig::validate() const {
  if (!(dynamic_range > 0.0) || !(k1 > 0.0) || !(k2 > 0.0)) throw ValidationError("metric constants must be positive");
  if (window == 0 || !(window_sigma > 0.0)) throw ValidationError("SSIM window must be non-empty with sigma > 0");
  if (bootstrap_resamples < 1) throw ValidationError("bootstrap resamples must be >= 1");
}

double psnr(const ImageU8& t, const ImageU8& y, const MetricConfig& cfg) {
  require_same(t, y, "psnr");
  double total = 0.0;
  for (std::size_t c = 0; c < t.channels; ++c) {
    double sse = 0.0;
    for (std::size_t i = 0; i < t.pixels(); ++i) {
      const double d = static_cast<double>(t.data[i * t.channels + c]) - y.data[i * t.channels + c];
      sse += d * d;
    }
    const double mse = sse / static_cast<double>(t.pixels());
    total += mse == 0.0 ? cfg.psnr_cap : 10.0 * std::log10(cfg.dynamic_range * cfg.dynamic_range / mse);
  }
  return total / static_cast<double>(t.channels);
}

double ssim(const ImageU8& t, const ImageU8& y, const MetricConfig& cfg) {
  require_same(t, y, "ssim");
  cfg.validate();
  const std::size_t win = cfg.window;
  if (t.width < win || t.height < win) {
    throw ValidationError("ssim needs images of at least " + std::to_string(win) + "x" + std::to_string(win));
  }
  const auto w = gaussian_window(win, cfg.window_sigma);
  const double c1 = cfg.c1(), c2 = cfg.c2();
  const std::size_t out_w = t.width - win + 1, out_h = t.height - win + 1;
  double total = 0.0;
  for (std::size_t c = 0; c < t.channels; ++c) {
    double channel_sum = 0.0;
    for (std::size_t oy = 0; oy < out_h; ++oy) {
      for (std::size_t ox = 0; ox < out_w; ++ox) {
        double mt = 0, my = 0, tt = 0, yy = 0, ty = 0;
        for (std::size_t i = 0; i < win; ++i) {
          for (std::size_t j = 0; j < win; ++j) {
            const double wk = w[i * win + j];
            const double a = t.at(ox + j, oy + i, c);
            const double b = y.at(ox + j, oy + i, c);
            mt += wk * a;
            my += wk * b;
            tt += wk * a * a;
            yy += wk * b * b;
            ty += wk * a * b;
          }
        }
        const double vt = tt - mt * mt, vy = yy - my * my, cov = ty - mt * my;
        channel_sum += ((2 * mt * my + c1) * (2 * cov + c2)) / ((mt * mt + my * my + c1) * (vt + vy + c2));
      }
    }
    total += channel_sum / static_cast<double>(out_w * out_h);
  }
  return total / static_cast<double>(t.channels);
}

double pearson_r(const ImageU8& t, const ImageU8& y) {
  require_same(t, y, "pearson_r");
  const double n = static_cast<double>(t.data.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < t.data.size(); ++i) {
    mt += t.data[i];
    my += y.data[i];
  }
  mt /= n;
  my /= n;
  double st = 0.0, sy = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < t.data.size(); ++i) {
    const double a = t.data[i] - mt, b = y.data[i] - my;
    st += a * a;
    sy += b * b;
    sty += a * b;
  }
  if (st == 0.0 || sy == 0.0) throw ValidationError("pearson_r is undefined for a zero-variance image");
  return sty / std::sqrt(st * sy);
}

double bootstrap_sem(std::span<const double> values, std::size_t resamples, std::uint64_t seed) {
  if (values.size() < 2) throw ValidationError("bootstrap_sem needs at least two values");
  if (resamples < 1) throw ValidationError("bootstrap_sem needs at least one resample");
  Rng rng(seed);
  const std::size_t n = values.size();
  std::vector<double> means(resamples);
  for (auto& m : means) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += values[static_cast<std::size_t>(rng.below(n))];
    m = acc / static_cast<double>(n);
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= static_cast<double>(resamples);
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  return std::sqrt(var / static_cast<double>(resamples));
}

ImageQuality evaluate_pair(const std::string& name, const ImageU8& truth, const ImageU8& inverted,
                           const MetricConfig& cfg) {
  return {name, psnr(truth, inverted, cfg), ssim(truth, inverted, cfg), pearson_r(truth, inverted)};
}

QualityReport summarize(std::vector<ImageQuality> images, const MetricConfig& cfg) {
  cfg.validate();
  QualityReport report;
  report.count = images.size();
  auto summary = [&](auto field, std::uint64_t stream) {
    std::vector<double> values;
    for (const auto& q : images) values.push_back(q.*field);
    MetricSummary s;
    if (values.empty()) return s;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    if (values.size() >= 2) s.sem = bootstrap_sem(values, cfg.bootstrap_resamples, derive_seed(cfg.bootstrap_seed, stream));
    return s;
  };
  report.psnr = summary(&ImageQuality::psnr, 0);
  report.ssim = summary(&ImageQuality::ssim, 1);
  report.r = summary(&ImageQuality::r, 2);
  report.images = std::move(images);
  return report;
}

std::string report_csv(const QualityReport& report) {
  std::string out = "image,psnr,ssim,r\n";
  for (const auto& q : report.images) {
    out += q.name + "," + format_value(q.psnr) + "," + format_value(q.ssim) + "," + format_value(q.r) + "\n";
  }
  out += "mean," + format_value(report.psnr.mean) + "," + format_value(report.ssim.mean) + "," +
         format_value(report.r.mean) + "\n";
  out += "sem," + format_value(report.psnr.sem) + "," + format_value(report.ssim.sem) + "," +
         format_value(report.r.sem) + "\n";
  return out;
}

nlohmann::json report_json(const QualityReport& report) {
  nlohmann::json images = nlohmann::json::array();
  for (const auto& q : report.images) images.push_back({{"image", q.name}, {"psnr", q.psnr}, {"ssim", q.ssim}, {"r", q.r}});
  auto summary = [](const MetricSummary& s) { return nlohmann::json{{"mean", s.mean}, {"sem", s.sem}}; };
  return {{"count", report.count},
          {"images", images},
          {"psnr", summary(report.psnr)},
          {"ssim", summary(report.ssim)},
          {"r", summary(report.r)}};
}

}  // namespace sketchinv
