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

#include "sketchinv/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sketchinv/error.hpp"

namespace sketchinv {

std::string to_string(SketchStyle style) {
  switch (style) {
    case SketchStyle::kLine: return "line";
    case SketchStyle::kGrayscale: return "grayscale";
    case SketchStyle::kColor: return "color";
  }
  return "?";
}

SketchStyle parse_style(const std::string& name) {
  if (name == "line") return SketchStyle::kLine;
  if (name == "grayscale") return SketchStyle::kGrayscale;
  if (name == "color") return SketchStyle::kColor;
  throw ValidationError("unknown sketch style '" + name + "' (expected line, grayscale or color)");
}

std::size_t style_channels(SketchStyle style) {
  return style == SketchStyle::kColor ? 3 : 1;
}

void LineSketchConfig::validate() const {
  if (!(blur_sigma > 0.0)) throw ValidationError("line sketch blur_sigma must be positive");
  const double sum = static_cast<double>(luma[0]) + luma[1] + luma[2];
  if (std::abs(sum - 1.0) > 1e-6) throw ValidationError("luma weights must sum to 1");
}

void StylizeConfig::validate() const {
  if (!(sigma_s > 0.0) || !(sigma_r > 0.0) || !(edge_gain > 0.0)) {
    throw ValidationError("stylize sigma_s, sigma_r and edge_gain must be positive");
  }
  if (iterations < 1) throw ValidationError("stylize iterations must be >= 1");
}

namespace {

std::vector<float> gaussian_kernel(double sigma) {
  const auto radius = static_cast<std::size_t>(std::ceil(4.0 * sigma));
  std::vector<double> w(2 * radius + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = static_cast<double>(i) - static_cast<double>(radius);
    w[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += w[i];
  }
  std::vector<float> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = static_cast<float>(w[i] / sum);
  return out;
}

// One 1-D pass over `count` lines of length `len`; element j of line l sits at
// base(l) + j * step.
template <typename Index>
void blur_pass(std::vector<float>& data, const std::vector<float>& kernel, std::size_t lines, std::size_t len,
               Index index) {
  const auto radius = static_cast<std::ptrdiff_t>(kernel.size() / 2);
  std::vector<float> line(len);
  for (std::size_t l = 0; l < lines; ++l) {
    for (std::size_t j = 0; j < len; ++j) line[j] = data[index(l, j)];
    for (std::size_t j = 0; j < len; ++j) {
      const float center = line[j];
      float acc = 0.0f;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        const std::ptrdiff_t src =
            std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(j) + k, 0, static_cast<std::ptrdiff_t>(len) - 1);
        acc += kernel[static_cast<std::size_t>(k + radius)] * (line[static_cast<std::size_t>(src)] - center);
      }
      data[index(l, j)] = center + acc;
    }
  }
}

void require_same(const ImageF& a, const ImageF& b, const char* what) {
  if (!a.same_geometry(b)) throw ValidationError(std::string(what) + ": image geometries differ");
}

}  // namespace

ImageF gaussian_blur(const ImageF& img, double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("gaussian_blur sigma must be positive");
  const auto kernel = gaussian_kernel(sigma);
  ImageF out = img;
  const std::size_t w = img.width, h = img.height, ch = img.channels;
  blur_pass(out.data, kernel, h * ch, w, [&](std::size_t l, std::size_t j) {
    return ((l / ch) * w + j) * ch + l % ch;
  });
  blur_pass(out.data, kernel, w * ch, h, [&](std::size_t l, std::size_t j) {
    return (j * w + l / ch) * ch + l % ch;
  });
  return out;
}

ImageF color_dodge(const ImageF& base, const ImageF& blend) {
  require_same(base, blend, "color_dodge");
  ImageF out = base;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    const float b = blend.data[i];
    out.data[i] = b >= 255.0f ? 255.0f : std::min(255.0f, base.data[i] * 255.0f / (255.0f - b));
  }
  return out;
}

ImageU8 line_sketch(const ImageU8& photo, const LineSketchConfig& cfg) {
  cfg.validate();
  const ImageF gray = to_luma(to_float(photo), cfg.luma[0], cfg.luma[1], cfg.luma[2]);
  ImageF negative = gray;
  for (auto& v : negative.data) v = 255.0f - v;
  return quantize(color_dodge(gray, gaussian_blur(negative, cfg.blur_sigma)));
}

ImageF domain_transform_filter(const ImageF& img, double sigma_s, double sigma_r, int iterations) {
  if (!(sigma_s > 0.0) || !(sigma_r > 0.0) || iterations < 1) {
    throw ValidationError("domain_transform_filter needs sigma_s, sigma_r > 0 and iterations >= 1");
  }
  const std::size_t w = img.width, h = img.height, ch = img.channels;
  const float ratio = static_cast<float>(sigma_s / sigma_r);

  // Domain-transform derivatives from the unfiltered image: dx[y][x] couples
  // (x-1, y) and (x, y); dy[y][x] couples (x, y-1) and (x, y).
  std::vector<float> dx(w * h, 1.0f), dy(w * h, 1.0f);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      float sx = 0.0f, sy = 0.0f;
      for (std::size_t c = 0; c < ch; ++c) {
        if (x > 0) sx += std::abs(img.at(x, y, c) - img.at(x - 1, y, c)) / 255.0f;
        if (y > 0) sy += std::abs(img.at(x, y, c) - img.at(x, y - 1, c)) / 255.0f;
      }
      dx[y * w + x] = 1.0f + ratio * sx;
      dy[y * w + x] = 1.0f + ratio * sy;
    }
  }

  ImageF out = img;
  std::vector<float> vx(w * h), vy(w * h);
  const double n = iterations;
  for (int i = 0; i < iterations; ++i) {
    const double sigma_h = sigma_s * std::sqrt(3.0) * std::pow(2.0, n - (i + 1)) / std::sqrt(std::pow(4.0, n) - 1.0);
    const float a = static_cast<float>(std::exp(-std::sqrt(2.0) / sigma_h));
    for (std::size_t k = 0; k < w * h; ++k) {
      vx[k] = std::pow(a, dx[k]);
      vy[k] = std::pow(a, dy[k]);
    }
    // Horizontal: causal then anticausal.
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 1; x < w; ++x) {
        const float v = vx[y * w + x];
        for (std::size_t c = 0; c < ch; ++c) out.at(x, y, c) += v * (out.at(x - 1, y, c) - out.at(x, y, c));
      }
      for (std::size_t x = w - 1; x-- > 0;) {
        const float v = vx[y * w + x + 1];
        for (std::size_t c = 0; c < ch; ++c) out.at(x, y, c) += v * (out.at(x + 1, y, c) - out.at(x, y, c));
      }
    }
    // Vertical.
    for (std::size_t x = 0; x < w; ++x) {
      for (std::size_t y = 1; y < h; ++y) {
        const float v = vy[y * w + x];
        for (std::size_t c = 0; c < ch; ++c) out.at(x, y, c) += v * (out.at(x, y - 1, c) - out.at(x, y, c));
      }
      for (std::size_t y = h - 1; y-- > 0;) {
        const float v = vy[(y + 1) * w + x];
        for (std::size_t c = 0; c < ch; ++c) out.at(x, y, c) += v * (out.at(x, y + 1, c) - out.at(x, y, c));
      }
    }
  }
  return out;
}

ImageU8 stylize(const ImageU8& photo, const StylizeConfig& cfg) {
  cfg.validate();
  ImageF source = to_float(cfg.grayscale ? photo : replicate_to_rgb(photo));
  if (cfg.grayscale) source = to_luma(source);
  const ImageF filtered = domain_transform_filter(source, cfg.sigma_s, cfg.sigma_r, cfg.iterations);

  const std::size_t w = filtered.width, h = filtered.height, ch = filtered.channels;
  std::vector<float> grad(w * h, 0.0f);
  float grad_max = 0.0f;
  for (std::size_t y = 0; y < h; ++y) {
    const std::size_t ym = y > 0 ? y - 1 : 0, yp = std::min(y + 1, h - 1);
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t xm = x > 0 ? x - 1 : 0, xp = std::min(x + 1, w - 1);
      float g = 0.0f;
      for (std::size_t c = 0; c < ch; ++c) {
        const float gx = 0.5f * (filtered.at(xp, y, c) - filtered.at(xm, y, c));
        const float gy = 0.5f * (filtered.at(x, yp, c) - filtered.at(x, ym, c));
        g += std::sqrt(gx * gx + gy * gy);
      }
      grad[y * w + x] = g;
      grad_max = std::max(grad_max, g);
    }
  }

  const auto gain = static_cast<float>(cfg.edge_gain);
  ImageF shaded = filtered;
  float peak = 0.0f;
  for (std::size_t k = 0; k < w * h; ++k) {
    const float g = grad_max > 0.0f ? grad[k] / grad_max : 0.0f;
    const float e = std::clamp(1.0f - gain * g, 0.0f, 1.0f);
    for (std::size_t c = 0; c < ch; ++c) {
      float& v = shaded.data[k * ch + c];
      v *= e;
      peak = std::max(peak, v);
    }
  }
  if (peak > 0.0f) {
    const float scale = 255.0f / peak;
    for (auto& v : shaded.data) v *= scale;
  }
  return quantize(shaded);
}

}  // namespace sketchinv
