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
#include <filesystem>
#include <vector>

#include "sketchinv/tensor.hpp"

namespace sketchinv {

// Interleaved raster with 1 or 3 channels.
template <typename T>
struct Raster {
  Raster() = default;
  Raster(std::size_t width_, std::size_t height_, std::size_t channels_, T fill = T{0});

  std::size_t pixels() const { return width * height; }
  T& at(std::size_t x, std::size_t y, std::size_t c) { return data[(y * width + x) * channels + c]; }
  const T& at(std::size_t x, std::size_t y, std::size_t c) const { return data[(y * width + x) * channels + c]; }
  bool same_geometry(const Raster& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }

  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 0;
  std::vector<T> data;

  friend bool operator==(const Raster&, const Raster&) = default;
};

using ImageU8 = Raster<std::uint8_t>;
using ImageF = Raster<float>;

extern template struct Raster<std::uint8_t>;
extern template struct Raster<float>;

ImageF to_float(const ImageU8& img);
// Rounds to nearest (ties to even) and clamps to [0, 255].
ImageU8 quantize(const ImageF& img);

// ITU-R BT.601 luma; 1-channel input is returned unchanged.
ImageF to_luma(const ImageF& img, float wr = 0.299f, float wg = 0.587f, float wb = 0.114f);
ImageU8 replicate_to_rgb(const ImageU8& gray);

// Planar conversion to/from a 1 x C x H x W tensor slot.
void write_to_tensor(const ImageU8& img, Tensor& batch, std::size_t index);
ImageF read_from_tensor(const Tensor& batch, std::size_t index);

// 8-bit PNG, gray or RGB. Alpha is dropped, 16-bit samples are reduced,
// palettes are expanded.
ImageU8 read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const ImageU8& img);

}  // namespace sketchinv
