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

#include "sketchinv/image.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>

#include "sketchinv/error.hpp"

namespace sketchinv {

template <typename T>
Raster<T>::Raster(std::size_t width_, std::size_t height_, std::size_t channels_, T fill)
    : width(width_), height(height_), channels(channels_), data(width_ * height_ * channels_, fill) {
  if (channels != 1 && channels != 3) {
    throw ValidationError("images must have 1 or 3 channels, got " + std::to_string(channels));
  }
}

template struct Raster<std::uint8_t>;
template struct Raster<float>;

ImageF to_float(const ImageU8& img) {
  ImageF out(img.width, img.height, img.channels);
  for (std::size_t i = 0; i < img.data.size(); ++i) out.data[i] = img.data[i];
  return out;
}

ImageU8 quantize(const ImageF& img) {
  ImageU8 out(img.width, img.height, img.channels);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    const float v = std::nearbyint(img.data[i]);
    out.data[i] = static_cast<std::uint8_t>(v < 0.0f ? 0.0f : (v > 255.0f ? 255.0f : v));
  }
  return out;
}

ImageF to_luma(const ImageF& img, float wr, float wg, float wb) {
  if (img.channels == 1) return img;
  ImageF out(img.width, img.height, 1);
  for (std::size_t i = 0; i < img.pixels(); ++i) {
    const float* p = &img.data[i * 3];
    out.data[i] = wr * p[0] + wg * p[1] + wb * p[2];
  }
  return out;
}

ImageU8 replicate_to_rgb(const ImageU8& gray) {
  if (gray.channels == 3) return gray;
  ImageU8 out(gray.width, gray.height, 3);
  for (std::size_t i = 0; i < gray.pixels(); ++i) {
    out.data[3 * i] = out.data[3 * i + 1] = out.data[3 * i + 2] = gray.data[i];
  }
  return out;
}

void write_to_tensor(const ImageU8& img, Tensor& batch, std::size_t index) {
  const Shape& s = batch.shape();
  require_rank4(s, "image batch");
  if (s[1] != img.channels || s[2] != img.height || s[3] != img.width || index >= s[0]) {
    throw ValidationError("image " + std::to_string(img.width) + "x" + std::to_string(img.height) + "x" +
                          std::to_string(img.channels) + " does not fit batch slot of " + shape_string(s));
  }
  for (std::size_t c = 0; c < img.channels; ++c) {
    for (std::size_t y = 0; y < img.height; ++y) {
      for (std::size_t x = 0; x < img.width; ++x) batch.at(index, c, y, x) = img.at(x, y, c);
    }
  }
}

ImageF read_from_tensor(const Tensor& batch, std::size_t index) {
  const Shape& s = batch.shape();
  require_rank4(s, "image batch");
  ImageF out(s[3], s[2], s[1]);
  for (std::size_t c = 0; c < s[1]; ++c) {
    for (std::size_t y = 0; y < s[2]; ++y) {
      for (std::size_t x = 0; x < s[3]; ++x) out.at(x, y, c) = batch.at(index, c, y, x);
    }
  }
  return out;
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

ImageU8 read_png(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open " + path.string());
  png_byte sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw IoError(path.string() + " is not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng initialization failed");
  }
  ImageU8 img;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("corrupt PNG data in " + path.string());
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  const int color = png_get_color_type(png, info);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);
  const std::size_t width = png_get_image_width(png, info);
  const std::size_t height = png_get_image_height(png, info);
  const std::size_t channels = png_get_channels(png, info);
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(path.string() + " has unsupported channel layout");
  }
  img = ImageU8(width, height, channels);
  rows.resize(height);
  for (std::size_t y = 0; y < height; ++y) rows[y] = img.data.data() + y * width * channels;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

void write_png(const std::filesystem::path& path, const ImageU8& img) {
  if (img.channels != 1 && img.channels != 3) throw ValidationError("PNG output needs 1 or 3 channels");
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng initialization failed");
  }
  std::vector<png_bytep> rows(img.height);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed writing " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
               img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  for (std::size_t y = 0; y < img.height; ++y) {
    rows[y] = const_cast<png_bytep>(img.data.data() + y * img.width * img.channels);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace sketchinv
