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

#include "sketchinv/tensor_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace sketchinv {
namespace {

constexpr char kMagic[4] = {'C', 'S', 'I', 'W'};
constexpr const char* kMetadataKey = "__metadata__";

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> bytes, std::size_t pos, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
  return v;
}

TensorFileError corrupt(const std::string& why) {
  return TensorFileError(TensorFileError::Kind::kCorrupt, "corrupt CSIW container: " + why);
}

}  // namespace

std::vector<std::uint8_t> encode_tensor_file(const TensorFile& file) {
  nlohmann::json header = nlohmann::json::object();
  std::uint64_t offset = 0;
  for (const auto& [name, tensor] : file.tensors) {
    if (name == kMetadataKey) throw ValidationError("tensor name " + name + " is reserved");
    header[name] = {{"dtype", "f32"}, {"shape", tensor.shape()}, {"offset", offset}};
    offset += tensor.size() * sizeof(float);
  }
  header[kMetadataKey] = file.metadata;
  const std::string text = header.dump();

  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  put_u32(out, kTensorFileVersion);
  put_u64(out, text.size());
  out.insert(out.end(), text.begin(), text.end());
  out.reserve(out.size() + offset);
  for (const auto& [name, tensor] : file.tensors) {
    for (float v : tensor.data()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

TensorFile decode_tensor_file(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw TensorFileError(TensorFileError::Kind::kBadMagic, "not a CSIW container (bad magic bytes)");
  }
  const auto version = static_cast<std::uint32_t>(get_le(bytes, 4, 4));
  if (version != kTensorFileVersion) {
    throw TensorFileError(TensorFileError::Kind::kVersionMismatch,
                          "CSIW format version " + std::to_string(version) + " is not supported (expected " +
                              std::to_string(kTensorFileVersion) + ")");
  }
  const std::uint64_t header_len = get_le(bytes, 8, 8);
  if (header_len > bytes.size() - 16) throw corrupt("header length exceeds file size");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(header_len));
  } catch (const nlohmann::json::exception& e) {
    throw corrupt(std::string("unparsable header: ") + e.what());
  }
  if (!header.is_object()) throw corrupt("header is not a JSON object");

  const std::span<const std::uint8_t> payload = bytes.subspan(16 + header_len);
  TensorFile file;
  for (const auto& [name, entry] : header.items()) {
    if (name == kMetadataKey) {
      file.metadata = entry;
      continue;
    }
    try {
      if (entry.at("dtype").get<std::string>() != "f32") throw corrupt("tensor " + name + " has unsupported dtype");
      const auto shape = entry.at("shape").get<Shape>();
      const auto off = entry.at("offset").get<std::uint64_t>();
      const std::size_t count = shape_size(shape);
      if (off % 4 != 0 || off > payload.size() || count > (payload.size() - off) / 4) {
        throw corrupt("tensor " + name + " lies outside the payload");
      }
      std::vector<float> data(count);
      for (std::size_t i = 0; i < count; ++i) {
        data[i] = std::bit_cast<float>(static_cast<std::uint32_t>(get_le(payload, off + 4 * i, 4)));
      }
      file.tensors.emplace(name, Tensor(shape, std::move(data)));
    } catch (const nlohmann::json::exception& e) {
      throw corrupt("malformed entry for tensor " + name + ": " + e.what());
    }
  }
  return file;
}

void write_tensor_file(const std::filesystem::path& path, const TensorFile& file) {
  const auto bytes = encode_tensor_file(file);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

TensorFile read_tensor_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_tensor_file(bytes);
}

const Tensor& require_tensor(const TensorFile& file, const std::string& name, const Shape& shape) {
  auto it = file.tensors.find(name);
  if (it == file.tensors.end()) {
    throw TensorFileError(TensorFileError::Kind::kMissingTensor, "tensor " + name + " is missing");
  }
  if (it->second.shape() != shape) {
    throw TensorFileError(TensorFileError::Kind::kShapeMismatch, "tensor " + name + " has shape " +
                                                                     shape_string(it->second.shape()) +
                                                                     ", expected " + shape_string(shape));
  }
  return it->second;
}

}  // namespace sketchinv
