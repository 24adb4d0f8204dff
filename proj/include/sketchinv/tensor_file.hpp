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
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sketchinv/error.hpp"
#include "sketchinv/tensor.hpp"

namespace sketchinv {

// The CSIW weight container:
//   bytes 0..3   magic "CSIW"
//   bytes 4..7   format version, u32 little-endian
//   bytes 8..15  header length L, u64 little-endian
//   next L bytes UTF-8 JSON header {name: {"dtype": "f32", "shape": [...], "offset": byte offset}, ...,
//                "__metadata__": {...}}
//   remainder    payload of little-endian f32 values; offsets are relative to its start
// Tensors are laid out in name order and the header is written with sorted
// keys, so equal contents always encode to equal bytes.
inline constexpr std::uint32_t kTensorFileVersion = 1;

struct TensorFile {
  std::map<std::string, Tensor> tensors;
  nlohmann::json metadata = nlohmann::json::object();
};

class TensorFileError : public ValidationError {
 public:
  enum class Kind { kBadMagic, kVersionMismatch, kCorrupt, kMissingTensor, kShapeMismatch };

  TensorFileError(Kind kind, const std::string& what) : ValidationError(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::vector<std::uint8_t> encode_tensor_file(const TensorFile& file);
TensorFile decode_tensor_file(std::span<const std::uint8_t> bytes);

void write_tensor_file(const std::filesystem::path& path, const TensorFile& file);
TensorFile read_tensor_file(const std::filesystem::path& path);

// Looks up `name` and checks its shape; raises kMissingTensor / kShapeMismatch.
const Tensor& require_tensor(const TensorFile& file, const std::string& name, const Shape& shape);

}  // namespace sketchinv
