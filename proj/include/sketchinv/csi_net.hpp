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

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sketchinv/layers.hpp"
#include "sketchinv/tensor_file.hpp"

namespace sketchinv {

enum class LayerKind { kConv, kResidual, kDeconv };

struct ConvSpec {
  std::size_t in_channels;
  std::size_t out_channels;
  std::size_t ksize;
  std::size_t stride;
  std::size_t pad;

  friend bool operator==(const ConvSpec&, const ConvSpec&) = default;
};

// One row of the architecture table. Residual blocks carry two convolutions.
struct LayerDescriptor {
  int number;
  LayerKind kind;
  std::vector<ConvSpec> convs;
  std::string normalization;
  std::string activation;

  friend bool operator==(const LayerDescriptor&, const LayerDescriptor&) = default;
};

std::string to_string(LayerKind kind);

template <typename T>
struct ConvUnit {
  Parameter<T> weight;
  Parameter<T> bias;
  BatchNormState<T> bn;
  std::size_t stride = 1;
  std::size_t pad = 0;
  bool transposed = false;
};

// The sketch-inversion network: three convolutions, five residual blocks,
// two transposed convolutions and a final convolution, each followed by batch
// normalization. Output is 127.5 * (tanh(.) + 1), i.e. within [0, 255].
template <typename T>
class BasicCsiNetwork {
 public:
  static constexpr std::size_t kLayers = 11;
  static constexpr std::size_t kResidualBlocks = 5;

  // in_channels must be 1 or 3. He-uniform kernels, zero biases, unit gamma.
  static BasicCsiNetwork build(std::size_t in_channels, std::uint64_t seed);

  // batch: N x in_channels x H x W with H, W divisible by 4. When
  // `activations` is given it receives the output of each of the 11 layers.
  Var<T> forward(const Var<T>& batch, Mode mode, std::vector<BasicTensor<T>>* activations = nullptr);

  std::size_t in_channels() const { return in_channels_; }
  std::vector<Parameter<T>*> parameters();
  std::vector<const Parameter<T>*> parameters() const;
  std::vector<BatchNormState<T>*> norms();
  std::size_t parameter_count() const;
  std::vector<LayerDescriptor> describe() const;

  ConvUnit<T>& residual_unit(std::size_t block, std::size_t which) { return residual_[block][which]; }

 private:
  BasicCsiNetwork() = default;

  template <typename Fn>
  void for_each_unit(Fn&& fn);
  template <typename Fn>
  void for_each_unit(Fn&& fn) const;

  std::size_t in_channels_ = 0;
  std::array<ConvUnit<T>, 3> head_;
  std::array<std::array<ConvUnit<T>, 2>, kResidualBlocks> residual_;
  std::array<ConvUnit<T>, 2> up_;
  ConvUnit<T> out_;

  template <typename U>
  friend void export_network(const BasicCsiNetwork<U>& net, TensorFile& file);
  template <typename U>
  friend BasicCsiNetwork<U> import_network(const TensorFile& file);
};

using CsiNetwork = BasicCsiNetwork<float>;

// Writes parameter values, Adam moments and batch-norm running statistics
// under "net.*" names. The Adam step count goes to metadata["adam_steps"].
template <typename T>
void export_network(const BasicCsiNetwork<T>& net, TensorFile& file);

// Inverse of export_network; raises TensorFileError on missing tensors or
// shape mismatches.
template <typename T>
BasicCsiNetwork<T> import_network(const TensorFile& file);

struct Checkpoint {
  CsiNetwork network;
  nlohmann::json metadata;
};

void save_checkpoint(const std::filesystem::path& path, const CsiNetwork& net, const nlohmann::json& metadata);
Checkpoint load_checkpoint(const std::filesystem::path& path);

extern template class BasicCsiNetwork<float>;
extern template class BasicCsiNetwork<double>;

}  // namespace sketchinv
