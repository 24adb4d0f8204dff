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

#include "sketchinv/csi_net.hpp"

#include <cmath>

#include "sketchinv/error.hpp"
#include "sketchinv/random.hpp"

namespace sketchinv {
namespace {

constexpr double kBnDecay = 0.9;
constexpr double kBnEpsilon = 1e-5;

// Kernel layout is O x I x K x K for convolutions and I x O x K x K for
// transposed convolutions; fan-in counts the contracted dimension.
template <typename T>
ConvUnit<T> make_unit(const std::string& name, std::size_t in, std::size_t out, std::size_t k, std::size_t stride,
                      std::size_t pad, bool transposed, Rng& rng) {
  const Shape shape = transposed ? Shape{in, out, k, k} : Shape{out, in, k, k};
  const double bound = std::sqrt(6.0 / static_cast<double>(in * k * k));
  BasicTensor<T> w(shape);
  for (auto& v : w.data()) v = static_cast<T>(rng.uniform(-bound, bound));
  ConvUnit<T> unit;
  unit.weight = Parameter<T>(name + ".weight", std::move(w));
  unit.bias = Parameter<T>(name + ".bias", BasicTensor<T>(Shape{out}));
  unit.bn = BatchNormState<T>(name + ".bn", out, kBnDecay, kBnEpsilon);
  unit.stride = stride;
  unit.pad = pad;
  unit.transposed = transposed;
  return unit;
}

template <typename T>
ConvSpec spec_of(const ConvUnit<T>& u) {
  const Shape& s = u.weight.value.shape();
  return u.transposed ? ConvSpec{s[0], s[1], s[2], u.stride, u.pad} : ConvSpec{s[1], s[0], s[2], u.stride, u.pad};
}

template <typename T>
Var<T> apply_unit(ConvUnit<T>& u, const Var<T>& x, Mode mode) {
  const Var<T> w = Var<T>::leaf(u.weight);
  const Var<T> b = Var<T>::leaf(u.bias);
  Var<T> y;
  if (u.transposed) {
    y = deconv2d(x, w, b, u.stride, u.pad, x.shape()[2] * u.stride, x.shape()[3] * u.stride);
  } else {
    y = conv2d(x, w, b, u.stride, u.pad);
  }
  return batch_norm(y, u.bn, mode);
}

}  // namespace

std::string to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv: return "con.";
    case LayerKind::kResidual: return "res.";
    case LayerKind::kDeconv: return "dec.";
  }
  return "?";
}

template <typename T>
BasicCsiNetwork<T> BasicCsiNetwork<T>::build(std::size_t in_channels, std::uint64_t seed) {
  if (in_channels != 1 && in_channels != 3) {
    throw ValidationError("network input must have 1 or 3 channels, got " + std::to_string(in_channels));
  }
  Rng rng(seed);
  BasicCsiNetwork net;
  net.in_channels_ = in_channels;
  net.head_[0] = make_unit<T>("net.conv1", in_channels, 32, 9, 1, 4, false, rng);
  net.head_[1] = make_unit<T>("net.conv2", 32, 64, 3, 2, 1, false, rng);
  net.head_[2] = make_unit<T>("net.conv3", 64, 128, 3, 2, 1, false, rng);
  for (std::size_t b = 0; b < kResidualBlocks; ++b) {
    const std::string prefix = "net.res" + std::to_string(b + 4);
    net.residual_[b][0] = make_unit<T>(prefix + ".a", 128, 128, 3, 1, 1, false, rng);
    net.residual_[b][1] = make_unit<T>(prefix + ".b", 128, 128, 3, 1, 1, false, rng);
  }
  net.up_[0] = make_unit<T>("net.deconv9", 128, 64, 3, 2, 1, true, rng);
  net.up_[1] = make_unit<T>("net.deconv10", 64, 32, 3, 2, 1, true, rng);
  net.out_ = make_unit<T>("net.conv11", 32, 3, 9, 1, 4, false, rng);
  return net;
}

template <typename T>
template <typename Fn>
void BasicCsiNetwork<T>::for_each_unit(Fn&& fn) {
  for (auto& u : head_) fn(u);
  for (auto& block : residual_) {
    for (auto& u : block) fn(u);
  }
  for (auto& u : up_) fn(u);
  fn(out_);
}

template <typename T>
template <typename Fn>
void BasicCsiNetwork<T>::for_each_unit(Fn&& fn) const {
  const_cast<BasicCsiNetwork*>(this)->for_each_unit([&](const ConvUnit<T>& u) { fn(u); });
}

template <typename T>
Var<T> BasicCsiNetwork<T>::forward(const Var<T>& batch, Mode mode, std::vector<BasicTensor<T>>* activations) {
  const Shape& s = batch.shape();
  require_rank4(s, "network input");
  if (s[1] != in_channels_) {
    throw ValidationError("network expects " + std::to_string(in_channels_) + " input channels, got " +
                          std::to_string(s[1]));
  }
  if (s[2] % 4 != 0 || s[3] % 4 != 0) {
    throw ValidationError("network input spatial size " + std::to_string(s[2]) + "x" + std::to_string(s[3]) +
                          " is not divisible by 4");
  }
  if (activations) activations->clear();
  auto record = [&](const Var<T>& v) {
    if (activations) activations->push_back(v.value());
  };

  Var<T> x = batch;
  for (auto& u : head_) {
    x = relu(apply_unit(u, x, mode));
    record(x);
  }
  for (auto& block : residual_) {
    Var<T> y = relu(apply_unit(block[0], x, mode));
    y = apply_unit(block[1], y, mode);
    x = add(x, y);
    record(x);
  }
  for (auto& u : up_) {
    x = relu(apply_unit(u, x, mode));
    record(x);
  }
  x = affine(tanh(apply_unit(out_, x, mode)), T{127.5}, T{127.5});
  record(x);
  return x;
}

template <typename T>
std::vector<Parameter<T>*> BasicCsiNetwork<T>::parameters() {
  std::vector<Parameter<T>*> out;
  for_each_unit([&](ConvUnit<T>& u) {
    out.push_back(&u.weight);
    out.push_back(&u.bias);
    out.push_back(&u.bn.gamma);
    out.push_back(&u.bn.beta);
  });
  return out;
}

template <typename T>
std::vector<const Parameter<T>*> BasicCsiNetwork<T>::parameters() const {
  std::vector<const Parameter<T>*> out;
  for_each_unit([&](const ConvUnit<T>& u) {
    out.push_back(&u.weight);
    out.push_back(&u.bias);
    out.push_back(&u.bn.gamma);
    out.push_back(&u.bn.beta);
  });
  return out;
}

template <typename T>
std::vector<BatchNormState<T>*> BasicCsiNetwork<T>::norms() {
  std::vector<BatchNormState<T>*> out;
  for_each_unit([&](ConvUnit<T>& u) { out.push_back(&u.bn); });
  return out;
}

template <typename T>
std::size_t BasicCsiNetwork<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto* p : parameters()) n += p->value.size();
  return n;
}

template <typename T>
std::vector<LayerDescriptor> BasicCsiNetwork<T>::describe() const {
  std::vector<LayerDescriptor> rows;
  int number = 1;
  for (const auto& u : head_) rows.push_back({number++, LayerKind::kConv, {spec_of(u)}, "BN", "ReLU"});
  for (const auto& block : residual_) {
    rows.push_back({number++, LayerKind::kResidual, {spec_of(block[0]), spec_of(block[1])}, "BN/BN", "ReLU/+x"});
  }
  for (const auto& u : up_) rows.push_back({number++, LayerKind::kDeconv, {spec_of(u)}, "BN", "ReLU"});
  rows.push_back({number++, LayerKind::kConv, {spec_of(out_)}, "BN", "tanh"});
  return rows;
}

template <typename T>
void export_network(const BasicCsiNetwork<T>& net, TensorFile& file) {
  std::uint64_t steps = 0;
  auto put = [&](const std::string& name, const BasicTensor<T>& t) { file.tensors[name] = t.template cast<float>(); };
  net.for_each_unit([&](const ConvUnit<T>& u) {
    for (const Parameter<T>* p : {&u.weight, &u.bias, &u.bn.gamma, &u.bn.beta}) {
      put(p->name, p->value);
      put(p->name + ".adam_m", p->m);
      put(p->name + ".adam_v", p->v);
      steps = p->step_count;
    }
    put(u.weight.name.substr(0, u.weight.name.size() - 7) + ".bn.running_mean", u.bn.running_mean);
    put(u.weight.name.substr(0, u.weight.name.size() - 7) + ".bn.running_var", u.bn.running_var);
  });
  file.metadata["adam_steps"] = steps;
  file.metadata["in_channels"] = net.in_channels();
}

template <typename T>
BasicCsiNetwork<T> import_network(const TensorFile& file) {
  auto it = file.tensors.find("net.conv1.weight");
  if (it == file.tensors.end()) {
    throw TensorFileError(TensorFileError::Kind::kMissingTensor, "tensor net.conv1.weight is missing");
  }
  const std::size_t in_channels = it->second.shape().size() == 4 ? it->second.shape()[1] : 0;
  if (in_channels != 1 && in_channels != 3) {
    throw TensorFileError(TensorFileError::Kind::kShapeMismatch,
                          "tensor net.conv1.weight has shape " + shape_string(it->second.shape()) +
                              ", expected 32x1x9x9 or 32x3x9x9");
  }
  auto net = BasicCsiNetwork<T>::build(in_channels, 0);
  const std::uint64_t steps = file.metadata.value("adam_steps", std::uint64_t{0});
  auto get = [&](const std::string& name, BasicTensor<T>& dst) {
    dst = require_tensor(file, name, dst.shape()).template cast<T>();
  };
  net.for_each_unit([&](ConvUnit<T>& u) {
    for (Parameter<T>* p : {&u.weight, &u.bias, &u.bn.gamma, &u.bn.beta}) {
      get(p->name, p->value);
      get(p->name + ".adam_m", p->m);
      get(p->name + ".adam_v", p->v);
      p->step_count = steps;
    }
    const std::string prefix = u.weight.name.substr(0, u.weight.name.size() - 7);
    get(prefix + ".bn.running_mean", u.bn.running_mean);
    get(prefix + ".bn.running_var", u.bn.running_var);
  });
  return net;
}

void save_checkpoint(const std::filesystem::path& path, const CsiNetwork& net, const nlohmann::json& metadata) {
  TensorFile file;
  file.metadata = metadata;
  export_network(net, file);
  write_tensor_file(path, file);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  TensorFile file = read_tensor_file(path);
  CsiNetwork net = import_network<float>(file);
  return Checkpoint{std::move(net), std::move(file.metadata)};
}

template class BasicCsiNetwork<float>;
template class BasicCsiNetwork<double>;
template void export_network(const BasicCsiNetwork<float>&, TensorFile&);
template void export_network(const BasicCsiNetwork<double>&, TensorFile&);
template BasicCsiNetwork<float> import_network(const TensorFile&);
template BasicCsiNetwork<double> import_network(const TensorFile&);

}  // namespace sketchinv
