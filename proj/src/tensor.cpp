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

#include "sketchinv/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "sketchinv/error.hpp"

namespace sketchinv {

std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

template <typename T>
BasicTensor<T>::BasicTensor(Shape shape, T fill) : shape_(std::move(shape)) {
  for (auto d : shape_) {
    if (d == 0) throw ValidationError("tensor shape " + shape_string(shape_) + " has a zero dimension");
  }
  data_.assign(shape_size(shape_), fill);
}

template <typename T>
BasicTensor<T>::BasicTensor(Shape shape, std::vector<T> data)
    : shape_(std::move(shape)), data_(data.begin(), data.end()) {
  if (shape_size(shape_) != data_.size()) {
    throw ValidationError("tensor shape " + shape_string(shape_) + " does not hold " +
                          std::to_string(data_.size()) + " values");
  }
}

template <typename T>
void BasicTensor<T>::fill(T value) {
  std::fill(data_.begin(), data_.end(), value);
}

template <typename T>
bool BasicTensor<T>::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](T v) { return std::isfinite(v); });
}

template <typename T>
void BasicTensor<T>::add_(const BasicTensor& other) {
  if (other.shape_ != shape_) {
    throw ValidationError("cannot add " + shape_string(other.shape_) + " into " + shape_string(shape_));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
}

template <typename T>
double dot(const BasicTensor<T>& a, const BasicTensor<T>& b) {
  if (a.shape() != b.shape()) {
    throw ValidationError("dot of " + shape_string(a.shape()) + " and " + shape_string(b.shape()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return acc;
}

void require_rank4(const Shape& shape, const char* what) {
  if (shape.size() != 4) {
    throw ValidationError(std::string(what) + " must be 4-D (NCHW), got " + shape_string(shape));
  }
}

template class BasicTensor<float>;
template class BasicTensor<double>;
template double dot(const BasicTensor<float>&, const BasicTensor<float>&);
template double dot(const BasicTensor<double>&, const BasicTensor<double>&);

}  // namespace sketchinv
