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

#include <functional>
#include <memory>
#include <vector>

#include "sketchinv/adam.hpp"
#include "sketchinv/tensor.hpp"

namespace sketchinv {

template <typename T>
struct Node {
  BasicTensor<T> value;
  BasicTensor<T> grad;  // allocated on first use
  std::vector<std::shared_ptr<Node>> inputs;
  // Reads this node's grad and accumulates into the inputs that require it.
  std::function<void(Node&)> backward;
  Parameter<T>* param = nullptr;
  bool requires_grad = false;

  BasicTensor<T>& grad_buffer() {
    if (grad.empty()) grad = BasicTensor<T>(value.shape());
    return grad;
  }
};

// Handle to a value in a dynamically recorded computation graph.
template <typename T>
class Var {
 public:
  Var() = default;

  static Var constant(BasicTensor<T> value);
  // Leaf whose gradient is accumulated into `param.grad` by backward().
  static Var leaf(Parameter<T>& param);
  // Differentiable leaf without a backing parameter (e.g. an input image).
  static Var input(BasicTensor<T> value);

  static Var make(BasicTensor<T> value, std::vector<Var> inputs, std::function<void(Node<T>&)> backward);

  const BasicTensor<T>& value() const { return node_->value; }
  const Shape& shape() const { return node_->value.shape(); }
  bool requires_grad() const { return node_->requires_grad; }
  // Gradient of the last backward() pass, or an empty tensor.
  const BasicTensor<T>& grad() const { return node_->grad; }
  Node<T>* node() const { return node_.get(); }
  bool valid() const { return node_ != nullptr; }

 private:
  explicit Var(std::shared_ptr<Node<T>> node) : node_(std::move(node)) {}
  std::shared_ptr<Node<T>> node_;
};

// Reverse pass from a scalar root. Parameter gradients accumulate (+=).
template <typename T>
void backward(const Var<T>& root);

extern template class Var<float>;
extern template class Var<double>;

}  // namespace sketchinv
