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

#include "sketchinv/autograd.hpp"

#include <unordered_set>

#include "sketchinv/error.hpp"

namespace sketchinv {

template <typename T>
Var<T> Var<T>::constant(BasicTensor<T> value) {
  auto node = std::make_shared<Node<T>>();
  node->value = std::move(value);
  return Var(std::move(node));
}

template <typename T>
Var<T> Var<T>::leaf(Parameter<T>& param) {
  auto node = std::make_shared<Node<T>>();
  node->value = param.value;
  node->param = &param;
  node->requires_grad = true;
  return Var(std::move(node));
}

template <typename T>
Var<T> Var<T>::input(BasicTensor<T> value) {
  auto node = std::make_shared<Node<T>>();
  node->value = std::move(value);
  node->requires_grad = true;
  return Var(std::move(node));
}

template <typename T>
Var<T> Var<T>::make(BasicTensor<T> value, std::vector<Var> inputs, std::function<void(Node<T>&)> backward) {
  auto node = std::make_shared<Node<T>>();
  node->value = std::move(value);
  for (auto& in : inputs) {
    node->requires_grad = node->requires_grad || in.requires_grad();
    node->inputs.push_back(std::move(in.node_));
  }
  if (node->requires_grad) node->backward = std::move(backward);
  return Var(std::move(node));
}

template <typename T>
void backward(const Var<T>& root) {
  if (root.value().size() != 1) {
    throw ValidationError("backward() needs a scalar root, got " + shape_string(root.shape()));
  }
  if (!root.requires_grad()) return;

  // Iterative post-order DFS gives a topological order without recursion depth limits.
  std::vector<Node<T>*> order;
  std::unordered_set<Node<T>*> seen;
  std::vector<std::pair<Node<T>*, std::size_t>> stack{{root.node(), 0}};
  seen.insert(root.node());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->inputs.size()) {
      Node<T>* child = node->inputs[next++].get();
      if (child->requires_grad && seen.insert(child).second) stack.push_back({child, 0});
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  for (Node<T>* n : order) n->grad = BasicTensor<T>();
  root.node()->grad_buffer().fill(T{1});
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node<T>* n = *it;
    if (n->grad.empty()) continue;
    if (n->backward) n->backward(*n);
    if (n->param) n->param->grad.add_(n->grad);
  }
}

template class Var<float>;
template class Var<double>;
template void backward(const Var<float>&);
template void backward(const Var<double>&);

}  // namespace sketchinv
