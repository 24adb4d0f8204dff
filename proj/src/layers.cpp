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

#include "sketchinv/layers.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "sketchinv/error.hpp"

namespace sketchinv {
namespace {

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<Mat<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const Mat<T>>;

// Geometry of a convolution from a C x H x W image to OH x OW positions.
struct ConvGeometry {
  std::size_t channels, height, width, kernel, stride, pad, out_h, out_w;

  std::size_t col_rows() const { return channels * kernel * kernel; }
  std::size_t col_cols() const { return out_h * out_w; }
  std::size_t image_size() const { return channels * height * width; }
};

template <typename T>
void im2col(const T* image, const ConvGeometry& g, T* col) {
  const std::size_t cols = g.col_cols();
  for (std::size_t c = 0; c < g.channels; ++c) {
    for (std::size_t ki = 0; ki < g.kernel; ++ki) {
      for (std::size_t kj = 0; kj < g.kernel; ++kj) {
        T* dst = col + ((c * g.kernel + ki) * g.kernel + kj) * cols;
        for (std::size_t oh = 0; oh < g.out_h; ++oh) {
          const auto ih = static_cast<std::ptrdiff_t>(oh * g.stride + ki) - static_cast<std::ptrdiff_t>(g.pad);
          T* row = dst + oh * g.out_w;
          if (ih < 0 || ih >= static_cast<std::ptrdiff_t>(g.height)) {
            std::fill(row, row + g.out_w, T{0});
            continue;
          }
          const T* src = image + (c * g.height + static_cast<std::size_t>(ih)) * g.width;
          for (std::size_t ow = 0; ow < g.out_w; ++ow) {
            const auto iw = static_cast<std::ptrdiff_t>(ow * g.stride + kj) - static_cast<std::ptrdiff_t>(g.pad);
            row[ow] = (iw < 0 || iw >= static_cast<std::ptrdiff_t>(g.width)) ? T{0} : src[iw];
          }
        }
      }
    }
  }
}

// Scatter-adds columns back into an image (adjoint of im2col).
template <typename T>
void col2im(const T* col, const ConvGeometry& g, T* image) {
  const std::size_t cols = g.col_cols();
  for (std::size_t c = 0; c < g.channels; ++c) {
    for (std::size_t ki = 0; ki < g.kernel; ++ki) {
      for (std::size_t kj = 0; kj < g.kernel; ++kj) {
        const T* src = col + ((c * g.kernel + ki) * g.kernel + kj) * cols;
        for (std::size_t oh = 0; oh < g.out_h; ++oh) {
          const auto ih = static_cast<std::ptrdiff_t>(oh * g.stride + ki) - static_cast<std::ptrdiff_t>(g.pad);
          if (ih < 0 || ih >= static_cast<std::ptrdiff_t>(g.height)) continue;
          T* dst = image + (c * g.height + static_cast<std::size_t>(ih)) * g.width;
          const T* row = src + oh * g.out_w;
          for (std::size_t ow = 0; ow < g.out_w; ++ow) {
            const auto iw = static_cast<std::ptrdiff_t>(ow * g.stride + kj) - static_cast<std::ptrdiff_t>(g.pad);
            if (iw >= 0 && iw < static_cast<std::ptrdiff_t>(g.width)) dst[iw] += row[ow];
          }
        }
      }
    }
  }
}

template <typename T>
BasicTensor<T> scalar_tensor(double v) {
  return BasicTensor<T>(Shape{1}, static_cast<T>(v));
}

void require_same_shape(const Shape& a, const Shape& b, const char* what) {
  if (a != b) {
    throw ValidationError(std::string(what) + ": shape " + shape_string(a) + " does not match " + shape_string(b));
  }
}

}  // namespace

std::size_t conv_output_size(std::size_t in, std::size_t kernel, std::size_t stride, std::size_t pad) {
  if (stride == 0) throw ValidationError("convolution stride must be >= 1");
  if (in + 2 * pad < kernel) {
    throw ValidationError("kernel " + std::to_string(kernel) + " does not fit input extent " + std::to_string(in) +
                          " with pad " + std::to_string(pad));
  }
  return (in + 2 * pad - kernel) / stride + 1;
}

template <typename T>
BatchNormState<T>::BatchNormState(const std::string& prefix, std::size_t channels, double decay_, double epsilon_)
    : gamma(prefix + ".gamma", BasicTensor<T>(Shape{channels}, T{1})),
      beta(prefix + ".beta", BasicTensor<T>(Shape{channels}, T{0})),
      running_mean(Shape{channels}, T{0}),
      running_var(Shape{channels}, T{1}),
      decay(decay_),
      epsilon(epsilon_) {}

template <typename T>
Var<T> conv2d(const Var<T>& input, const Var<T>& weights, const Var<T>& bias, std::size_t stride, std::size_t pad) {
  const Shape& xs = input.shape();
  const Shape& ws = weights.shape();
  require_rank4(xs, "conv2d input");
  require_rank4(ws, "conv2d weights");
  if (ws[2] != ws[3]) throw ValidationError("conv2d weights must be square, got " + shape_string(ws));
  if (xs[1] != ws[1]) {
    throw ValidationError("conv2d input channel dimension " + std::to_string(xs[1]) +
                          " does not match weight input dimension " + std::to_string(ws[1]));
  }
  if (bias.shape() != Shape{ws[0]}) {
    throw ValidationError("conv2d bias dimension " + shape_string(bias.shape()) + " does not match " +
                          std::to_string(ws[0]) + " output channels");
  }
  const std::size_t batch = xs[0];
  const std::size_t out_c = ws[0];
  const ConvGeometry g{xs[1], xs[2], xs[3], ws[2], stride, pad, conv_output_size(xs[2], ws[2], stride, pad),
                       conv_output_size(xs[3], ws[2], stride, pad)};

  BasicTensor<T> out(Shape{batch, out_c, g.out_h, g.out_w});
  AlignedVector<T> col(g.col_rows() * g.col_cols());
  ConstMatMap<T> w(weights.value().ptr(), out_c, g.col_rows());
  ConstMatMap<T> colm(col.data(), g.col_rows(), g.col_cols());
  const T* b = bias.value().ptr();
  for (std::size_t n = 0; n < batch; ++n) {
    im2col(input.value().ptr() + n * g.image_size(), g, col.data());
    MatMap<T> y(out.ptr() + n * out_c * g.col_cols(), out_c, g.col_cols());
    y.noalias() = w * colm;
    for (std::size_t o = 0; o < out_c; ++o) y.row(o).array() += b[o];
  }

  return Var<T>::make(std::move(out), {input, weights, bias}, [g, batch, out_c](Node<T>& node) {
    auto& x = *node.inputs[0];
    auto& wn = *node.inputs[1];
    auto& bn = *node.inputs[2];
    const T* dy = node.grad.ptr();
    const std::size_t cols = g.col_cols();
    AlignedVector<T> col(g.col_rows() * cols);
    MatMap<T> colm(col.data(), g.col_rows(), cols);
    ConstMatMap<T> w(wn.value.ptr(), out_c, g.col_rows());
    Mat<T> dw;
    if (wn.requires_grad) dw = Mat<T>::Zero(out_c, g.col_rows());
    for (std::size_t n = 0; n < batch; ++n) {
      ConstMatMap<T> dyn(dy + n * out_c * cols, out_c, cols);
      if (wn.requires_grad) {
        im2col(x.value.ptr() + n * g.image_size(), g, col.data());
        dw.noalias() += dyn * colm.transpose();
      }
      if (bn.requires_grad) {
        T* db = bn.grad_buffer().ptr();
        for (std::size_t o = 0; o < out_c; ++o) db[o] += dyn.row(o).sum();
      }
      if (x.requires_grad) {
        colm.noalias() = w.transpose() * dyn;
        col2im(col.data(), g, x.grad_buffer().ptr() + n * g.image_size());
      }
    }
    if (wn.requires_grad) {
      MatMap<T> gw(wn.grad_buffer().ptr(), out_c, g.col_rows());
      gw += dw;
    }
  });
}

template <typename T>
Var<T> deconv2d(const Var<T>& input, const Var<T>& weights, const Var<T>& bias, std::size_t stride, std::size_t pad,
                std::size_t out_h, std::size_t out_w) {
  const Shape& xs = input.shape();
  const Shape& ws = weights.shape();
  require_rank4(xs, "deconv2d input");
  require_rank4(ws, "deconv2d weights");
  if (stride == 0) throw ValidationError("deconv2d stride must be >= 1");
  if (ws[2] != ws[3]) throw ValidationError("deconv2d weights must be square, got " + shape_string(ws));
  if (xs[1] != ws[0]) {
    throw ValidationError("deconv2d input channel dimension " + std::to_string(xs[1]) +
                          " does not match weight input dimension " + std::to_string(ws[0]));
  }
  const std::size_t out_c = ws[1];
  if (bias.shape() != Shape{out_c}) {
    throw ValidationError("deconv2d bias dimension " + shape_string(bias.shape()) + " does not match " +
                          std::to_string(out_c) + " output channels");
  }
  const std::size_t k = ws[2];
  auto check_extent = [&](std::size_t in, std::size_t out, const char* axis) {
    const auto lo = static_cast<std::ptrdiff_t>((in - 1) * stride + k) - 2 * static_cast<std::ptrdiff_t>(pad);
    const auto hi = lo + static_cast<std::ptrdiff_t>(stride) - 1;
    const auto req = static_cast<std::ptrdiff_t>(out);
    if (req < lo || req > hi || req <= 0) {
      throw ValidationError(std::string("deconv2d requested output ") + axis + " " + std::to_string(out) +
                            " is inconsistent with input " + axis + " " + std::to_string(in) + " (valid range " +
                            std::to_string(lo) + ".." + std::to_string(hi) + ")");
    }
  };
  check_extent(xs[2], out_h, "height");
  check_extent(xs[3], out_w, "width");

  const std::size_t batch = xs[0];
  const std::size_t in_c = xs[1];
  const ConvGeometry g{out_c, out_h, out_w, k, stride, pad, xs[2], xs[3]};
  const std::size_t in_cols = g.col_cols();

  BasicTensor<T> out(Shape{batch, out_c, out_h, out_w});
  AlignedVector<T> col(g.col_rows() * in_cols);
  MatMap<T> colm(col.data(), g.col_rows(), in_cols);
  ConstMatMap<T> w(weights.value().ptr(), in_c, g.col_rows());
  const T* b = bias.value().ptr();
  for (std::size_t n = 0; n < batch; ++n) {
    ConstMatMap<T> xn(input.value().ptr() + n * in_c * in_cols, in_c, in_cols);
    colm.noalias() = w.transpose() * xn;
    T* on = out.ptr() + n * g.image_size();
    col2im(col.data(), g, on);
    for (std::size_t o = 0; o < out_c; ++o) {
      T* plane = on + o * out_h * out_w;
      for (std::size_t i = 0; i < out_h * out_w; ++i) plane[i] += b[o];
    }
  }

  return Var<T>::make(std::move(out), {input, weights, bias}, [g, batch, in_c, in_cols](Node<T>& node) {
    auto& x = *node.inputs[0];
    auto& wn = *node.inputs[1];
    auto& bn = *node.inputs[2];
    const T* dy = node.grad.ptr();
    AlignedVector<T> col(g.col_rows() * in_cols);
    ConstMatMap<T> colm(col.data(), g.col_rows(), in_cols);
    ConstMatMap<T> w(wn.value.ptr(), in_c, g.col_rows());
    Mat<T> dw;
    if (wn.requires_grad) dw = Mat<T>::Zero(in_c, g.col_rows());
    const std::size_t plane = g.height * g.width;
    for (std::size_t n = 0; n < batch; ++n) {
      const T* dyn = dy + n * g.image_size();
      if (bn.requires_grad) {
        T* db = bn.grad_buffer().ptr();
        for (std::size_t o = 0; o < g.channels; ++o) {
          T acc{0};
          for (std::size_t i = 0; i < plane; ++i) acc += dyn[o * plane + i];
          db[o] += acc;
        }
      }
      if (!wn.requires_grad && !x.requires_grad) continue;
      im2col(dyn, g, col.data());
      if (wn.requires_grad) {
        ConstMatMap<T> xn(x.value.ptr() + n * in_c * in_cols, in_c, in_cols);
        dw.noalias() += xn * colm.transpose();
      }
      if (x.requires_grad) {
        MatMap<T> dx(x.grad_buffer().ptr() + n * in_c * in_cols, in_c, in_cols);
        dx.noalias() += w * colm;
      }
    }
    if (wn.requires_grad) {
      MatMap<T> gw(wn.grad_buffer().ptr(), in_c, g.col_rows());
      gw += dw;
    }
  });
}

template <typename T>
Var<T> batch_norm(const Var<T>& input, BatchNormState<T>& state, Mode mode) {
  const Shape& xs = input.shape();
  require_rank4(xs, "batch_norm input");
  if (xs[1] != state.channels()) {
    throw ValidationError("batch_norm input has " + std::to_string(xs[1]) + " channels, state has " +
                          std::to_string(state.channels()));
  }
  const std::size_t batch = xs[0];
  const std::size_t channels = xs[1];
  const std::size_t plane = xs[2] * xs[3];
  const std::size_t count = batch * plane;
  const T* x = input.value().ptr();

  BasicTensor<T> xhat(xs);
  std::vector<T> inv_std(channels);
  for (std::size_t c = 0; c < channels; ++c) {
    double mean = 0.0;
    double var = 0.0;
    if (mode == Mode::kTrain) {
      for (std::size_t n = 0; n < batch; ++n) {
        const T* p = x + (n * channels + c) * plane;
        for (std::size_t i = 0; i < plane; ++i) mean += p[i];
      }
      mean /= static_cast<double>(count);
      for (std::size_t n = 0; n < batch; ++n) {
        const T* p = x + (n * channels + c) * plane;
        for (std::size_t i = 0; i < plane; ++i) {
          const double d = p[i] - mean;
          var += d * d;
        }
      }
      var /= static_cast<double>(count);
      const double unbiased = count > 1 ? var * static_cast<double>(count) / static_cast<double>(count - 1) : var;
      state.running_mean[c] = static_cast<T>(state.decay * state.running_mean[c] + (1.0 - state.decay) * mean);
      state.running_var[c] = static_cast<T>(state.decay * state.running_var[c] + (1.0 - state.decay) * unbiased);
    } else {
      mean = state.running_mean[c];
      var = state.running_var[c];
    }
    const T m = static_cast<T>(mean);
    const T s = static_cast<T>(1.0 / std::sqrt(var + state.epsilon));
    inv_std[c] = s;
    for (std::size_t n = 0; n < batch; ++n) {
      const T* p = x + (n * channels + c) * plane;
      T* q = xhat.ptr() + (n * channels + c) * plane;
      for (std::size_t i = 0; i < plane; ++i) q[i] = (p[i] - m) * s;
    }
  }

  BasicTensor<T> out(xs);
  const T* gamma = state.gamma.value.ptr();
  const T* beta = state.beta.value.ptr();
  for (std::size_t n = 0; n < batch; ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      const T* q = xhat.ptr() + (n * channels + c) * plane;
      T* o = out.ptr() + (n * channels + c) * plane;
      for (std::size_t i = 0; i < plane; ++i) o[i] = gamma[c] * q[i] + beta[c];
    }
  }

  BasicTensor<T> gamma_copy = state.gamma.value;
  const bool train = mode == Mode::kTrain;
  return Var<T>::make(
      std::move(out), {input, Var<T>::leaf(state.gamma), Var<T>::leaf(state.beta)},
      [xhat = std::move(xhat), inv_std = std::move(inv_std), gamma_copy = std::move(gamma_copy), batch, channels,
       plane, count, train](Node<T>& node) {
        auto& x = *node.inputs[0];
        auto& gn = *node.inputs[1];
        auto& bn = *node.inputs[2];
        const T* dy = node.grad.ptr();
        for (std::size_t c = 0; c < channels; ++c) {
          double sum_dy = 0.0;
          double sum_dy_xhat = 0.0;
          for (std::size_t n = 0; n < batch; ++n) {
            const std::size_t off = (n * channels + c) * plane;
            for (std::size_t i = 0; i < plane; ++i) {
              sum_dy += dy[off + i];
              sum_dy_xhat += static_cast<double>(dy[off + i]) * xhat[off + i];
            }
          }
          if (gn.requires_grad) gn.grad_buffer()[c] += static_cast<T>(sum_dy_xhat);
          if (bn.requires_grad) bn.grad_buffer()[c] += static_cast<T>(sum_dy);
          if (!x.requires_grad) continue;
          T* dx = x.grad_buffer().ptr();
          const T scale = gamma_copy[c] * inv_std[c];
          if (train) {
            const T mean_dy = static_cast<T>(sum_dy / static_cast<double>(count));
            const T mean_dy_xhat = static_cast<T>(sum_dy_xhat / static_cast<double>(count));
            for (std::size_t n = 0; n < batch; ++n) {
              const std::size_t off = (n * channels + c) * plane;
              for (std::size_t i = 0; i < plane; ++i) {
                dx[off + i] += scale * (dy[off + i] - mean_dy - xhat[off + i] * mean_dy_xhat);
              }
            }
          } else {
            for (std::size_t n = 0; n < batch; ++n) {
              const std::size_t off = (n * channels + c) * plane;
              for (std::size_t i = 0; i < plane; ++i) dx[off + i] += scale * dy[off + i];
            }
          }
        }
      });
}

template <typename T>
Var<T> relu(const Var<T>& x) {
  BasicTensor<T> out = x.value();
  for (auto& v : out.data()) v = std::max(v, T{0});
  return Var<T>::make(std::move(out), {x}, [](Node<T>& node) {
    auto& in = *node.inputs[0];
    T* dx = in.grad_buffer().ptr();
    for (std::size_t i = 0; i < node.grad.size(); ++i) {
      if (in.value[i] > T{0}) dx[i] += node.grad[i];
    }
  });
}

template <typename T>
Var<T> tanh(const Var<T>& x) {
  BasicTensor<T> out = x.value();
  for (auto& v : out.data()) v = std::tanh(v);
  return Var<T>::make(std::move(out), {x}, [](Node<T>& node) {
    T* dx = node.inputs[0]->grad_buffer().ptr();
    for (std::size_t i = 0; i < node.grad.size(); ++i) {
      const T y = node.value[i];
      dx[i] += node.grad[i] * (T{1} - y * y);
    }
  });
}

template <typename T>
Var<T> affine(const Var<T>& x, T scale, T shift) {
  BasicTensor<T> out = x.value();
  for (auto& v : out.data()) v = scale * v + shift;
  return Var<T>::make(std::move(out), {x}, [scale](Node<T>& node) {
    T* dx = node.inputs[0]->grad_buffer().ptr();
    for (std::size_t i = 0; i < node.grad.size(); ++i) dx[i] += scale * node.grad[i];
  });
}

template <typename T>
Var<T> add(const Var<T>& a, const Var<T>& b) {
  require_same_shape(a.shape(), b.shape(), "add");
  BasicTensor<T> out = a.value();
  out.add_(b.value());
  return Var<T>::make(std::move(out), {a, b}, [](Node<T>& node) {
    for (auto& in : node.inputs) {
      if (in->requires_grad) in->grad_buffer().add_(node.grad);
    }
  });
}

template <typename T>
Var<T> max_pool2x2(const Var<T>& x) {
  const Shape& xs = x.shape();
  require_rank4(xs, "max_pool2x2 input");
  if (xs[2] < 2 || xs[3] < 2) throw ValidationError("max_pool2x2 needs spatial extent >= 2, got " + shape_string(xs));
  const std::size_t oh = xs[2] / 2;
  const std::size_t ow = xs[3] / 2;
  BasicTensor<T> out(Shape{xs[0], xs[1], oh, ow});
  std::vector<std::size_t> argmax(out.size());
  const T* in = x.value().ptr();
  std::size_t o = 0;
  for (std::size_t nc = 0; nc < xs[0] * xs[1]; ++nc) {
    const std::size_t base = nc * xs[2] * xs[3];
    for (std::size_t i = 0; i < oh; ++i) {
      for (std::size_t j = 0; j < ow; ++j, ++o) {
        std::size_t best = base + (2 * i) * xs[3] + 2 * j;
        for (std::size_t di = 0; di < 2; ++di) {
          for (std::size_t dj = 0; dj < 2; ++dj) {
            const std::size_t idx = base + (2 * i + di) * xs[3] + 2 * j + dj;
            if (in[idx] > in[best]) best = idx;
          }
        }
        argmax[o] = best;
        out[o] = in[best];
      }
    }
  }
  return Var<T>::make(std::move(out), {x}, [argmax = std::move(argmax)](Node<T>& node) {
    T* dx = node.inputs[0]->grad_buffer().ptr();
    for (std::size_t i = 0; i < argmax.size(); ++i) dx[argmax[i]] += node.grad[i];
  });
}

template <typename T>
Var<T> mean_squared_error(const Var<T>& a, const Var<T>& b) {
  require_same_shape(a.shape(), b.shape(), "mean_squared_error");
  const std::size_t n = a.value().size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(a.value()[i]) - static_cast<double>(b.value()[i]);
    acc += d * d;
  }
  return Var<T>::make(scalar_tensor<T>(acc / static_cast<double>(n)), {a, b}, [n](Node<T>& node) {
    auto& an = *node.inputs[0];
    auto& bn = *node.inputs[1];
    const T g = node.grad[0] * T{2} / static_cast<T>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const T d = g * (an.value[i] - bn.value[i]);
      if (an.requires_grad) an.grad_buffer()[i] += d;
      if (bn.requires_grad) bn.grad_buffer()[i] -= d;
    }
  });
}

template <typename T>
Var<T> total_variation(const Var<T>& y) {
  const Shape& ys = y.shape();
  require_rank4(ys, "total_variation input");
  if (ys[2] < 2 || ys[3] < 2) {
    throw ValidationError("total_variation needs height and width >= 2, got " + shape_string(ys));
  }
  const std::size_t h = ys[2];
  const std::size_t w = ys[3];
  const std::size_t planes = ys[0] * ys[1];
  const T* v = y.value().ptr();
  double acc = 0.0;
  for (std::size_t p = 0; p < planes; ++p) {
    const T* img = v + p * h * w;
    for (std::size_t i = 0; i + 1 < h; ++i) {
      for (std::size_t j = 0; j + 1 < w; ++j) {
        const double dv = static_cast<double>(img[(i + 1) * w + j]) - img[i * w + j];
        const double dh = static_cast<double>(img[i * w + j + 1]) - img[i * w + j];
        acc += std::sqrt(dv * dv + dh * dh);
      }
    }
  }
  return Var<T>::make(scalar_tensor<T>(acc), {y}, [planes, h, w](Node<T>& node) {
    auto& in = *node.inputs[0];
    T* dx = in.grad_buffer().ptr();
    const double g = node.grad[0];
    // Smoothed so that flat neighborhoods get a zero rather than undefined gradient.
    constexpr double kSmoothing = 1e-8;
    for (std::size_t p = 0; p < planes; ++p) {
      const T* img = in.value.ptr() + p * h * w;
      T* d = dx + p * h * w;
      for (std::size_t i = 0; i + 1 < h; ++i) {
        for (std::size_t j = 0; j + 1 < w; ++j) {
          const double dv = static_cast<double>(img[(i + 1) * w + j]) - img[i * w + j];
          const double dh = static_cast<double>(img[i * w + j + 1]) - img[i * w + j];
          const double s = g / std::sqrt(dv * dv + dh * dh + kSmoothing);
          d[(i + 1) * w + j] += static_cast<T>(s * dv);
          d[i * w + j + 1] += static_cast<T>(s * dh);
          d[i * w + j] -= static_cast<T>(s * (dv + dh));
        }
      }
    }
  });
}

#define SKETCHINV_INSTANTIATE(T)                                                                                   \
  template struct BatchNormState<T>;                                                                               \
  template Var<T> conv2d(const Var<T>&, const Var<T>&, const Var<T>&, std::size_t, std::size_t);                  \
  template Var<T> deconv2d(const Var<T>&, const Var<T>&, const Var<T>&, std::size_t, std::size_t, std::size_t,    \
                           std::size_t);                                                                           \
  template Var<T> batch_norm(const Var<T>&, BatchNormState<T>&, Mode);                                             \
  template Var<T> relu(const Var<T>&);                                                                             \
  template Var<T> tanh(const Var<T>&);                                                                             \
  template Var<T> affine(const Var<T>&, T, T);                                                                     \
  template Var<T> add(const Var<T>&, const Var<T>&);                                                               \
  template Var<T> max_pool2x2(const Var<T>&);                                                                      \
  template Var<T> mean_squared_error(const Var<T>&, const Var<T>&);                                                \
  template Var<T> total_variation(const Var<T>&);

SKETCHINV_INSTANTIATE(float)
SKETCHINV_INSTANTIATE(double)

}  // namespace sketchinv
