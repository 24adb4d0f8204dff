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

#include "sketchinv/pca.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "sketchinv/error.hpp"

namespace sketchinv {

PcaProjection pca_top3(const float* features, std::size_t channels, std::size_t positions) {
  if (channels == 0 || positions == 0) throw ValidationError("pca needs a non-empty feature map");
  PcaProjection out;
  out.channels = channels;
  out.positions = positions;
  out.mean.assign(channels, 0.0);

  Eigen::MatrixXd centered(channels, positions);
  for (std::size_t c = 0; c < channels; ++c) {
    double m = 0.0;
    for (std::size_t p = 0; p < positions; ++p) m += features[c * positions + p];
    m /= static_cast<double>(positions);
    out.mean[c] = m;
    for (std::size_t p = 0; p < positions; ++p) centered(c, p) = features[c * positions + p] - m;
  }
  const Eigen::MatrixXd cov = centered * centered.transpose() / static_cast<double>(positions);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw ValidationError("eigendecomposition of feature covariance failed");

  const std::size_t available = std::min<std::size_t>(3, channels);
  for (std::size_t k = 0; k < 3; ++k) {
    out.basis[k].assign(channels, 0.0);
    if (k >= available) continue;
    const auto col = static_cast<Eigen::Index>(channels - 1 - k);
    out.variances[k] = std::max(0.0, solver.eigenvalues()(col));
    std::size_t peak = 0;
    for (std::size_t c = 1; c < channels; ++c) {
      if (std::abs(solver.eigenvectors()(static_cast<Eigen::Index>(c), col)) >
          std::abs(solver.eigenvectors()(static_cast<Eigen::Index>(peak), col))) {
        peak = c;
      }
    }
    const double sign = solver.eigenvectors()(static_cast<Eigen::Index>(peak), col) < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < channels; ++c) {
      out.basis[k][c] = sign * solver.eigenvectors()(static_cast<Eigen::Index>(c), col);
    }
  }

  out.scores.assign(positions * 3, 0.0);
  for (std::size_t p = 0; p < positions; ++p) {
    for (std::size_t k = 0; k < available; ++k) {
      double s = 0.0;
      for (std::size_t c = 0; c < channels; ++c) s += out.basis[k][c] * centered(c, p);
      out.scores[p * 3 + k] = s;
    }
  }
  return out;
}

ImageU8 pca_image(const PcaProjection& pca, std::size_t width, std::size_t height) {
  if (width * height != pca.positions) throw ValidationError("pca_image geometry does not match projection");
  ImageF img(width, height, 3);
  for (std::size_t k = 0; k < 3; ++k) {
    double lo = pca.scores[k], hi = pca.scores[k];
    for (std::size_t p = 0; p < pca.positions; ++p) {
      lo = std::min(lo, pca.scores[p * 3 + k]);
      hi = std::max(hi, pca.scores[p * 3 + k]);
    }
    for (std::size_t p = 0; p < pca.positions; ++p) {
      img.data[p * 3 + k] =
          hi > lo ? static_cast<float>((pca.scores[p * 3 + k] - lo) / (hi - lo) * 255.0) : 127.5f;
    }
  }
  return quantize(img);
}

ImageU8 visualize_feature_map(const Tensor& activations, std::size_t index) {
  const Shape& s = activations.shape();
  require_rank4(s, "feature map");
  if (index >= s[0]) throw ValidationError("feature map sample index out of range");
  const std::size_t positions = s[2] * s[3];
  const PcaProjection pca = pca_top3(activations.ptr() + index * s[1] * positions, s[1], positions);
  return pca_image(pca, s[3], s[2]);
}

}  // namespace sketchinv
