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

#include <doctest.h>

#include <cmath>

#include "sketchinv/error.hpp"
#include "sketchinv/identify.hpp"
#include "sketchinv/pca.hpp"
#include "test_support.hpp"

using namespace sketchinv;
using namespace sketchinv::testing;

namespace {

// Cyclic Jacobi rotations for a symmetric matrix; returns eigenvalues and
// column eigenvectors.
void jacobi(std::vector<std::vector<double>> a, std::vector<double>& values, std::vector<std::vector<double>>& vecs) {
  const std::size_t n = a.size();
  vecs.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) vecs[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-22) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = vecs[k][p], vkq = vecs[k][q];
          vecs[k][p] = c * vkp - s * vkq;
          vecs[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  values.resize(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a[i][i];
}

double reconstruction_error(const std::vector<float>& f, std::size_t C, std::size_t P, const std::vector<double>& mean,
                            const std::vector<std::vector<double>>& basis) {
  double err = 0.0;
  for (std::size_t p = 0; p < P; ++p) {
    std::vector<double> x(C);
    for (std::size_t c = 0; c < C; ++c) x[c] = f[c * P + p] - mean[c];
    std::vector<double> r = x;
    for (const auto& b : basis) {
      double s = 0.0;
      for (std::size_t c = 0; c < C; ++c) s += b[c] * x[c];
      for (std::size_t c = 0; c < C; ++c) r[c] -= s * b[c];
    }
    for (double v : r) err += v * v;
  }
  return err;
}

}  // namespace

TEST_CASE("rank-1 matching") {
  Rng rng(1);
  Gallery g;
  std::vector<ImageU8> photos;
  for (int i = 0; i < 4; ++i) {
    photos.push_back(random_image(8, 8, 3, rng));
    g.add("id" + std::to_string(i), photos.back());
  }
  const Match m = identify_rank1(photos[2], g);
  CHECK(m.predicted == "id2");
  CHECK(m.ranking.front().distance == 0.0);
  CHECK(m.rank_of(g, "id2") == 1);
  for (std::size_t i = 1; i < m.ranking.size(); ++i) CHECK(m.ranking[i - 1].distance <= m.ranking[i].distance);
  CHECK_THROWS_AS(identify_rank1(ImageU8(9, 8, 3), g), ValidationError);
  CHECK_THROWS_AS(identify_rank1(photos[0], Gallery{}), ValidationError);
}

TEST_CASE("orthogonal patterns and tie-breaking") {
  Gallery g;
  for (int k = 0; k < 3; ++k) {
    ImageU8 p(9, 9, 3, 0);
    for (std::size_t i = static_cast<std::size_t>(k); i < p.data.size(); i += 3) p.data[i] = 200;
    g.add("pattern" + std::to_string(k), p);
  }
  Rng rng(2);
  ImageU8 q(9, 9, 3, 0);
  for (std::size_t i = 1; i < q.data.size(); i += 3) q.data[i] = 200;
  for (auto& v : q.data) v = static_cast<std::uint8_t>(std::min<int>(255, v + static_cast<int>(rng.below(20))));
  CHECK(identify_rank1(q, g).predicted == "pattern1");

  Gallery dup;
  const ImageU8 same(4, 4, 3, 50);
  dup.add("first", same);
  dup.add("second", same);
  CHECK(identify_rank1(same, dup).predicted == "first");
}

TEST_CASE("sign test tails") {
  std::vector<bool> a(10, true), b(10, false);
  CHECK(compare_conditions(a, b) == doctest::Approx(0.001953125).epsilon(1e-12));
  CHECK(compare_conditions(a, a) == 1.0);
  std::vector<bool> c(10, false);
  for (int i = 0; i < 8; ++i) c[static_cast<std::size_t>(i)] = true;
  std::vector<bool> d(10, false);
  d[8] = d[9] = true;
  CHECK(compare_conditions(c, d) == doctest::Approx(2.0 * (45 + 10 + 1) / 1024.0).epsilon(1e-12));
  // Concordant pairs do not count: 5 discordant, all one way, plus 20 ties.
  std::vector<bool> e(25, true), f(25, true);
  for (int i = 0; i < 5; ++i) f[static_cast<std::size_t>(i)] = false;
  CHECK(compare_conditions(e, f) == doctest::Approx(2.0 / 32.0).epsilon(1e-12));
  CHECK_THROWS_AS(compare_conditions(a, e), ValidationError);
}

TEST_CASE("identification summary") {
  auto res = summarize_identification({{"q1", "a", "a", 1}, {"q2", "b", "c", 3}, {"q3", "c", "c", 1}, {"q4", "a", "d", 2}});
  CHECK(res.accuracy == 0.5);
  CHECK(res.correctness() == std::vector<bool>{true, false, true, false});
  CHECK(identification_csv(res).rfind("query,predicted,truth,rank\n", 0) == 0);
}

TEST_CASE("pca agrees with a Jacobi eigen oracle") {
  Rng rng(3);
  const std::size_t C = 7, P = 60;
  std::vector<float> f(C * P);
  for (std::size_t p = 0; p < P; ++p) {
    const double z1 = rng.normal() * 5.0, z2 = rng.normal() * 2.0;
    for (std::size_t c = 0; c < C; ++c)
      f[c * P + p] = static_cast<float>(z1 * std::sin(c + 1.0) + z2 * std::cos(2.0 * c) + 0.3 * rng.normal() + c);
  }
  const PcaProjection pca = pca_top3(f.data(), C, P);
  std::vector<std::vector<double>> cov(C, std::vector<double>(C, 0.0));
  for (std::size_t i = 0; i < C; ++i)
    for (std::size_t j = 0; j < C; ++j) {
      for (std::size_t p = 0; p < P; ++p) cov[i][j] += (f[i * P + p] - pca.mean[i]) * (f[j * P + p] - pca.mean[j]);
      cov[i][j] /= static_cast<double>(P);
    }
  std::vector<double> values;
  std::vector<std::vector<double>> vecs;
  jacobi(cov, values, vecs);
  std::vector<std::size_t> order(C);
  for (std::size_t i = 0; i < C; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });
  std::vector<std::vector<double>> oracle_basis;
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(pca.variances[k] == doctest::Approx(values[order[k]]).epsilon(1e-9));
    std::vector<double> v(C);
    for (std::size_t c = 0; c < C; ++c) v[c] = vecs[c][order[k]];
    oracle_basis.push_back(v);
  }
  std::vector<std::vector<double>> basis(pca.basis.begin(), pca.basis.end());
  CHECK(reconstruction_error(f, C, P, pca.mean, basis) <=
        reconstruction_error(f, C, P, pca.mean, oracle_basis) * (1.0 + 1e-9) + 1e-9);
  for (const auto& b : basis) {
    std::size_t peak = 0;
    for (std::size_t c = 1; c < C; ++c)
      if (std::abs(b[c]) > std::abs(b[peak])) peak = c;
    CHECK(b[peak] > 0.0);
  }
}

TEST_CASE("pca degenerate and full-rank cases") {
  SUBCASE("constant map is mid-gray") {
    Tensor t(Shape{1, 5, 6, 6}, 3.0f);
    const ImageU8 img = visualize_feature_map(t);
    CHECK(img.channels == 3);
    for (auto v : img.data) CHECK(v == 128);
  }
  SUBCASE("fewer than three channels pads with zero components") {
    Rng rng(4);
    const Tensor t = random_tensor<float>({1, 2, 4, 4}, rng);
    const PcaProjection pca = pca_top3(t.ptr(), 2, 16);
    for (double v : pca.basis[2]) CHECK(v == 0.0);
    CHECK(pca.variances[2] == 0.0);
  }
  SUBCASE("three channels: the basis is a rotation") {
    Rng rng(5);
    const Tensor t = random_tensor<float>({1, 3, 5, 5}, rng);
    const PcaProjection pca = pca_top3(t.ptr(), 3, 25);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        double d = 0.0;
        for (std::size_t c = 0; c < 3; ++c) d += pca.basis[i][c] * pca.basis[j][c];
        CHECK(d == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));
      }
    for (std::size_t p = 0; p < 25; ++p)
      for (std::size_t k = 0; k < 3; ++k) {
        double s = 0.0;
        for (std::size_t c = 0; c < 3; ++c) s += pca.basis[k][c] * (t[c * 25 + p] - pca.mean[c]);
        CHECK(pca.scores[p * 3 + k] == doctest::Approx(s).epsilon(1e-9));
      }
  }
}
