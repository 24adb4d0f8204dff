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

// Acceptance run: one PASS/FAIL line per criterion. Usage: acceptance [work_dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <string>
#include <vector>

#include "geometry_support.hpp"
#include "goldens.hpp"
#include "layer_table.hpp"
#include "sketchinv/config.hpp"
#include "sketchinv/grad_check.hpp"
#include "sketchinv/loss.hpp"
#include "sketchinv/metrics.hpp"
#include "sketchinv/pipeline.hpp"
#include "test_support.hpp"

using namespace sketchinv;
using namespace sketchinv::testing;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

template <typename T>
Var<T> cst(BasicTensor<T> t) {
  return Var<T>::constant(std::move(t));
}

// ---------------------------------------------------------------------------

Verdict architecture() {
  const auto t0 = Clock::now();
  auto net = CsiNetwork::build(3, 2016);
  const auto rows = net.describe();
  const auto want = expected_layers(3);
  if (rows != want) return {false, "layer descriptors differ from the table"};

  // The descriptors must agree with the stored weights...
  const auto params = net.parameters();
  std::size_t unit = 0;
  for (const auto& row : rows) {
    for (const auto& c : row.convs) {
      const Shape expect = row.kind == LayerKind::kDeconv ? Shape{c.in_channels, c.out_channels, c.ksize, c.ksize}
                                                          : Shape{c.out_channels, c.in_channels, c.ksize, c.ksize};
      if (params[4 * unit]->value.shape() != expect) {
        return {false, params[4 * unit]->name + " has shape " + shape_string(params[4 * unit]->value.shape())};
      }
      for (std::size_t k = 1; k < 4; ++k) {
        if (params[4 * unit + k]->value.shape() != Shape{c.out_channels}) {
          return {false, params[4 * unit + k]->name + " has the wrong length"};
        }
      }
      ++unit;
    }
  }
  if (unit * 4 != params.size()) return {false, "unexpected extra parameters"};
  if (net.parameter_count() != kParameterCount3) return {false, "parameter count differs"};

  // ...and with the strides seen in a forward pass.
  std::vector<Tensor> acts;
  const auto y = net.forward(Var<float>::input(Tensor(Shape{1, 3, 96, 96}, 128.0f)), Mode::kInfer, &acts);
  const std::size_t sizes[] = {96, 48, 24, 24, 24, 24, 24, 24, 48, 96, 96};
  for (std::size_t i = 0; i < 11; ++i) {
    if (acts[i].dim(2) != sizes[i] || acts[i].dim(1) != rows[i].convs.back().out_channels) {
      return {false, "layer " + std::to_string(i + 1) + " output " + shape_string(acts[i].shape())};
    }
  }
  const double t = seconds_since(t0);
  return {t < 1.0, "11 rows, " + std::to_string(net.parameter_count()) + " parameters, " + fmt("%.2f s", t)};
}

Verdict gradients() {
  const auto t0 = Clock::now();
  Rng rng(31);
  auto net = BasicCsiNetwork<double>::build(3, 77);
  const auto phi = BasicFeatureExtractor<double>::seeded();
  const TensorD x = random_tensor<double>({1, 3, 16, 16}, rng, 0.0, 255.0);
  const TensorD t = random_tensor<double>({1, 3, 16, 16}, rng, 0.0, 255.0);
  const auto params = net.parameters();
  auto objective = [&]() {
    const auto y = net.forward(cst(x), Mode::kTrain);
    return total_loss(cst(t), y, phi, LossWeights{}).total;
  };
  // h = 1e-3 straddles ReLU/max-pool kinks in this net; 1e-5 keeps both
  // truncation and cancellation error far below the tolerance in double.
  constexpr double kStep = 1e-5;
  const auto r = grad_check<double>(objective, params, {kStep, 256, 5});
  const double secs = seconds_since(t0);
  return {r.max_relative_error < 1e-4 && r.coordinates >= 200 && secs < 120.0,
          "max relative error " + fmt("%.3g", r.max_relative_error) + " over " + std::to_string(r.coordinates) +
              " coordinates (h = " + fmt("%g", kStep) + "), " + fmt("%.1f s", secs)};
}

Verdict adjoint() {
  const auto t0 = Clock::now();
  Rng rng(41);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 1 + 2 * rng.below(3);
    const std::size_t stride = 1 + rng.below(3);
    const std::size_t pad = rng.below(k);
    const std::size_t n = 1 + rng.below(3), ci = 1 + rng.below(4), co = 1 + rng.below(4);
    const std::size_t h = k + rng.below(9), w = k + rng.below(9);
    const Tensor u = random_tensor<float>({n, ci, h, w}, rng);
    const Tensor kern = random_tensor<float>({co, ci, k, k}, rng);
    const Tensor cu = conv2d(cst(u), cst(kern), cst(Tensor(Shape{co})), stride, pad).value();
    const Tensor v = random_tensor<float>(cu.shape(), rng);
    // deconv2d weights are I x O x K x K with I the deconv input channels.
    Tensor kt(Shape{co, ci, k, k});
    kt = kern;
    const Tensor dv = deconv2d(cst(v), cst(kt), cst(Tensor(Shape{ci})), stride, pad, h, w).value();
    const double a = dot(cu, v), b = dot(u, dv);
    worst = std::max(worst, std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30}));
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-4 && secs < 30.0, "worst relative gap " + fmt("%.3g", worst) + " over 50 shapes, " +
                                           fmt("%.2f s", secs)};
}

Verdict metric_oracles() {
  Rng rng(51);
  const ImageU8 x = random_image(64, 48, 3, rng);
  const double s = ssim(x, x);
  ImageU8 base(64, 48, 3);
  for (auto& v : base.data) v = static_cast<std::uint8_t>(rng.below(100));
  ImageU8 aff = base;
  for (auto& v : aff.data) v = static_cast<std::uint8_t>(2 * v + 13);
  const double r = pearson_r(base, aff);
  ImageU8 lo = x;
  for (auto& v : lo.data) v = static_cast<std::uint8_t>(std::min<int>(v, 254));
  ImageU8 hi = lo;
  for (auto& v : hi.data) v += 1;
  const double p = psnr(lo, hi);
  const double tv = tv_loss(cst(Tensor(Shape{2, 3, 32, 32}, 91.0f))).value()[0];
  const bool ok = std::abs(s - 1.0) <= 1e-9 && std::abs(r - 1.0) <= 1e-9 && std::abs(p - 48.1308) <= 1e-3 && tv == 0.0;
  return {ok, "ssim " + fmt("%.12f", s) + ", r " + fmt("%.12f", r) + ", psnr " + fmt("%.4f dB", p) + ", tv " +
                  fmt("%g", tv)};
}

Verdict loss_reduction() {
  Rng rng(61);
  const auto id = FeatureExtractor::identity();
  const auto phi = FeatureExtractor::seeded();
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto t = cst(random_tensor<float>({2, 3, 8, 8}, rng, 0.0, 255.0));
    const auto y = cst(random_tensor<float>({2, 3, 8, 8}, rng, 0.0, 255.0));
    const double f = feature_loss(t, y, id).value()[0];
    const double pl = pixel_loss(t, y).value()[0];
    worst = std::max(worst, std::abs(f - pl) / std::abs(pl));
  }
  const auto t = cst(random_tensor<float>({2, 3, 16, 16}, rng, 0.0, 255.0));
  const auto y = cst(random_tensor<float>({2, 3, 16, 16}, rng, 0.0, 255.0));
  const double lp = pixel_loss(t, y).value()[0];
  const double lf = feature_loss(t, y, phi).value()[0];
  const double ltv = tv_loss(y).value()[0];
  const double p = total_loss(t, y, phi, {1, 0, 0}).total.value()[0];
  const double f = total_loss(t, y, phi, {0, 1, 0}).total.value()[0];
  const double v = total_loss(t, y, phi, {0, 0, 1}).total.value()[0];
  const bool ok = worst <= 1e-6 && p == lp && f == lf && v == ltv;
  return {ok, "identity-extractor gap " + fmt("%.3g", worst) + "; single-weight totals " +
                  (p == lp && f == lf && v == ltv ? "match" : "differ")};
}

Verdict sketches() {
  bool white = true;
  for (int g = 0; g <= 255; g += 17) {
    for (auto v : line_sketch(ImageU8(40, 40, 3, static_cast<std::uint8_t>(g)), {}).data) white = white && v == 255;
  }
  const ImageF flat(40, 30, 3, 77.75f);
  const bool fixed = domain_transform_filter(flat, 40.0, 0.4, 3) == flat;
  const ImageU8 p = probe_photo();
  StylizeConfig gray;
  gray.grayscale = true;
  const ImageU8 l1 = line_sketch(p, {}), l2 = line_sketch(p, {});
  const ImageU8 g1 = stylize(p, gray), g2 = stylize(p, gray);
  const ImageU8 c1 = stylize(p, {}), c2 = stylize(p, {});
  const bool rerun = l1 == l2 && g1 == g2 && c1 == c2;
  const bool golden =
      image_hash(l1) == kGoldenLine && image_hash(g1) == kGoldenGrayscale && image_hash(c1) == kGoldenColor;
  return {white && fixed && rerun && golden, std::string("white ") + (white ? "yes" : "no") + ", fixed point " +
                                                 (fixed ? "yes" : "no") + ", rerun " + (rerun ? "identical" : "differs") +
                                                 ", goldens " + (golden ? "match" : "differ")};
}

Verdict geometry() {
  Rng rng(81);
  double worst_map = 0.0, worst_marker = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto mc = random_marker_case(rng);
    const auto t = alignment_for(mc.landmarks, mc.photo.width, mc.photo.height);
    const Point e = t.to_output(mc.landmarks.eye_center());
    const Point m = t.to_output(mc.landmarks.mouth_center());
    worst_map = std::max({worst_map, std::abs(e.x - 48.0), std::abs(e.y - 38.0), std::abs(m.x - 48.0),
                          std::abs(m.y - 70.0)});
    const ImageU8 out = align_crop(mc.photo, mc.landmarks);
    const Point ce = centroid(out, 28, 54);
    const Point cm = centroid(out, 54, 86);
    worst_marker = std::max({worst_marker, std::abs(ce.x - 48.0), std::abs(ce.y - 38.0), std::abs(cm.x - 48.0),
                             std::abs(cm.y - 70.0)});
  }
  return {worst_map <= 0.5 && worst_marker <= 0.5,
          "worst deviation: mapped " + fmt("%.3f px", worst_map) + ", re-detected marker " + fmt("%.3f px", worst_marker)};
}

double binomial_tail(int d, int k) {
  const int lo = std::max(k, d - k);
  double sum = 0.0;
  for (int i = lo; i <= d; ++i) {
    double c = 1.0;
    for (int j = 1; j <= i; ++j) c = c * (d - i + j) / j;
    sum += c;
  }
  return std::min(1.0, 2.0 * sum / std::pow(2.0, d));
}

std::vector<bool> pattern(int favour_a, int favour_b, int ties, bool a_side) {
  std::vector<bool> v;
  for (int i = 0; i < favour_a; ++i) v.push_back(a_side);
  for (int i = 0; i < favour_b; ++i) v.push_back(!a_side);
  for (int i = 0; i < ties; ++i) v.push_back(true);
  return v;
}

Verdict identification(const ToyRun& run) {
  const auto& id = run.identification;
  if (!id.inverted || !id.sketch) return {false, "identification did not run both conditions"};
  struct Case {
    int a, b, ties;
  };
  double worst = 0.0;
  for (const Case c : {Case{10, 0, 0}, Case{8, 2, 0}, Case{3, 1, 6}}) {
    const double p = compare_conditions(pattern(c.a, c.b, c.ties, true), pattern(c.a, c.b, c.ties, false));
    worst = std::max(worst, std::abs(p - binomial_tail(c.a + c.b, c.a)));
  }
  const double p10 = compare_conditions(pattern(10, 0, 0, true), pattern(10, 0, 0, false));
  std::size_t gallery = 0;
  for (const auto& r : run.manifest.records) gallery += r.split == "train";
  const bool ok = id.inverted->accuracy >= id.sketch->accuracy && worst <= 1e-12 && std::abs(p10 - 0.001953125) < 1e-9 &&
                  gallery == 8;
  return {ok, "rank-1 inverted " + fmt("%.3f", id.inverted->accuracy) + " vs color sketch " +
                  fmt("%.3f", id.sketch->accuracy) + " (gallery " + std::to_string(gallery) + "); sign-test gap " +
                  fmt("%.2g", worst) + ", 10/10 p = " + fmt("%.9f", p10)};
}

Verdict overfit(const ToyRun& run, double secs) {
  const double first = run.train.log.front().pixel;
  const double last = run.train.log.back().pixel;
  const double ratio = last / first;
  const double psnr_mean = run.report.psnr.mean;
  double psnr_min = 1e9;
  for (const auto& q : run.report.images) psnr_min = std::min(psnr_min, q.psnr);
  return {ratio <= 0.1 && psnr_mean >= 25.0 && secs < 900.0,
          "pixel loss " + fmt("%.1f", first) + " -> " + fmt("%.1f", last) + " (" + fmt("%.3f", ratio) +
              "), training-set PSNR " + fmt("%.2f dB", psnr_mean) + " (min " + fmt("%.2f", psnr_min) + "), " +
              fmt("%.0f s", secs)};
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    files[fs::relative(e.path(), root).generic_string()] =
        std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return files;
}

Verdict determinism(const fs::path& a, const fs::path& b) {
  const auto fa = snapshot(a), fb = snapshot(b);
  std::size_t ck = 0, inv = 0, rep = 0;
  for (const auto& [name, bytes] : fa) {
    if (name.ends_with(".csiw")) ++ck;
    if (name.starts_with("inverted/")) ++inv;
    if (name.starts_with("eval/") || name.starts_with("identify/")) ++rep;
  }
  if (fa.size() != fb.size()) return {false, "runs produced different file sets"};
  for (const auto& [name, bytes] : fa) {
    auto it = fb.find(name);
    if (it == fb.end() || it->second != bytes) return {false, name + " differs between runs"};
  }
  const bool covered = ck > 0 && inv == 8 && rep >= 4;
  return {covered, std::to_string(fa.size()) + " files byte-identical (" + std::to_string(ck) + " checkpoints, " +
                       std::to_string(inv) + " inverted images, " + std::to_string(rep) + " reports)"};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "sketchinv_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  int failures = 0;
  auto report = [&](int number, const char* name, const std::function<Verdict()>& fn) {
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += v.pass ? 0 : 1;
    std::printf("[%s] %2d %s: %s\n", v.pass ? "PASS" : "FAIL", number, name, v.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "architecture conformance", architecture);
  report(2, "gradient correctness", gradients);
  report(3, "conv/deconv adjoint", adjoint);
  report(5, "metric oracles", metric_oracles);
  report(6, "loss reduction", loss_reduction);
  report(7, "sketch determinism and analytic cases", sketches);
  report(8, "preprocessing geometry", geometry);

  PipelineConfig cfg;
  apply_toy_profile(cfg);
  cfg.train.seed = 2016;
  std::optional<ToyRun> run;
  double secs = 0.0;
  std::string toy_error;
  try {
    const auto t0 = Clock::now();
    run = run_toy_pipeline(cfg, work / "run1");
    secs = seconds_since(t0);
  } catch (const std::exception& e) {
    toy_error = e.what();
  }
  auto toy = [&](const std::function<Verdict()>& fn) {
    return [&, fn]() { return run ? fn() : Verdict{false, "toy pipeline failed: " + toy_error}; };
  };
  report(4, "toy overfit", toy([&] { return overfit(*run, secs); }));
  report(9, "identification ordering", toy([&] { return identification(*run); }));
  report(10, "end-to-end determinism", toy([&] {
           run_toy_pipeline(cfg, work / "run2");
           return determinism(work / "run1", work / "run2");
         }));

  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
