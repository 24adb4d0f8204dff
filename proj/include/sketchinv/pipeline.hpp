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

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sketchinv/config.hpp"
#include "sketchinv/csi_net.hpp"
#include "sketchinv/identify.hpp"
#include "sketchinv/manifest.hpp"
#include "sketchinv/metrics.hpp"

namespace sketchinv {

using LogFn = std::function<void(const std::string&)>;

// Records that could not be processed; dataset commands skip and continue.
struct SkipList {
  std::size_t processed = 0;
  std::vector<std::string> skipped;
};

// Aligns every record with landmarks into <out_dir>/aligned/<stem>.png and
// assigns splits by identity (seeded, `cfg.test_fraction` to test).
// Returns the updated manifest rebased onto out_dir.
DatasetManifest run_preprocess(const DatasetManifest& manifest, const PipelineConfig& cfg,
                               const std::filesystem::path& out_dir, SkipList& skips, const LogFn& log = {});

// The sketch of one aligned photo in `style`. Blur and spatial scales are
// given for 96-pixel crops and scaled to the photo width.
ImageU8 make_sketch(const ImageU8& aligned, SketchStyle style, const PipelineConfig& cfg);

// Writes <out_dir>/sketches/<style>/<stem>.png for every record with an
// aligned photo (aligning raw photos with landmarks first).
DatasetManifest run_generate(const DatasetManifest& manifest, const std::vector<SketchStyle>& styles,
                             const PipelineConfig& cfg, const std::filesystem::path& out_dir, SkipList& skips,
                             const LogFn& log = {});

struct LossRecord {
  std::uint64_t iteration = 0;
  double total = 0.0;
  double pixel = 0.0;
  double feature = 0.0;  // NaN when the feature weight is zero
  double tv = 0.0;

  friend bool operator==(const LossRecord&, const LossRecord&) = default;
};

struct TrainResult {
  CsiNetwork network;
  std::vector<LossRecord> log;  // iterations run by this call only
};

// Deterministic minibatch schedule: sample j of iteration `it` (1-based) is
// entry perm_e[q mod n] with q = (it - 1) * B + j and e = q / n, where perm_e
// is a seeded shuffle per epoch.
std::vector<std::size_t> minibatch_indices(std::uint64_t iteration, std::size_t batch, std::size_t count,
                                           std::uint64_t seed);

// Trains one style model on the manifest's train split. Checkpoints go to
// <out_dir>/checkpoint_<iteration>.csiw every interval and to
// <out_dir>/final.csiw; per-iteration losses to <out_dir>/loss.csv.
// With `resume`, continues after the checkpoint's iteration.
TrainResult run_train(const DatasetManifest& manifest, const PipelineConfig& cfg, const std::filesystem::path& out_dir,
                      const std::optional<std::filesystem::path>& resume = std::nullopt, const LogFn& log = {});

// Infer-mode forward pass of one sketch; output is 3 channels in [0, 255].
ImageU8 invert_sketch(CsiNetwork& net, const ImageU8& sketch);

// Inverts the `style` sketches of `split` into <out_dir>/inverted/<style>/.
DatasetManifest run_invert(const DatasetManifest& manifest, const std::filesystem::path& checkpoint,
                           SketchStyle style, const std::string& split, const std::filesystem::path& out_dir,
                           const LogFn& log = {});

// PSNR / SSIM / R of inverted images against aligned photos; writes
// <out_dir>/report.csv and <out_dir>/report.json.
QualityReport run_evaluate(const DatasetManifest& manifest, SketchStyle style, const std::string& split,
                           const MetricConfig& cfg, const std::filesystem::path& out_dir, SkipList& skips,
                           const LogFn& log = {});

struct IdentificationReport {
  std::optional<IdentificationResult> sketch;
  std::optional<IdentificationResult> inverted;
  std::optional<double> p_value;  // inverted vs sketch, when both ran
};

// Rank-1 identification of raw sketches and inverted sketches against the
// aligned photos of `split`. Line and grayscale sketches are replicated to
// RGB before matching. With `checkpoint`, inverted queries are computed in
// memory instead of read from the manifest. Writes identify_<condition>.csv
// and identify.json to out_dir.
IdentificationReport run_identify(const DatasetManifest& manifest, SketchStyle style, const std::string& split,
                                  const std::optional<std::filesystem::path>& checkpoint,
                                  const std::filesystem::path& out_dir, const LogFn& log = {});

// Writes <out_dir>/layer_NN.png for each of the 11 layers.
void run_visualize(const std::filesystem::path& checkpoint, const std::filesystem::path& sketch,
                   const std::filesystem::path& out_dir);

struct ToyRun {
  DatasetManifest manifest;
  TrainResult train;
  QualityReport report;
  IdentificationReport identification;
};

// Synthetic corpus -> preprocess -> generate -> train -> invert -> evaluate ->
// identify, all under out_dir, on the training split.
ToyRun run_toy_pipeline(const PipelineConfig& cfg, const std::filesystem::path& out_dir, const LogFn& log = {});

}  // namespace sketchinv
