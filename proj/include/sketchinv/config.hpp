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

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "sketchinv/adam.hpp"
#include "sketchinv/loss.hpp"
#include "sketchinv/metrics.hpp"
#include "sketchinv/sketch.hpp"

namespace sketchinv {

struct TrainConfig {
  SketchStyle style = SketchStyle::kLine;
  std::uint64_t iterations = 200000;
  std::size_t minibatch = 4;
  AdamConfig adam;
  LossWeights loss;
  std::uint64_t seed = 0;
  std::uint64_t checkpoint_interval = 10000;
  std::size_t image_size = 96;
  // CSIW file with phi.conv{1..4}.{weight,bias}; empty selects the seeded default.
  std::string feature_weights;

  void validate() const;
};

struct PipelineConfig {
  TrainConfig train;
  LineSketchConfig line;
  StylizeConfig stylize;
  MetricConfig metrics;
  // Share of identities preprocess assigns to the test split.
  double test_fraction = 0.0;
  // Synthetic photos rendered by `preprocess --toy`.
  std::size_t toy_images = 8;

  void validate() const;
};

// Desk-scale profile: 32 x 32 crops, 8 synthetic identities, 2000 iterations.
void apply_toy_profile(PipelineConfig& cfg);

nlohmann::json to_json(const PipelineConfig& cfg);
// Overrides defaults with the keys present in `j`; unknown keys are rejected.
// Keys present in `j` override `base`; unknown keys are rejected.
PipelineConfig config_from_json(const nlohmann::json& j, const PipelineConfig& base = {});
PipelineConfig load_config(const std::filesystem::path& path, const PipelineConfig& base = {});

}  // namespace sketchinv
