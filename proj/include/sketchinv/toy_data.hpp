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

#include "sketchinv/manifest.hpp"

namespace sketchinv {

struct ToyFace {
  ImageU8 photo;
  LandmarkSet landmarks;
};

// Renders a synthetic upright face (hair, skin, eyes, nose, mouth on a
// background) with its five landmarks. Fully determined by the seed.
ToyFace render_toy_face(std::uint64_t seed, std::size_t size = 128);

// Writes `count` toy faces as <dir>/toyNN.png, one identity each, and
// returns their manifest (base_dir = dir, split = train).
DatasetManifest write_toy_corpus(const std::filesystem::path& dir, std::size_t count, std::uint64_t seed);

}  // namespace sketchinv
