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

#include "sketchinv/sketch.hpp"
#include "sketchinv/toy_data.hpp"

namespace sketchinv::testing {

// 96x96 probe photo shared by the sketch goldens.
inline ImageU8 probe_photo() { return render_toy_face(7, 96).photo; }

// FNV-1a hashes of the probe's sketches, frozen at first generation.
inline constexpr std::uint64_t kGoldenLine = 18383667645774445984ULL;
inline constexpr std::uint64_t kGoldenGrayscale = 18344559309146990849ULL;
inline constexpr std::uint64_t kGoldenColor = 9808677847742320252ULL;

}  // namespace sketchinv::testing
