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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sketchinv/preprocess.hpp"

namespace sketchinv {

// One JSON line: {"path", "landmarks": [[x, y] x 5], "identity"} plus the
// fields the pipeline adds as it runs: "split", "aligned", "sketches" and
// "inverted" (both keyed by style name).
struct ManifestRecord {
  std::string path;
  std::optional<LandmarkSet> landmarks;
  std::string identity;
  std::string split = "train";
  std::string aligned;
  std::map<std::string, std::string> sketches;
  std::map<std::string, std::string> inverted;
};

struct DatasetManifest {
  // Relative paths in records resolve against this directory.
  std::filesystem::path base_dir;
  std::vector<ManifestRecord> records;

  std::filesystem::path resolve(const std::string& path) const;
  // Path relative to base_dir when possible, else absolute.
  std::string relative(const std::filesystem::path& path) const;
  // Same records with every path re-expressed relative to `new_base`.
  DatasetManifest rebased(const std::filesystem::path& new_base) const;
};

ManifestRecord parse_record(const std::string& line);
std::string format_record(const ManifestRecord& record);

DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

// Throws ValidationError if an identity appears in more than one split.
void check_split_hygiene(const DatasetManifest& manifest);

// "train", "test" or "all".
bool in_split(const ManifestRecord& record, const std::string& split);

}  // namespace sketchinv
