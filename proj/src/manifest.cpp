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

#include "sketchinv/manifest.hpp"

#include <fstream>
#include <json.hpp>

#include "sketchinv/error.hpp"

namespace sketchinv {

std::filesystem::path DatasetManifest::resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  return p.is_absolute() ? p : base_dir / p;
}

std::string DatasetManifest::relative(const std::filesystem::path& path) const {
  const auto abs = std::filesystem::weakly_canonical(std::filesystem::absolute(path));
  const auto base = std::filesystem::weakly_canonical(std::filesystem::absolute(base_dir));
  const auto rel = abs.lexically_relative(base);
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return abs.generic_string();
}

DatasetManifest DatasetManifest::rebased(const std::filesystem::path& new_base) const {
  DatasetManifest out;
  out.base_dir = new_base;
  auto move = [&](std::string& p) {
    if (!p.empty()) p = out.relative(resolve(p));
  };
  for (ManifestRecord r : records) {
    move(r.path);
    move(r.aligned);
    for (auto& [style, p] : r.sketches) move(p);
    for (auto& [style, p] : r.inverted) move(p);
    out.records.push_back(std::move(r));
  }
  return out;
}

ManifestRecord parse_record(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("manifest line is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("manifest line is not a JSON object");
  ManifestRecord r;
  try {
    r.path = j.value("path", "");
    r.identity = j.at("identity").get<std::string>();
    r.split = j.value("split", "train");
    r.aligned = j.value("aligned", "");
    if (j.contains("landmarks")) {
      const auto& lm = j.at("landmarks");
      if (!lm.is_array() || lm.size() != 5) throw ValidationError("landmarks must hold five [x, y] pairs");
      std::array<Point, 5> pts;
      for (std::size_t i = 0; i < 5; ++i) {
        if (!lm[i].is_array() || lm[i].size() != 2) throw ValidationError("landmarks must hold five [x, y] pairs");
        pts[i] = {lm[i][0].get<double>(), lm[i][1].get<double>()};
      }
      r.landmarks = LandmarkSet::from_array(pts);
    }
    if (j.contains("sketches")) r.sketches = j.at("sketches").get<std::map<std::string, std::string>>();
    if (j.contains("inverted")) r.inverted = j.at("inverted").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed manifest record: ") + e.what());
  }
  if (r.split != "train" && r.split != "test") {
    throw ValidationError("manifest split must be train or test, got '" + r.split + "'");
  }
  if (r.path.empty() && r.aligned.empty()) throw ValidationError("manifest record has neither path nor aligned");
  return r;
}

std::string format_record(const ManifestRecord& r) {
  nlohmann::json j;
  if (!r.path.empty()) j["path"] = r.path;
  j["identity"] = r.identity;
  j["split"] = r.split;
  if (r.landmarks) {
    nlohmann::json lm = nlohmann::json::array();
    for (const Point& p : r.landmarks->to_array()) lm.push_back({p.x, p.y});
    j["landmarks"] = lm;
  }
  if (!r.aligned.empty()) j["aligned"] = r.aligned;
  if (!r.sketches.empty()) j["sketches"] = r.sketches;
  if (!r.inverted.empty()) j["inverted"] = r.inverted;
  return j.dump();
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  DatasetManifest m;
  m.base_dir = std::filesystem::absolute(path).parent_path();
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      m.records.push_back(parse_record(line));
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return m;
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write manifest " + path.string());
  for (const auto& r : manifest.records) out << format_record(r) << '\n';
  if (!out) throw IoError("failed writing manifest " + path.string());
}

void check_split_hygiene(const DatasetManifest& manifest) {
  std::map<std::string, std::string> seen;
  for (const auto& r : manifest.records) {
    auto [it, inserted] = seen.emplace(r.identity, r.split);
    if (!inserted && it->second != r.split) {
      throw ValidationError("identity " + r.identity + " appears in both train and test splits");
    }
  }
}

bool in_split(const ManifestRecord& record, const std::string& split) {
  return split == "all" || record.split == split;
}

}  // namespace sketchinv
