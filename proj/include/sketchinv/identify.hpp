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

#include <string>
#include <vector>

#include "sketchinv/image.hpp"

namespace sketchinv {

// Candidate faces as flattened pixel vectors of aligned photos.
class Gallery {
 public:
  void add(std::string identity, const ImageU8& photo);

  std::size_t size() const { return identities_.size(); }
  bool empty() const { return identities_.empty(); }
  const std::string& identity(std::size_t i) const { return identities_[i]; }
  const std::vector<float>& features(std::size_t i) const { return features_[i]; }
  std::size_t feature_length() const { return features_.empty() ? 0 : features_.front().size(); }

 private:
  std::vector<std::string> identities_;
  std::vector<std::vector<float>> features_;
};

struct RankedEntry {
  std::size_t index;
  double distance;
};

struct Match {
  std::string predicted;
  std::vector<RankedEntry> ranking;  // ascending distance, ties by gallery order

  // 1-based rank of the first entry carrying `identity`, or 0 if absent.
  std::size_t rank_of(const Gallery& gallery, const std::string& identity) const;
};

// Nearest-neighbor search by Euclidean distance in pixel space.
Match identify_rank1(const ImageU8& query, const Gallery& gallery);

struct QueryOutcome {
  std::string query;
  std::string predicted;
  std::string truth;
  std::size_t rank = 0;
  bool correct() const { return rank == 1; }
};

struct IdentificationResult {
  std::vector<QueryOutcome> queries;
  double accuracy = 0.0;

  std::vector<bool> correctness() const;
};

IdentificationResult summarize_identification(std::vector<QueryOutcome> outcomes);

// Exact two-sided sign test on the discordant pairs of two paired
// correctness vectors: p = 2 * sum_{i >= max(k, d-k)} C(d, i) / 2^d, capped at 1.
// No discordant pairs gives p = 1.
double compare_conditions(const std::vector<bool>& a, const std::vector<bool>& b);

std::string identification_csv(const IdentificationResult& result);

}  // namespace sketchinv
