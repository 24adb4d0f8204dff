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

#include "sketchinv/identify.hpp"

#include <algorithm>
#include <cmath>

#include "sketchinv/error.hpp"

namespace sketchinv {

void Gallery::add(std::string identity, const ImageU8& photo) {
  std::vector<float> f(photo.data.begin(), photo.data.end());
  if (!features_.empty() && f.size() != feature_length()) {
    throw ValidationError("gallery entry " + identity + " has " + std::to_string(f.size()) +
                          " features, expected " + std::to_string(feature_length()));
  }
  identities_.push_back(std::move(identity));
  features_.push_back(std::move(f));
}

std::size_t Match::rank_of(const Gallery& gallery, const std::string& identity) const {
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    if (gallery.identity(ranking[i].index) == identity) return i + 1;
  }
  return 0;
}

Match identify_rank1(const ImageU8& query, const Gallery& gallery) {
  if (gallery.empty()) throw ValidationError("cannot identify against an empty gallery");
  if (query.data.size() != gallery.feature_length()) {
    throw ValidationError("query has " + std::to_string(query.data.size()) + " features, gallery entries have " +
                          std::to_string(gallery.feature_length()));
  }
  Match match;
  match.ranking.reserve(gallery.size());
  for (std::size_t i = 0; i < gallery.size(); ++i) {
    const auto& f = gallery.features(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      const double d = static_cast<double>(query.data[k]) - f[k];
      acc += d * d;
    }
    match.ranking.push_back({i, std::sqrt(acc)});
  }
  std::stable_sort(match.ranking.begin(), match.ranking.end(),
                   [](const RankedEntry& a, const RankedEntry& b) { return a.distance < b.distance; });
  match.predicted = gallery.identity(match.ranking.front().index);
  return match;
}

std::vector<bool> IdentificationResult::correctness() const {
  std::vector<bool> out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back(q.correct());
  return out;
}

IdentificationResult summarize_identification(std::vector<QueryOutcome> outcomes) {
  IdentificationResult result;
  std::size_t hits = 0;
  for (const auto& q : outcomes) hits += q.correct() ? 1 : 0;
  result.accuracy = outcomes.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(outcomes.size());
  result.queries = std::move(outcomes);
  return result;
}

double compare_conditions(const std::vector<bool>& a, const std::vector<bool>& b) {
  if (a.size() != b.size()) {
    throw ValidationError("paired comparison needs equal-length correctness vectors (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
  }
  std::size_t d = 0, k = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) {
      ++d;
      if (a[i]) ++k;
    }
  }
  if (d == 0) return 1.0;
  const std::size_t lo = std::max(k, d - k);
  // Tail in log space: log C(d, i) - d log 2, summed with a running maximum.
  const double log_half = std::log(0.5);
  std::vector<double> logs;
  for (std::size_t i = lo; i <= d; ++i) {
    logs.push_back(std::lgamma(d + 1.0) - std::lgamma(i + 1.0) - std::lgamma(d - i + 1.0) + d * log_half);
  }
  const double peak = *std::max_element(logs.begin(), logs.end());
  double sum = 0.0;
  for (double l : logs) sum += std::exp(l - peak);
  return std::min(1.0, 2.0 * std::exp(peak) * sum);
}

std::string identification_csv(const IdentificationResult& result) {
  std::string out = "query,predicted,truth,rank\n";
  for (const auto& q : result.queries) {
    out += q.query + "," + q.predicted + "," + q.truth + "," + std::to_string(q.rank) + "\n";
  }
  return out;
}

}  // namespace sketchinv
