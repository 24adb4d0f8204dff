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

#include "sketchinv/config.hpp"

#include <fstream>
#include <set>

#include "sketchinv/error.hpp"

namespace sketchinv {

void TrainConfig::validate() const {
  if (iterations == 0) throw ValidationError("train.iterations must be positive");
  if (minibatch == 0) throw ValidationError("train.minibatch must be positive");
  if (checkpoint_interval == 0) throw ValidationError("train.checkpoint_interval must be positive");
  if (image_size == 0 || image_size % 4 != 0) throw ValidationError("train.image_size must be a positive multiple of 4");
  adam.validate();
  loss.validate();
}

void PipelineConfig::validate() const {
  train.validate();
  line.validate();
  stylize.validate();
  metrics.validate();
  if (!(test_fraction >= 0.0 && test_fraction <= 1.0)) throw ValidationError("test_fraction must lie in [0, 1]");
  if (toy_images < 2) throw ValidationError("toy_images must be >= 2");
}

void apply_toy_profile(PipelineConfig& cfg) {
  cfg.train.image_size = 32;
  cfg.train.iterations = 2000;
  cfg.train.checkpoint_interval = 500;
  cfg.train.style = SketchStyle::kColor;
  cfg.toy_images = 8;
  cfg.test_fraction = 0.0;
}

nlohmann::json to_json(const PipelineConfig& cfg) {
  const auto& t = cfg.train;
  return {
      {"train",
       {{"style", to_string(t.style)},
        {"iterations", t.iterations},
        {"minibatch", t.minibatch},
        {"adam", {{"alpha", t.adam.alpha}, {"beta1", t.adam.beta1}, {"beta2", t.adam.beta2}, {"epsilon", t.adam.epsilon}}},
        {"loss", {{"lambda_p", t.loss.pixel}, {"lambda_f", t.loss.feature}, {"lambda_tv", t.loss.tv}}},
        {"seed", t.seed},
        {"checkpoint_interval", t.checkpoint_interval},
        {"image_size", t.image_size},
        {"feature_weights", t.feature_weights}}},
      {"line_sketch", {{"blur_sigma", cfg.line.blur_sigma}, {"luma", cfg.line.luma}}},
      {"stylize",
       {{"sigma_s", cfg.stylize.sigma_s},
        {"sigma_r", cfg.stylize.sigma_r},
        {"iterations", cfg.stylize.iterations},
        {"edge_gain", cfg.stylize.edge_gain}}},
      {"metrics",
       {{"dynamic_range", cfg.metrics.dynamic_range},
        {"k1", cfg.metrics.k1},
        {"k2", cfg.metrics.k2},
        {"window", cfg.metrics.window},
        {"window_sigma", cfg.metrics.window_sigma},
        {"bootstrap_resamples", cfg.metrics.bootstrap_resamples},
        {"bootstrap_seed", cfg.metrics.bootstrap_seed},
        {"psnr_cap", cfg.metrics.psnr_cap}}},
      {"test_fraction", cfg.test_fraction},
      {"toy_images", cfg.toy_images},
  };
}

namespace {

// Copies `key` from `src` into `dst` when present; records the key as used.
class Reader {
 public:
  Reader(const nlohmann::json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ValidationError("config section " + where_ + " must be an object");
  }
  ~Reader() noexcept(false) {
    if (std::uncaught_exceptions()) return;
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) throw ValidationError("unknown config key " + where_ + key);
    }
  }

  template <typename V>
  void get(const char* key, V& dst) {
    used_.insert(key);
    if (!j_.contains(key)) return;
    try {
      dst = j_.at(key).get<V>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("config key " + where_ + key + ": " + e.what());
    }
  }

  const nlohmann::json* section(const char* key) {
    used_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

 private:
  const nlohmann::json& j_;
  std::string where_;
  std::set<std::string> used_;
};

}  // namespace

PipelineConfig config_from_json(const nlohmann::json& j, const PipelineConfig& base) {
  PipelineConfig cfg = base;
  {
    Reader root(j, "");
    if (const auto* tj = root.section("train")) {
      Reader r(*tj, "train.");
      std::string style = to_string(cfg.train.style);
      r.get("style", style);
      cfg.train.style = parse_style(style);
      r.get("iterations", cfg.train.iterations);
      r.get("minibatch", cfg.train.minibatch);
      r.get("seed", cfg.train.seed);
      r.get("checkpoint_interval", cfg.train.checkpoint_interval);
      r.get("image_size", cfg.train.image_size);
      r.get("feature_weights", cfg.train.feature_weights);
      if (const auto* aj = r.section("adam")) {
        Reader a(*aj, "train.adam.");
        a.get("alpha", cfg.train.adam.alpha);
        a.get("beta1", cfg.train.adam.beta1);
        a.get("beta2", cfg.train.adam.beta2);
        a.get("epsilon", cfg.train.adam.epsilon);
      }
      if (const auto* lj = r.section("loss")) {
        Reader l(*lj, "train.loss.");
        l.get("lambda_p", cfg.train.loss.pixel);
        l.get("lambda_f", cfg.train.loss.feature);
        l.get("lambda_tv", cfg.train.loss.tv);
      }
    }
    if (const auto* lj = root.section("line_sketch")) {
      Reader r(*lj, "line_sketch.");
      r.get("blur_sigma", cfg.line.blur_sigma);
      r.get("luma", cfg.line.luma);
    }
    if (const auto* sj = root.section("stylize")) {
      Reader r(*sj, "stylize.");
      r.get("sigma_s", cfg.stylize.sigma_s);
      r.get("sigma_r", cfg.stylize.sigma_r);
      r.get("iterations", cfg.stylize.iterations);
      r.get("edge_gain", cfg.stylize.edge_gain);
    }
    if (const auto* mj = root.section("metrics")) {
      Reader r(*mj, "metrics.");
      r.get("dynamic_range", cfg.metrics.dynamic_range);
      r.get("k1", cfg.metrics.k1);
      r.get("k2", cfg.metrics.k2);
      r.get("window", cfg.metrics.window);
      r.get("window_sigma", cfg.metrics.window_sigma);
      r.get("bootstrap_resamples", cfg.metrics.bootstrap_resamples);
      r.get("bootstrap_seed", cfg.metrics.bootstrap_seed);
      r.get("psnr_cap", cfg.metrics.psnr_cap);
    }
    root.get("test_fraction", cfg.test_fraction);
    root.get("toy_images", cfg.toy_images);
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path, const PipelineConfig& base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j, base);
}

}  // namespace sketchinv
