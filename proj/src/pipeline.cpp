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

#include "sketchinv/pipeline.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "sketchinv/error.hpp"
#include "sketchinv/pca.hpp"
#include "sketchinv/random.hpp"
#include "sketchinv/toy_data.hpp"

namespace sketchinv {
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSplitStream = 11;
constexpr std::uint64_t kInitStream = 12;
constexpr std::uint64_t kShuffleStream = 13;

void say(const LogFn& log, const std::string& msg) {
  if (log) log(msg);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

// Output file stems; disambiguated by record index when two sources share one.
std::vector<std::string> record_stems(const DatasetManifest& manifest) {
  std::vector<std::string> stems;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    const auto& r = manifest.records[i];
    std::string stem = fs::path(r.path.empty() ? r.aligned : r.path).stem().string();
    if (!seen.insert(stem).second) {
      stem += "_" + std::to_string(i);
      seen.insert(stem);
    }
    stems.push_back(stem);
  }
  return stems;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string loss_row(const LossRecord& r) {
  return std::to_string(r.iteration) + "," + format_double(r.total) + "," + format_double(r.pixel) + "," +
         format_double(r.feature) + "," + format_double(r.tv) + "\n";
}

FeatureExtractor make_extractor(const TrainConfig& cfg) {
  if (cfg.loss.feature <= 0.0) return FeatureExtractor::identity();
  if (!cfg.feature_weights.empty()) return FeatureExtractor::from_file(read_tensor_file(cfg.feature_weights));
  return FeatureExtractor::seeded();
}

ImageU8 load_sized(const fs::path& path, std::size_t size, std::size_t channels, const std::string& what) {
  ImageU8 img = read_png(path);
  if (img.width != size || img.height != size) {
    throw ValidationError(what + " " + path.string() + " is " + std::to_string(img.width) + "x" +
                          std::to_string(img.height) + ", expected " + std::to_string(size) + "x" +
                          std::to_string(size));
  }
  if (img.channels != channels) {
    throw ValidationError(what + " " + path.string() + " has " + std::to_string(img.channels) + " channels, expected " +
                          std::to_string(channels));
  }
  return img;
}

SketchStyle checkpoint_style(const nlohmann::json& meta) {
  return meta.contains("style") ? parse_style(meta.at("style").get<std::string>()) : SketchStyle::kLine;
}

void require_sketch_channels(const CsiNetwork& net, const ImageU8& sketch, const fs::path& path) {
  if (sketch.channels != net.in_channels()) {
    throw ValidationError("sketch " + path.string() + " has " + std::to_string(sketch.channels) +
                          " channels but the checkpoint expects " + std::to_string(net.in_channels()));
  }
}

}  // namespace

DatasetManifest run_preprocess(const DatasetManifest& manifest, const PipelineConfig& cfg, const fs::path& out_dir,
                               SkipList& skips, const LogFn& log) {
  cfg.validate();
  const std::size_t size = cfg.train.image_size;
  fs::create_directories(out_dir / "aligned");
  DatasetManifest out = manifest;
  const auto stems = record_stems(manifest);
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    auto& r = out.records[i];
    if (!r.landmarks || r.path.empty()) continue;
    const fs::path dst = out_dir / "aligned" / (stems[i] + ".png");
    try {
      write_png(dst, align_crop(read_png(manifest.resolve(r.path)), *r.landmarks, size));
      r.aligned = out.relative(dst);
      ++skips.processed;
    } catch (const std::exception& e) {
      skips.skipped.push_back(r.path + ": " + e.what());
      say(log, "skipped " + r.path + ": " + e.what());
    }
  }

  if (cfg.test_fraction > 0.0) {
    std::vector<std::string> ids;
    for (const auto& r : out.records) ids.push_back(r.identity);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    Rng rng(derive_seed(cfg.train.seed, kSplitStream));
    for (std::size_t i = ids.size(); i > 1; --i) std::swap(ids[i - 1], ids[rng.below(i)]);
    const auto n_test = static_cast<std::size_t>(std::llround(cfg.test_fraction * static_cast<double>(ids.size())));
    const std::set<std::string> test(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_test));
    for (auto& r : out.records) r.split = test.count(r.identity) ? "test" : "train";
  }
  check_split_hygiene(out);
  return out;
}

ImageU8 make_sketch(const ImageU8& aligned, SketchStyle style, const PipelineConfig& cfg) {
  const double scale = static_cast<double>(aligned.width) / CropGeometry::kReferenceSize;
  if (style == SketchStyle::kLine) {
    LineSketchConfig line = cfg.line;
    line.blur_sigma *= scale;
    return line_sketch(aligned, line);
  }
  StylizeConfig sty = cfg.stylize;
  sty.sigma_s *= scale;
  sty.grayscale = style == SketchStyle::kGrayscale;
  return stylize(aligned, sty);
}

DatasetManifest run_generate(const DatasetManifest& manifest, const std::vector<SketchStyle>& styles,
                             const PipelineConfig& cfg, const fs::path& out_dir, SkipList& skips, const LogFn& log) {
  cfg.validate();
  DatasetManifest out = manifest;
  const auto stems = record_stems(manifest);
  for (SketchStyle style : styles) fs::create_directories(out_dir / "sketches" / to_string(style));
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    auto& r = out.records[i];
    const std::string label = r.path.empty() ? r.aligned : r.path;
    try {
      ImageU8 photo;
      if (!r.aligned.empty()) {
        photo = read_png(manifest.resolve(r.aligned));
      } else if (r.landmarks) {
        fs::create_directories(out_dir / "aligned");
        const fs::path dst = out_dir / "aligned" / (stems[i] + ".png");
        photo = align_crop(read_png(manifest.resolve(r.path)), *r.landmarks, cfg.train.image_size);
        write_png(dst, photo);
        r.aligned = out.relative(dst);
      } else {
        throw ValidationError("record has neither an aligned photo nor landmarks");
      }
      for (SketchStyle style : styles) {
        const fs::path dst = out_dir / "sketches" / to_string(style) / (stems[i] + ".png");
        write_png(dst, make_sketch(photo, style, cfg));
        r.sketches[to_string(style)] = out.relative(dst);
      }
      ++skips.processed;
    } catch (const std::exception& e) {
      skips.skipped.push_back(label + ": " + e.what());
      say(log, "skipped " + label + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::size_t> minibatch_indices(std::uint64_t iteration, std::size_t batch, std::size_t count,
                                           std::uint64_t seed) {
  if (iteration == 0 || count == 0) throw ValidationError("minibatch schedule needs iteration >= 1 and a non-empty set");
  std::vector<std::size_t> out;
  std::uint64_t cached_epoch = ~std::uint64_t{0};
  std::vector<std::size_t> perm(count);
  for (std::size_t j = 0; j < batch; ++j) {
    const std::uint64_t q = (iteration - 1) * batch + j;
    const std::uint64_t epoch = q / count;
    if (epoch != cached_epoch) {
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      Rng rng(derive_seed(derive_seed(seed, kShuffleStream), epoch));
      for (std::size_t i = count; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
      cached_epoch = epoch;
    }
    out.push_back(perm[q % count]);
  }
  return out;
}

TrainResult run_train(const DatasetManifest& manifest, const PipelineConfig& cfg, const fs::path& out_dir,
                      const std::optional<fs::path>& resume, const LogFn& log) {
  cfg.validate();
  const TrainConfig& tc = cfg.train;
  const std::string style = to_string(tc.style);
  const std::size_t in_ch = style_channels(tc.style);
  const std::size_t size = tc.image_size;

  struct Pair {
    fs::path sketch, photo;
  };
  std::vector<Pair> pairs;
  for (const auto& r : manifest.records) {
    if (!in_split(r, "train")) continue;
    auto it = r.sketches.find(style);
    if (it == r.sketches.end() || r.aligned.empty()) {
      throw ValidationError("training record " + r.identity + " lacks an aligned photo or a " + style + " sketch");
    }
    pairs.push_back({manifest.resolve(it->second), manifest.resolve(r.aligned)});
  }
  if (pairs.empty()) throw ValidationError("manifest has no training pairs");

  std::uint64_t start = 0;
  CsiNetwork net = CsiNetwork::build(in_ch, derive_seed(tc.seed, kInitStream));
  if (resume) {
    Checkpoint ck = load_checkpoint(*resume);
    if (checkpoint_style(ck.metadata) != tc.style) {
      throw ValidationError("checkpoint was trained on " + to_string(checkpoint_style(ck.metadata)) +
                            " sketches, config asks for " + style);
    }
    if (ck.network.in_channels() != in_ch) {
      throw ValidationError("checkpoint expects " + std::to_string(ck.network.in_channels()) +
                            " input channels, style " + style + " has " + std::to_string(in_ch));
    }
    if (ck.metadata.value("image_size", size) != size) {
      throw ValidationError("checkpoint image size differs from the configured image size");
    }
    start = ck.metadata.value("iteration", std::uint64_t{0});
    net = std::move(ck.network);
  }
  if (start >= tc.iterations) throw ValidationError("checkpoint is already at or past the configured iterations");

  const FeatureExtractor phi = make_extractor(tc);
  fs::create_directories(out_dir);
  const fs::path loss_path = out_dir / "loss.csv";
  std::ofstream loss_out(loss_path, resume ? std::ios::app : std::ios::trunc);
  if (!loss_out) throw IoError("cannot write " + loss_path.string());
  if (!resume) loss_out << "iteration,total,pixel,feature,tv\n";

  auto metadata = [&](std::uint64_t it) {
    return nlohmann::json{{"iteration", it},
                          {"seed", tc.seed},
                          {"style", style},
                          {"image_size", size},
                          {"loss", {{"lambda_p", tc.loss.pixel}, {"lambda_f", tc.loss.feature}, {"lambda_tv", tc.loss.tv}}},
                          {"adam",
                           {{"alpha", tc.adam.alpha},
                            {"beta1", tc.adam.beta1},
                            {"beta2", tc.adam.beta2},
                            {"epsilon", tc.adam.epsilon}}}};
  };

  TrainResult result{std::move(net), {}};
  CsiNetwork& model = result.network;
  const auto params = model.parameters();
  const std::size_t batch = tc.minibatch;
  for (std::uint64_t it = start + 1; it <= tc.iterations; ++it) {
    Tensor x(Shape{batch, in_ch, size, size});
    Tensor t(Shape{batch, 3, size, size});
    const auto idx = minibatch_indices(it, batch, pairs.size(), tc.seed);
    for (std::size_t j = 0; j < batch; ++j) {
      write_to_tensor(load_sized(pairs[idx[j]].sketch, size, in_ch, "sketch"), x, j);
      write_to_tensor(load_sized(pairs[idx[j]].photo, size, 3, "photo"), t, j);
    }
    for (auto* p : params) p->zero_grad();
    const Var<float> y = model.forward(Var<float>::input(std::move(x)), Mode::kTrain);
    const auto terms = total_loss(Var<float>::constant(std::move(t)), y, phi, tc.loss);
    backward(terms.total);
    adam_step<float>(params, tc.adam);

    LossRecord rec;
    rec.iteration = it;
    rec.total = terms.total.value()[0];
    rec.pixel = terms.pixel.valid() ? terms.pixel.value()[0] : std::nan("");
    rec.feature = terms.feature.valid() ? terms.feature.value()[0] : std::nan("");
    rec.tv = terms.tv.valid() ? terms.tv.value()[0] : std::nan("");
    if (!std::isfinite(rec.total)) throw ValidationError("training diverged at iteration " + std::to_string(it));
    loss_out << loss_row(rec);
    result.log.push_back(rec);

    if (it % tc.checkpoint_interval == 0) {
      char name[48];
      std::snprintf(name, sizeof name, "checkpoint_%06" PRIu64 ".csiw", it);
      save_checkpoint(out_dir / name, model, metadata(it));
      say(log, "iteration " + std::to_string(it) + " total " + format_double(rec.total) + " pixel " +
                   format_double(rec.pixel));
    }
  }
  loss_out.flush();
  if (!loss_out) throw IoError("failed writing " + loss_path.string());
  save_checkpoint(out_dir / "final.csiw", model, metadata(tc.iterations));
  return result;
}

ImageU8 invert_sketch(CsiNetwork& net, const ImageU8& sketch) {
  if (sketch.channels != net.in_channels()) {
    throw ValidationError("sketch has " + std::to_string(sketch.channels) + " channels, network expects " +
                          std::to_string(net.in_channels()));
  }
  Tensor x(Shape{1, sketch.channels, sketch.height, sketch.width});
  write_to_tensor(sketch, x, 0);
  const Var<float> y = net.forward(Var<float>::constant(std::move(x)), Mode::kInfer);
  return quantize(read_from_tensor(y.value(), 0));
}

DatasetManifest run_invert(const DatasetManifest& manifest, const fs::path& checkpoint, SketchStyle style,
                           const std::string& split, const fs::path& out_dir, const LogFn& log) {
  Checkpoint ck = load_checkpoint(checkpoint);
  if (ck.network.in_channels() != style_channels(style)) {
    throw ValidationError("checkpoint expects " + std::to_string(ck.network.in_channels()) +
                          " input channels, " + to_string(style) + " sketches have " +
                          std::to_string(style_channels(style)));
  }
  const std::string name = to_string(style);
  const fs::path dir = out_dir / "inverted" / name;
  fs::create_directories(dir);
  DatasetManifest out = manifest;
  const auto stems = record_stems(manifest);
  std::size_t count = 0;
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    auto& r = out.records[i];
    if (!in_split(r, split)) continue;
    auto it = r.sketches.find(name);
    if (it == r.sketches.end()) continue;
    const fs::path src = manifest.resolve(it->second);
    const ImageU8 sketch = read_png(src);
    require_sketch_channels(ck.network, sketch, src);
    const fs::path dst = dir / (stems[i] + ".png");
    write_png(dst, invert_sketch(ck.network, sketch));
    r.inverted[name] = out.relative(dst);
    ++count;
  }
  say(log, "inverted " + std::to_string(count) + " " + name + " sketches");
  return out;
}

QualityReport run_evaluate(const DatasetManifest& manifest, SketchStyle style, const std::string& split,
                           const MetricConfig& cfg, const fs::path& out_dir, SkipList& skips, const LogFn& log) {
  cfg.validate();
  const std::string name = to_string(style);
  const auto stems = record_stems(manifest);
  std::vector<ImageQuality> rows;
  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    const auto& r = manifest.records[i];
    if (!in_split(r, split)) continue;
    auto it = r.inverted.find(name);
    try {
      if (it == r.inverted.end()) throw ValidationError("no inverted " + name + " image");
      if (r.aligned.empty()) throw ValidationError("no aligned photo");
      const ImageU8 truth = read_png(manifest.resolve(r.aligned));
      const ImageU8 inv = read_png(manifest.resolve(it->second));
      rows.push_back(evaluate_pair(stems[i], truth, inv, cfg));
      ++skips.processed;
    } catch (const std::exception& e) {
      skips.skipped.push_back(stems[i] + ": " + e.what());
      say(log, "missing pair " + stems[i] + ": " + e.what());
    }
  }
  if (rows.empty()) throw ValidationError("no image pairs to evaluate");
  QualityReport report = summarize(std::move(rows), cfg);
  fs::create_directories(out_dir);
  write_text(out_dir / "report.csv", report_csv(report));
  nlohmann::json j = report_json(report);
  j["style"] = name;
  j["split"] = split;
  j["missing"] = skips.skipped;
  write_text(out_dir / "report.json", j.dump(2) + "\n");
  return report;
}

IdentificationReport run_identify(const DatasetManifest& manifest, SketchStyle style, const std::string& split,
                                  const std::optional<fs::path>& checkpoint, const fs::path& out_dir,
                                  const LogFn& log) {
  const std::string name = to_string(style);
  const auto stems = record_stems(manifest);
  Gallery gallery;
  for (const auto& r : manifest.records) {
    if (!in_split(r, split) || r.aligned.empty()) continue;
    gallery.add(r.identity, read_png(manifest.resolve(r.aligned)));
  }
  if (gallery.empty()) throw ValidationError("identification gallery for split " + split + " is empty");

  std::optional<CsiNetwork> net;
  if (checkpoint) {
    Checkpoint ck = load_checkpoint(*checkpoint);
    if (ck.network.in_channels() != style_channels(style)) {
      throw ValidationError("checkpoint input channels do not match " + name + " sketches");
    }
    net = std::move(ck.network);
  }

  std::vector<QueryOutcome> sketch_q, inverted_q;
  auto outcome = [&](const std::string& query, const ImageU8& img, const std::string& truth) {
    const Match m = identify_rank1(img.channels == 1 ? replicate_to_rgb(img) : img, gallery);
    return QueryOutcome{query, m.predicted, truth, m.rank_of(gallery, truth)};
  };
  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    const auto& r = manifest.records[i];
    if (!in_split(r, split)) continue;
    auto sk = r.sketches.find(name);
    if (sk == r.sketches.end()) continue;
    const fs::path sk_path = manifest.resolve(sk->second);
    const ImageU8 sketch = read_png(sk_path);
    sketch_q.push_back(outcome(stems[i], sketch, r.identity));
    if (net) {
      require_sketch_channels(*net, sketch, sk_path);
      inverted_q.push_back(outcome(stems[i], invert_sketch(*net, sketch), r.identity));
    } else if (auto inv = r.inverted.find(name); inv != r.inverted.end()) {
      inverted_q.push_back(outcome(stems[i], read_png(manifest.resolve(inv->second)), r.identity));
    }
  }
  if (sketch_q.empty()) throw ValidationError("no " + name + " sketch queries in split " + split);

  IdentificationReport report;
  report.sketch = summarize_identification(std::move(sketch_q));
  if (!inverted_q.empty()) report.inverted = summarize_identification(std::move(inverted_q));
  if (report.inverted && report.inverted->queries.size() == report.sketch->queries.size()) {
    report.p_value = compare_conditions(report.inverted->correctness(), report.sketch->correctness());
  }

  fs::create_directories(out_dir);
  nlohmann::json j{{"style", name}, {"split", split}, {"gallery_size", gallery.size()}};
  auto emit = [&](const char* cond, const IdentificationResult& res) {
    write_text(out_dir / (std::string("identify_") + cond + ".csv"), identification_csv(res));
    j[cond] = {{"accuracy", res.accuracy}, {"queries", res.queries.size()}};
    say(log, std::string(cond) + " rank-1 accuracy " + format_double(res.accuracy));
  };
  emit("sketch", *report.sketch);
  if (report.inverted) emit("inverted", *report.inverted);
  j["p_value"] = report.p_value ? nlohmann::json(*report.p_value) : nlohmann::json(nullptr);
  write_text(out_dir / "identify.json", j.dump(2) + "\n");
  return report;
}

void run_visualize(const fs::path& checkpoint, const fs::path& sketch_path, const fs::path& out_dir) {
  Checkpoint ck = load_checkpoint(checkpoint);
  const ImageU8 sketch = read_png(sketch_path);
  require_sketch_channels(ck.network, sketch, sketch_path);
  Tensor x(Shape{1, sketch.channels, sketch.height, sketch.width});
  write_to_tensor(sketch, x, 0);
  std::vector<Tensor> acts;
  ck.network.forward(Var<float>::constant(std::move(x)), Mode::kInfer, &acts);
  fs::create_directories(out_dir);
  for (std::size_t i = 0; i < acts.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "layer_%02zu.png", i + 1);
    write_png(out_dir / name, visualize_feature_map(acts[i], 0));
  }
}

ToyRun run_toy_pipeline(const PipelineConfig& cfg, const fs::path& out_dir, const LogFn& log) {
  cfg.validate();
  const SketchStyle style = cfg.train.style;
  SkipList skips;
  DatasetManifest m = write_toy_corpus(out_dir / "raw", cfg.toy_images, cfg.train.seed);
  m = run_preprocess(m, cfg, out_dir, skips, log);
  m = run_generate(m, {style}, cfg, out_dir, skips, log);
  if (!skips.skipped.empty()) throw ValidationError("toy corpus generation skipped records");

  TrainResult trained = run_train(m, cfg, out_dir / "train", std::nullopt, log);
  ToyRun run{{}, std::move(trained), {}, {}};
  m = run_invert(m, out_dir / "train" / "final.csiw", style, "train", out_dir, log);
  SkipList eval_skips;
  run.report = run_evaluate(m, style, "train", cfg.metrics, out_dir / "eval", eval_skips, log);
  run.identification = run_identify(m, style, "train", std::nullopt, out_dir / "identify", log);
  run.manifest = m.rebased(out_dir);
  write_manifest(out_dir / "manifest.jsonl", run.manifest);
  return run;
}

}  // namespace sketchinv
