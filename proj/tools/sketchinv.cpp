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

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sketchinv/config.hpp"
#include "sketchinv/error.hpp"
#include "sketchinv/pipeline.hpp"
#include "sketchinv/toy_data.hpp"

namespace fs = std::filesystem;
using namespace sketchinv;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  bool toy = false;
};

PipelineConfig resolve_config(const Globals& g) {
  PipelineConfig cfg;
  if (g.toy) apply_toy_profile(cfg);
  if (!g.config.empty()) cfg = load_config(g.config, cfg);
  if (g.seed) cfg.train.seed = *g.seed;
  cfg.validate();
  return cfg;
}

void log_line(const std::string& msg) { std::cerr << msg << '\n'; }

void report_skips(const SkipList& skips) {
  std::cerr << "processed " << skips.processed << ", skipped " << skips.skipped.size() << '\n';
  for (const auto& s : skips.skipped) std::cerr << "  skipped: " << s << '\n';
}

void save_manifest(const DatasetManifest& m, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  write_manifest(out_dir / "manifest.jsonl", m.rebased(out_dir));
  std::cerr << "wrote " << (out_dir / "manifest.jsonl").string() << '\n';
}

SketchStyle style_or_default(const std::string& name, const PipelineConfig& cfg) {
  return name.empty() ? cfg.train.style : parse_style(name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sketchinv: face sketch inversion toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON pipeline config")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "override train.seed");
  app.add_flag("--toy", g.toy, "desk-scale profile: 32x32, 8 images, 2000 iterations, color sketches");

  std::string manifest, out = ".", style, split, checkpoint, resume, sketch;
  std::vector<std::string> styles;

  auto* pre = app.add_subcommand("preprocess", "align and crop photos from landmarks");
  pre->add_option("--manifest", manifest, "JSON-lines manifest (omit with --toy to render a synthetic corpus)");
  pre->add_option("--out", out, "output directory");

  auto* gen = app.add_subcommand("generate", "render line / grayscale / color sketches");
  gen->add_option("--manifest", manifest, "JSON-lines manifest")->required();
  gen->add_option("--style", styles, "line, grayscale or color (repeatable; default: all)");
  gen->add_option("--out", out, "output directory");

  auto* train = app.add_subcommand("train", "train one inversion network");
  train->add_option("--manifest", manifest, "manifest with aligned photos and sketches")->required();
  train->add_option("--out", out, "directory for checkpoints and loss.csv");
  train->add_option("--resume", resume, "checkpoint to continue from")->check(CLI::ExistingFile);

  auto* inv = app.add_subcommand("invert", "synthesize photos from sketches");
  inv->add_option("--manifest", manifest, "manifest with sketches")->required();
  inv->add_option("--checkpoint", checkpoint, "trained network")->required()->check(CLI::ExistingFile);
  inv->add_option("--style", style, "sketch style (default: train.style)");
  inv->add_option("--split", split, "train, test or all")->default_val("test");
  inv->add_option("--out", out, "output directory");

  auto* eval = app.add_subcommand("evaluate", "PSNR / SSIM / R against aligned photos");
  eval->add_option("--manifest", manifest, "manifest with inverted images")->required();
  eval->add_option("--style", style, "sketch style (default: train.style)");
  eval->add_option("--split", split, "train, test or all")->default_val("test");
  eval->add_option("--out", out, "directory for report.csv / report.json");

  auto* ident = app.add_subcommand("identify", "rank-1 identification of sketches and inverted sketches");
  ident->add_option("--manifest", manifest, "manifest with aligned photos and sketches")->required();
  ident->add_option("--checkpoint", checkpoint, "invert in memory instead of reading inverted images")
      ->check(CLI::ExistingFile);
  ident->add_option("--style", style, "sketch style (default: train.style)");
  ident->add_option("--split", split, "train, test or all")->default_val("test");
  ident->add_option("--out", out, "output directory");

  auto* vis = app.add_subcommand("visualize", "per-layer PCA images of the feature maps");
  vis->add_option("--checkpoint", checkpoint, "trained network")->required()->check(CLI::ExistingFile);
  vis->add_option("--sketch", sketch, "sketch PNG")->required()->check(CLI::ExistingFile);
  vis->add_option("--out", out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const PipelineConfig cfg = resolve_config(g);
    const fs::path out_dir(out);
    const std::string split_name = split.empty() ? "test" : split;
    if (split_name != "train" && split_name != "test" && split_name != "all") {
      throw ValidationError("--split must be train, test or all");
    }

    if (*pre) {
      DatasetManifest m;
      if (!manifest.empty()) {
        m = read_manifest(manifest);
      } else if (g.toy) {
        m = write_toy_corpus(out_dir / "raw", cfg.toy_images, cfg.train.seed);
      } else {
        throw ValidationError("preprocess needs --manifest (or --toy for a synthetic corpus)");
      }
      SkipList skips;
      m = run_preprocess(m, cfg, out_dir, skips, log_line);
      report_skips(skips);
      save_manifest(m, out_dir);
    } else if (*gen) {
      std::vector<SketchStyle> list;
      for (const auto& s : styles) list.push_back(parse_style(s));
      if (list.empty()) list = {SketchStyle::kLine, SketchStyle::kGrayscale, SketchStyle::kColor};
      SkipList skips;
      const DatasetManifest m = run_generate(read_manifest(manifest), list, cfg, out_dir, skips, log_line);
      report_skips(skips);
      save_manifest(m, out_dir);
    } else if (*train) {
      const auto result = run_train(read_manifest(manifest), cfg, out_dir,
                                    resume.empty() ? std::nullopt : std::optional<fs::path>(resume), log_line);
      if (!result.log.empty()) {
        std::cerr << "final pixel loss " << result.log.back().pixel << " (iteration 1 of this run: "
                  << result.log.front().pixel << ")\n";
      }
    } else if (*inv) {
      const DatasetManifest m =
          run_invert(read_manifest(manifest), checkpoint, style_or_default(style, cfg), split_name, out_dir, log_line);
      save_manifest(m, out_dir);
    } else if (*eval) {
      SkipList skips;
      const QualityReport r =
          run_evaluate(read_manifest(manifest), style_or_default(style, cfg), split_name, cfg.metrics, out_dir, skips,
                       log_line);
      report_skips(skips);
      std::cout << report_csv(r);
    } else if (*ident) {
      const auto r = run_identify(read_manifest(manifest), style_or_default(style, cfg), split_name,
                                  checkpoint.empty() ? std::nullopt : std::optional<fs::path>(checkpoint), out_dir,
                                  log_line);
      std::cout << "sketch accuracy " << r.sketch->accuracy << '\n';
      if (r.inverted) std::cout << "inverted accuracy " << r.inverted->accuracy << '\n';
      if (r.p_value) std::cout << "sign test p " << *r.p_value << '\n';
    } else if (*vis) {
      run_visualize(checkpoint, sketch, out_dir);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
