// Copyright 2026 The imgseg Authors.
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

#include "imgseg/cli.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "imgseg/baseline.h"
#include "imgseg/errors.h"
#include "imgseg/json_io.h"
#include "imgseg/segmenter.h"

namespace imgseg {

namespace fs = std::filesystem;
using nlohmann::json;

void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t)>& fn) {
  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

bool is_html_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".html" || ext == ".htm";
}

// HTML files named directly or found (non-recursively) in named
// directories, sorted by path within each directory.
std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& input : inputs) {
    const fs::path p(input);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && is_html_file(entry.path())) {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  return files;
}

// Reads the single input of segment/baseline-window; "-" or nothing means
// standard input.
std::pair<std::string, std::string> read_single_input(const RunConfig& config) {
  if (config.inputs.empty() || config.inputs[0] == "-") {
    std::string bytes(std::istreambuf_iterator<char>(std::cin), {});
    return {std::move(bytes), "stdin"};
  }
  return {read_file(config.inputs[0]), config.inputs[0]};
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.out.empty()) {
    out << text;
  } else {
    write_file(config.out, text);
  }
}

struct PageResult {
  std::optional<DomTree> tree;
  std::string error;
};

std::vector<PageResult> parse_all(const std::vector<fs::path>& files,
                                  const RunConfig& config) {
  std::vector<PageResult> results(files.size());
  parallel_for(files.size(), config.workers, [&](std::size_t i) {
    try {
      results[i].tree = parse_html(read_file(files[i]),
                                   files[i].filename().string(), config.ingest);
    } catch (const std::exception& e) {
      results[i].error = e.what();
    }
  });
  return results;
}

}  // namespace

int cmd_segment(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    auto [bytes, source] = read_single_input(config);
    const DomTree tree = parse_html(bytes, source, config.ingest);
    const PageSegmentation page =
        segment_page(tree, config.eval.filter, config.eval.tolerance);
    emit(config, segmentation_to_json(tree, page).dump(2) + "\n", out);
    return kExitOk;
  } catch (const std::exception& e) {
    err << "segment: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_baseline_window(const RunConfig& config, std::ostream& out,
                        std::ostream& err) {
  try {
    auto [bytes, source] = read_single_input(config);
    const DomTree tree = parse_html(bytes, source, config.ingest);
    const WordStream stream(tree);
    json images = json::array();
    for (const auto& image : collect_valid_images(tree, config.eval.filter)) {
      images.push_back(window_to_json(stream.Window(image, config.window_n)));
    }
    const json doc = {{"source", tree.source_identifier()},
                      {"title", tree.page_title()},
                      {"n", config.window_n},
                      {"images", std::move(images)}};
    emit(config, doc.dump(2) + "\n", out);
    return kExitOk;
  } catch (const std::exception& e) {
    err << "baseline-window: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_batch(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.inputs.size() != 1 || !fs::is_directory(config.inputs[0])) {
    err << "batch: input must be one directory\n";
    return kExitError;
  }
  if (config.out.empty()) {
    err << "batch: --out directory is required\n";
    return kExitError;
  }
  try {
    config.eval.filter.Validate();
    fs::create_directories(config.out);
  } catch (const std::exception& e) {
    err << "batch: " << e.what() << "\n";
    return kExitError;
  }

  const std::vector<fs::path> files = expand_inputs(config.inputs);
  struct Outcome {
    std::size_t segments = 0;
    double millis = 0.0;
    std::string error;
  };
  std::vector<Outcome> outcomes(files.size());
  parallel_for(files.size(), config.workers, [&](std::size_t i) {
    Outcome& o = outcomes[i];
    try {
      const auto start = std::chrono::steady_clock::now();
      const DomTree tree = parse_html(
          read_file(files[i]), files[i].filename().string(), config.ingest);
      const PageSegmentation page =
          segment_page(tree, config.eval.filter, config.eval.tolerance);
      o.millis = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - start)
                     .count();
      o.segments = page.segments.size();
      write_file(fs::path(config.out) / (files[i].filename().string() + ".json"),
                 segmentation_to_json(tree, page).dump(2) + "\n");
    } catch (const std::exception& e) {
      o.error = e.what();
    }
  });

  std::size_t processed = 0, failed = 0, segments = 0;
  double millis = 0.0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!outcomes[i].error.empty()) {
      ++failed;
      err << "failed: " << files[i].string() << ": " << outcomes[i].error
          << "\n";
      continue;
    }
    ++processed;
    segments += outcomes[i].segments;
    millis += outcomes[i].millis;
  }
  char mean[32];
  std::snprintf(mean, sizeof mean, "%.3f",
                processed ? millis / static_cast<double>(processed) : 0.0);
  out << "pages=" << processed << " failed=" << failed
      << " segments=" << segments << " mean_ms_per_page=" << mean << "\n";
  return failed ? kExitPartial : kExitOk;
}

int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::vector<EvalReport> reports;
    if (config.counts) {
      const auto& c = *config.counts;
      if (c.size() != 3) throw ConfigError("--counts takes correct,extracted,actual");
      EvalReport r;
      r.method = "counts";
      r.correct = c[0];
      r.extracted = c[1];
      r.actual = c[2];
      r.config = config.eval;
      const PrecisionRecall pr = precision_recall(r.correct, r.extracted, r.actual);
      r.precision = pr.precision;
      r.recall = pr.recall;
      reports.push_back(std::move(r));
    } else {
      if (config.truth_path.empty()) throw ConfigError("--truth is required");
      const auto truth =
          ground_truth_from_json(json::parse(read_file(config.truth_path)));
      if (!config.predictions_dir.empty()) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(config.predictions_dir)) {
          if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
          }
        }
        std::sort(files.begin(), files.end());
        std::vector<PagePrediction> predictions;
        for (const auto& f : files) {
          PagePrediction p = prediction_from_json(json::parse(read_file(f)));
          p.source = fs::path(p.source).filename().string();
          predictions.push_back(std::move(p));
        }
        reports.push_back(evaluate_predictions(predictions, truth, config.eval));
      } else {
        const auto files = expand_inputs(config.inputs);
        if (files.empty()) throw ConfigError("no HTML inputs given");
        auto parsed = parse_all(files, config);
        std::vector<DomTree> pages;
        for (std::size_t i = 0; i < files.size(); ++i) {
          if (!parsed[i].tree) {
            throw ConfigError("cannot parse " + files[i].string() + ": " +
                              parsed[i].error);
          }
          pages.push_back(std::move(*parsed[i].tree));
        }
        reports.push_back(evaluate_corpus(pages, truth, config.eval));
        reports.push_back(
            evaluate_window_baseline(pages, truth, config.eval, config.window_n));
      }
    }

    json doc = {{"reports", json::array()}};
    for (const auto& r : reports) doc["reports"].push_back(report_to_json(r));
    const std::string table = format_table(reports);
    if (config.out.empty()) {
      out << doc.dump(2) << "\n";
      err << table;
    } else {
      write_file(config.out, doc.dump(2) + "\n");
      out << table;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "eval: " << e.what() << "\n";
    return kExitError;
  }
}

namespace {

void add_common_flags(CLI::App* cmd, RunConfig& config,
                      std::string& unknown_dims) {
  cmd->add_option("--tolerance", config.eval.tolerance,
                  "Shape similarity tolerance (normalized edit distance)")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--min-small-px", config.eval.filter.small_min_px,
                  "Smallest side of a small, square-ish image");
  cmd->add_option("--min-large-px", config.eval.filter.large_min_px,
                  "Smallest side of a large image");
  cmd->add_option("--unknown-dims", unknown_dims,
                  "Images without declared size: valid|invalid")
      ->check(CLI::IsMember({"valid", "invalid"}));
  cmd->add_option("--workers", config.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", config.out, "Output file or directory");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Extracts web images together with their surrounding text."};
  app.require_subcommand(1);
  RunConfig config;
  config.workers = std::max(1u, std::thread::hardware_concurrency());
  std::string unknown_dims = "valid";
  std::string match = "exact";
  std::string counts;

  CLI::App* segment = app.add_subcommand("segment", "Segment one HTML page");
  segment->add_option("input", config.inputs, "HTML file, or - for stdin");
  add_common_flags(segment, config, unknown_dims);

  CLI::App* batch =
      app.add_subcommand("batch", "Segment every .html file in a directory");
  batch->add_option("input", config.inputs, "Input directory")->required();
  add_common_flags(batch, config, unknown_dims);

  CLI::App* eval = app.add_subcommand(
      "eval", "Score segmentation against ground truth");
  eval->add_option("inputs", config.inputs, "HTML files or directories");
  eval->add_option("--truth", config.truth_path, "Ground truth JSON file");
  eval->add_option("--predictions", config.predictions_dir,
                   "Directory of segment JSON outputs to score instead");
  eval->add_option("--counts", counts,
                   "Score raw counts: correct,extracted,actual");
  eval->add_option("--match", match, "exact|jaccard")
      ->check(CLI::IsMember({"exact", "jaccard"}));
  eval->add_option("--jaccard-threshold", config.eval.match.jaccard_threshold,
                   "Minimum word Jaccard overlap in jaccard mode");
  eval->add_option("--window-n", config.window_n,
                   "Window size of the baseline column (0 = whole page)");
  add_common_flags(eval, config, unknown_dims);

  CLI::App* window = app.add_subcommand(
      "baseline-window", "Fixed word window around each image");
  window->add_option("input", config.inputs, "HTML file, or - for stdin");
  window->add_option("--window-n", config.window_n,
                     "Words on each side (0 = whole page)");
  add_common_flags(window, config, unknown_dims);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  config.eval.filter.unknown_dims_valid = unknown_dims == "valid";
  config.eval.match.mode =
      match == "exact" ? MatchMode::kExact : MatchMode::kJaccard;
  if (!counts.empty()) {
    std::vector<long long> values;
    std::stringstream ss(counts);
    std::string item;
    try {
      while (std::getline(ss, item, ',')) values.push_back(std::stoll(item));
    } catch (const std::exception&) {
      err << "eval: --counts takes three integers\n";
      return kExitError;
    }
    config.counts = std::move(values);
  }
  try {
    config.eval.filter.Validate();
    config.eval.match.Validate();
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitError;
  }

  if (segment->parsed()) return cmd_segment(config, out, err);
  if (batch->parsed()) return cmd_batch(config, out, err);
  if (eval->parsed()) return cmd_eval(config, out, err);
  return cmd_baseline_window(config, out, err);
}

}  // namespace imgseg
