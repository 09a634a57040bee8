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

#include "imgseg/json_io.h"

#include <set>

#include "imgseg/errors.h"

namespace imgseg {

using nlohmann::json;

namespace {

json optional_int(const std::optional<int>& v) {
  return v ? json(*v) : json(nullptr);
}

json image_to_json(const ImageDescriptor& image) {
  return json{{"src", image.src},
              {"alt", image.alt},
              {"filename", image.filename},
              {"width", optional_int(image.width_px)},
              {"height", optional_int(image.height_px)}};
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(where + ": missing \"" + key + "\"");
  }
  return j.at(key);
}

std::string require_string(const json& j, const char* key,
                           const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_string()) {
    throw ConfigError(where + ": \"" + key + "\" must be a string");
  }
  return v.get<std::string>();
}

}  // namespace

json segmentation_to_json(const DomTree& tree, const PageSegmentation& page) {
  json segments = json::array();
  for (const ImageSegment& s : page.segments) {
    json images = json::array();
    for (const auto& image : s.images) images.push_back(image_to_json(image));
    json seg = {{"class", to_string(s.image_class)},
                {"root_path", child_index_path(tree, s.root)}};
    if (s.child_range) {
      seg["child_range"] = {s.child_range->begin, s.child_range->end};
    }
    seg["images"] = std::move(images);
    seg["texts"] = s.context_texts;
    segments.push_back(std::move(seg));
  }
  json skipped = json::array();
  for (const auto& skip : page.skipped) {
    skipped.push_back({{"src", skip.src}, {"reason", to_string(skip.reason)}});
  }
  return json{{"source", tree.source_identifier()},
              {"title", tree.page_title()},
              {"segments", std::move(segments)},
              {"skipped", std::move(skipped)}};
}

json window_to_json(const WindowContext& window) {
  json j = image_to_json(window.image);
  j["before"] = window.before_words;
  j["after"] = window.after_words;
  return j;
}

PagePrediction prediction_from_json(const json& j) {
  PagePrediction p;
  p.source = require_string(j, "source", "prediction");
  const std::string where = "prediction " + p.source;
  const json& segments = require(j, "segments", where);
  if (!segments.is_array()) throw ConfigError(where + ": segments not a list");
  for (const json& s : segments) {
    CandidateSegment c;
    for (const json& image : require(s, "images", where)) {
      c.image_srcs.push_back(require_string(image, "src", where));
    }
    std::string text;
    for (const json& t : require(s, "texts", where)) {
      if (!t.is_string()) throw ConfigError(where + ": texts must be strings");
      if (!text.empty()) text.push_back(' ');
      text += t.get<std::string>();
    }
    c.context_text = std::move(text);
    p.segments.push_back(std::move(c));
  }
  return p;
}

std::vector<GroundTruthPage> ground_truth_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("ground truth must be a list of pages");
  std::vector<GroundTruthPage> pages;
  for (const json& page_json : j) {
    GroundTruthPage page;
    page.source_identifier = require_string(page_json, "source", "ground truth");
    const std::string where = "ground truth " + page.source_identifier;
    const json& segments = require(page_json, "segments", where);
    if (!segments.is_array()) {
      throw ConfigError(where + ": segments not a list");
    }
    for (const json& s : segments) {
      TruthSegment seg;
      std::set<std::string> seen;
      for (const json& src : require(s, "images", where)) {
        if (!src.is_string()) throw ConfigError(where + ": image src not a string");
        if (!seen.insert(src.get<std::string>()).second) {
          throw ConfigError(where + ": repeated image " + src.get<std::string>());
        }
        seg.image_srcs.push_back(src.get<std::string>());
      }
      if (seg.image_srcs.empty()) {
        throw ConfigError(where + ": segment without images");
      }
      seg.context_text = require_string(s, "text", where);
      if (s.contains("label") && !s.at("label").is_null()) {
        const json& label = s.at("label");
        auto parsed = label.is_string()
                          ? parse_image_class(label.get<std::string>())
                          : std::nullopt;
        if (!parsed) throw ConfigError(where + ": bad label " + label.dump());
        seg.label = parsed;
      }
      page.segments.push_back(std::move(seg));
    }
    pages.push_back(std::move(page));
  }
  return pages;
}

json ground_truth_to_json(std::span<const GroundTruthPage> pages) {
  json out = json::array();
  for (const auto& page : pages) {
    json segments = json::array();
    for (const auto& s : page.segments) {
      segments.push_back(
          {{"images", s.image_srcs},
           {"text", s.context_text},
           {"label", s.label ? json(std::string(to_string(*s.label)))
                             : json(nullptr)}});
    }
    out.push_back({{"source", page.source_identifier},
                   {"segments", std::move(segments)}});
  }
  return out;
}

json report_to_json(const EvalReport& report) {
  json per_page = json::array();
  for (const auto& p : report.per_page) {
    per_page.push_back({{"source", p.source},
                        {"actual", p.actual},
                        {"extracted", p.extracted},
                        {"correct", p.correct},
                        {"ambiguous", p.ambiguous}});
  }
  const EvalConfig& c = report.config;
  json config = {
      {"tolerance", c.tolerance},
      {"large_min_px", c.filter.large_min_px},
      {"small_min_px", c.filter.small_min_px},
      {"wide_ratio_bounds",
       {c.filter.wide_ratio_bounds.first, c.filter.wide_ratio_bounds.second}},
      {"square_ratio_bounds",
       {c.filter.square_ratio_bounds.first,
        c.filter.square_ratio_bounds.second}},
      {"unknown_dims_valid", c.filter.unknown_dims_valid},
      {"match", c.match.mode == MatchMode::kExact ? "exact" : "jaccard"},
      {"jaccard_threshold", c.match.jaccard_threshold}};
  return json{{"method", report.method},
              {"actual", report.actual},
              {"extracted", report.extracted},
              {"correct", report.correct},
              {"precision", report.precision},
              {"recall", report.recall},
              {"mean_ms_per_page", report.mean_ms_per_page},
              {"per_page", std::move(per_page)},
              {"unevaluated_truth", report.unevaluated_truth},
              {"config", std::move(config)}};
}

}  // namespace imgseg
