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

#include "imgseg/eval.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "imgseg/errors.h"

namespace imgseg {

void MatchPolicy::Validate() const {
  if (!(jaccard_threshold > 0.0 && jaccard_threshold <= 1.0)) {
    throw ContractError("jaccard threshold must lie in (0, 1]");
  }
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out.push_back(' ');
    out += p;
  }
  return out;
}

std::set<std::string> word_set(std::string_view text) {
  std::set<std::string> words;
  const std::string norm = normalize_for_match(text);
  std::size_t start = 0;
  while (start < norm.size()) {
    std::size_t end = norm.find(' ', start);
    if (end == std::string::npos) end = norm.size();
    if (end > start) words.insert(norm.substr(start, end - start));
    start = end + 1;
  }
  return words;
}

bool share_image(const std::vector<std::string>& a,
                 const std::vector<std::string>& b) {
  for (const auto& x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  }
  return false;
}

bool admissible(const CandidateSegment& c, const TruthSegment& t,
                const MatchPolicy& policy) {
  return share_image(c.image_srcs, t.image_srcs) &&
         texts_match(c.context_text, t.context_text, policy);
}

}  // namespace

CandidateSegment to_candidate(const ImageSegment& segment) {
  CandidateSegment c;
  for (const auto& image : segment.images) c.image_srcs.push_back(image.src);
  c.context_text = join(segment.context_texts);
  return c;
}

CandidateSegment to_candidate(const WindowContext& window) {
  CandidateSegment c;
  c.image_srcs.push_back(window.image.src);
  std::vector<std::string> words = window.before_words;
  words.insert(words.end(), window.after_words.begin(),
               window.after_words.end());
  c.context_text = join(words);
  return c;
}

std::string normalize_for_match(std::string_view text) {
  std::string out = collapse_whitespace(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

double word_jaccard(std::string_view a, std::string_view b) {
  const auto wa = word_set(a);
  const auto wb = word_set(b);
  if (wa.empty() && wb.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& w : wa) common += wb.count(w);
  const std::size_t united = wa.size() + wb.size() - common;
  return static_cast<double>(common) / static_cast<double>(united);
}

bool texts_match(std::string_view extracted, std::string_view truth,
                 const MatchPolicy& policy) {
  if (policy.mode == MatchMode::kExact) {
    return normalize_for_match(extracted) == normalize_for_match(truth);
  }
  return word_jaccard(extracted, truth) >= policy.jaccard_threshold;
}

MatchResult match_candidates(std::span<const CandidateSegment> extracted,
                             const GroundTruthPage& truth,
                             const MatchPolicy& policy) {
  policy.Validate();
  MatchResult result;
  const std::size_t nt = truth.segments.size();
  std::vector<bool> taken(nt, false);
  std::vector<int> truth_partners(nt, 0);
  for (const CandidateSegment& c : extracted) {
    int partners = 0;
    bool matched = false;
    for (std::size_t t = 0; t < nt; ++t) {
      if (!admissible(c, truth.segments[t], policy)) continue;
      ++partners;
      ++truth_partners[t];
      if (!matched && !taken[t]) {
        taken[t] = true;
        matched = true;
        ++result.correct;
      }
    }
    if (partners > 1) result.ambiguous = true;
  }
  for (int p : truth_partners) {
    if (p > 1) result.ambiguous = true;
  }
  return result;
}

int match_segments(std::span<const ImageSegment> extracted,
                   const GroundTruthPage& truth, const MatchPolicy& policy) {
  std::vector<CandidateSegment> candidates;
  candidates.reserve(extracted.size());
  for (const auto& s : extracted) candidates.push_back(to_candidate(s));
  return match_candidates(candidates, truth, policy).correct;
}

PrecisionRecall precision_recall(long long correct, long long extracted,
                                 long long actual) {
  PrecisionRecall pr;
  if (extracted > 0) {
    pr.precision = static_cast<double>(correct) / static_cast<double>(extracted);
  }
  if (actual > 0) {
    pr.recall = static_cast<double>(correct) / static_cast<double>(actual);
  }
  return pr;
}

namespace {

// Pairs each source with its truth page; throws ConfigError for sources
// without truth. Fills `unevaluated` with truth pages nobody asked for.
std::vector<const GroundTruthPage*> pair_with_truth(
    const std::vector<std::string>& sources,
    std::span<const GroundTruthPage> truth,
    std::vector<std::string>& unevaluated) {
  std::map<std::string, const GroundTruthPage*> by_source;
  for (const auto& page : truth) {
    by_source.emplace(page.source_identifier, &page);
  }
  std::vector<const GroundTruthPage*> paired;
  std::vector<std::string> missing;
  std::set<std::string> used;
  for (const auto& source : sources) {
    auto it = by_source.find(source);
    if (it == by_source.end()) {
      missing.push_back(source);
      paired.push_back(nullptr);
    } else {
      paired.push_back(it->second);
      used.insert(source);
    }
  }
  if (!missing.empty()) {
    std::string msg = "no ground truth for:";
    for (const auto& m : missing) msg += " " + m;
    throw ConfigError(msg);
  }
  for (const auto& page : truth) {
    if (!used.count(page.source_identifier)) {
      unevaluated.push_back(page.source_identifier);
    }
  }
  return paired;
}

void add_page(EvalReport& report, const std::string& source,
              const GroundTruthPage& truth,
              std::span<const CandidateSegment> candidates,
              const MatchPolicy& policy) {
  const MatchResult m = match_candidates(candidates, truth, policy);
  PageCounts page;
  page.source = source;
  page.actual = static_cast<long long>(truth.segments.size());
  page.extracted = static_cast<long long>(candidates.size());
  page.correct = m.correct;
  page.ambiguous = m.ambiguous;
  report.actual += page.actual;
  report.extracted += page.extracted;
  report.correct += page.correct;
  report.per_page.push_back(std::move(page));
}

void finish(EvalReport& report, double total_ms) {
  const PrecisionRecall pr =
      precision_recall(report.correct, report.extracted, report.actual);
  report.precision = pr.precision;
  report.recall = pr.recall;
  if (!report.per_page.empty()) {
    report.mean_ms_per_page =
        total_ms / static_cast<double>(report.per_page.size());
  }
}

std::vector<std::string> sources_of(std::span<const DomTree> pages) {
  std::vector<std::string> sources;
  for (const auto& page : pages) sources.push_back(page.source_identifier());
  return sources;
}

}  // namespace

EvalReport evaluate_predictions(std::span<const PagePrediction> predictions,
                                std::span<const GroundTruthPage> truth,
                                const EvalConfig& config, std::string method) {
  config.match.Validate();
  EvalReport report;
  report.method = std::move(method);
  report.config = config;
  std::vector<std::string> sources;
  for (const auto& p : predictions) sources.push_back(p.source);
  const auto paired = pair_with_truth(sources, truth, report.unevaluated_truth);
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    add_page(report, predictions[i].source, *paired[i],
             predictions[i].segments, config.match);
  }
  finish(report, 0.0);
  return report;
}

EvalReport evaluate_corpus(std::span<const DomTree> pages,
                           std::span<const GroundTruthPage> truth,
                           const EvalConfig& config) {
  config.match.Validate();
  config.filter.Validate();
  EvalReport report;
  report.method = "segmenter";
  report.config = config;
  const auto paired =
      pair_with_truth(sources_of(pages), truth, report.unevaluated_truth);
  double total_ms = 0.0;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    const PageSegmentation seg =
        segment_page(pages[i], config.filter, config.tolerance);
    total_ms += std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    std::vector<CandidateSegment> candidates;
    for (const auto& s : seg.segments) candidates.push_back(to_candidate(s));
    add_page(report, pages[i].source_identifier(), *paired[i], candidates,
             config.match);
  }
  finish(report, total_ms);
  return report;
}

EvalReport evaluate_window_baseline(std::span<const DomTree> pages,
                                    std::span<const GroundTruthPage> truth,
                                    const EvalConfig& config, std::size_t n) {
  config.match.Validate();
  config.filter.Validate();
  EvalReport report;
  report.method = n == kUnboundedWindow ? "window(page)"
                                        : "window(" + std::to_string(n) + ")";
  report.config = config;
  const auto paired =
      pair_with_truth(sources_of(pages), truth, report.unevaluated_truth);
  double total_ms = 0.0;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    const WordStream stream(pages[i]);
    std::vector<CandidateSegment> candidates;
    for (const auto& image : collect_valid_images(pages[i], config.filter)) {
      candidates.push_back(to_candidate(stream.Window(image, n)));
    }
    total_ms += std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    add_page(report, pages[i].source_identifier(), *paired[i], candidates,
             config.match);
  }
  finish(report, total_ms);
  return report;
}

std::string format_table(std::span<const EvalReport> reports) {
  constexpr int kLabel = 10;
  constexpr int kColumn = 14;
  std::ostringstream out;
  char buf[64];
  auto cell = [&](const std::string& s) {
    std::snprintf(buf, sizeof buf, "%*s", kColumn, s.c_str());
    out << buf;
  };
  std::snprintf(buf, sizeof buf, "%-*s", kLabel, "");
  out << buf;
  for (const auto& r : reports) cell(r.method);
  out << '\n';
  auto count_row = [&](const char* label, long long EvalReport::*field) {
    std::snprintf(buf, sizeof buf, "%-*s", kLabel, label);
    out << buf;
    for (const auto& r : reports) cell(std::to_string(r.*field));
    out << '\n';
  };
  auto ratio_row = [&](const char* label, double EvalReport::*field) {
    std::snprintf(buf, sizeof buf, "%-*s", kLabel, label);
    out << buf;
    for (const auto& r : reports) {
      char num[32];
      std::snprintf(num, sizeof num, "%.2f", r.*field);
      cell(num);
    }
    out << '\n';
  };
  count_row("Actual", &EvalReport::actual);
  count_row("Extracted", &EvalReport::extracted);
  count_row("Correct", &EvalReport::correct);
  ratio_row("Recall", &EvalReport::recall);
  ratio_row("Precision", &EvalReport::precision);
  return out.str();
}

}  // namespace imgseg
