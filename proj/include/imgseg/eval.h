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

// Scoring extracted image segments against hand-labeled ground truth.
//
// A segment is correct when it shares at least one image with a truth
// segment and its context text matches the truth text: exactly (after
// whitespace collapse and case folding) by default, or by word-set Jaccard
// overlap. Matching is greedy and one-to-one in document order.

#ifndef IMGSEG_EVAL_H_
#define IMGSEG_EVAL_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imgseg/baseline.h"
#include "imgseg/dom.h"
#include "imgseg/image_filter.h"
#include "imgseg/segmenter.h"

namespace imgseg {

struct TruthSegment {
  std::vector<std::string> image_srcs;  // Unique, non-empty.
  std::string context_text;
  std::optional<ImageClass> label;
};

struct GroundTruthPage {
  std::string source_identifier;
  std::vector<TruthSegment> segments;
};

enum class MatchMode { kExact, kJaccard };

struct MatchPolicy {
  MatchMode mode = MatchMode::kExact;
  double jaccard_threshold = 0.8;  // Jaccard mode only.

  // Throws ContractError unless 0 < jaccard_threshold <= 1.
  void Validate() const;
};

// Extracted segment reduced to what matching looks at.
struct CandidateSegment {
  std::vector<std::string> image_srcs;
  std::string context_text;
};

CandidateSegment to_candidate(const ImageSegment& segment);
CandidateSegment to_candidate(const WindowContext& window);

// Whitespace collapse plus ASCII case folding.
std::string normalize_for_match(std::string_view text);

// |A ∩ B| / |A ∪ B| over the sets of normalized words; 1 for two empty texts.
double word_jaccard(std::string_view a, std::string_view b);

bool texts_match(std::string_view extracted, std::string_view truth,
                 const MatchPolicy& policy);

struct MatchResult {
  int correct = 0;
  // Some segment had more than one admissible partner.
  bool ambiguous = false;
};

MatchResult match_candidates(std::span<const CandidateSegment> extracted,
                             const GroundTruthPage& truth,
                             const MatchPolicy& policy);

int match_segments(std::span<const ImageSegment> extracted,
                   const GroundTruthPage& truth, const MatchPolicy& policy);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

// precision = correct / extracted, recall = correct / actual, with 0 for an
// empty denominator.
PrecisionRecall precision_recall(long long correct, long long extracted,
                                 long long actual);

struct EvalConfig {
  FilterPolicy filter;
  double tolerance = kDefaultTolerance;
  MatchPolicy match;
};

struct PageCounts {
  std::string source;
  long long actual = 0;
  long long extracted = 0;
  long long correct = 0;
  bool ambiguous = false;
};

struct EvalReport {
  std::string method;
  long long actual = 0;
  long long extracted = 0;
  long long correct = 0;
  double precision = 0.0;
  double recall = 0.0;
  std::vector<PageCounts> per_page;
  EvalConfig config;
  double mean_ms_per_page = 0.0;
  // Truth pages that had no matching input page.
  std::vector<std::string> unevaluated_truth;
};

// Extracted segments of one page, keyed by the page's source identifier.
struct PagePrediction {
  std::string source;
  std::vector<CandidateSegment> segments;
};

// Scores already-extracted segments. Throws ConfigError listing every
// prediction source that has no ground truth page.
EvalReport evaluate_predictions(std::span<const PagePrediction> predictions,
                                std::span<const GroundTruthPage> truth,
                                const EvalConfig& config,
                                std::string method = "segmenter");

// Segments each page and scores it; mean_ms_per_page covers segmentation
// only. Throws ConfigError listing every page without ground truth.
EvalReport evaluate_corpus(std::span<const DomTree> pages,
                           std::span<const GroundTruthPage> truth,
                           const EvalConfig& config);

// Same scoring for the fixed-window baseline: one candidate per valid image,
// its context being the words of its window.
EvalReport evaluate_window_baseline(std::span<const DomTree> pages,
                                    std::span<const GroundTruthPage> truth,
                                    const EvalConfig& config, std::size_t n);

// Plain-text comparison table with rows Actual, Extracted, Correct, Recall
// and Precision, one column per report.
std::string format_table(std::span<const EvalReport> reports);

}  // namespace imgseg

#endif  // IMGSEG_EVAL_H_
