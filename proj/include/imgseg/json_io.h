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

// JSON forms of segmentation results, ground truth and evaluation reports.
//
// Segmentation result:
//   { "source": ..., "title": ...,
//     "segments": [ { "class": "listed|unlisted|semi-listed",
//                     "root_path": "0/1/3",
//                     "child_range": [begin, end],        // semi-listed only
//                     "images": [ { "src", "alt", "filename",
//                                   "width", "height" } ],  // null if unknown
//                     "texts": [ ... ] } ],
//     "skipped": [ { "src": ..., "reason": ... } ] }
//
// Ground truth file: a list of
//   { "source": ..., "segments": [ { "images": [srcs], "text": "...",
//                                    "label": "listed|unlisted|semi-listed"
//                                             | null } ] }

#ifndef IMGSEG_JSON_IO_H_
#define IMGSEG_JSON_IO_H_

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "imgseg/baseline.h"
#include "imgseg/dom.h"
#include "imgseg/eval.h"
#include "imgseg/segmenter.h"

namespace imgseg {

nlohmann::json segmentation_to_json(const DomTree& tree,
                                    const PageSegmentation& page);

nlohmann::json window_to_json(const WindowContext& window);

// Reads a segmentation result back into matching candidates. Throws
// ConfigError on malformed input.
PagePrediction prediction_from_json(const nlohmann::json& j);

// Throws ConfigError on schema violations, including empty or repeated
// image lists.
std::vector<GroundTruthPage> ground_truth_from_json(const nlohmann::json& j);
nlohmann::json ground_truth_to_json(std::span<const GroundTruthPage> pages);

nlohmann::json report_to_json(const EvalReport& report);

}  // namespace imgseg

#endif  // IMGSEG_JSON_IO_H_
