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

// Image segmentation by upward traversal.
//
// For each valid image the segmenter walks from the image towards the root,
// watching the number of text leaves below the current ancestor. The first
// ancestor where that number becomes positive bounds a small segment; the
// next ancestor where it grows again bounds a larger one. Which of the two
// becomes the image's segment depends on how the image is laid out:
//
//   listed      the image's branch has structurally similar image-bearing
//               siblings under the larger boundary: keep the small segment.
//   unlisted    no such siblings: keep the large segment.
//   semi-listed the small boundary holds several images whose surrounding
//               children repeat one pattern: split it into one unit per
//               image and keep the unit holding this image.

#ifndef IMGSEG_SEGMENTER_H_
#define IMGSEG_SEGMENTER_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imgseg/dom.h"
#include "imgseg/image_filter.h"
#include "imgseg/structure.h"

namespace imgseg {

enum class ImageClass { kUnlisted, kListed, kSemiListed };

// "unlisted", "listed", "semi-listed".
std::string_view to_string(ImageClass c);
std::optional<ImageClass> parse_image_class(std::string_view name);

// Bookkeeping of the upward walk for one image.
struct TraversalState {
  int state_img = 0;       // Images under `parent`.
  int state_text = 0;      // Text leaves under `parent`.
  int state = 0;           // Text count recorded at the last change.
  bool state_changed_twice = false;  // Set once the first change is seen.
  NodeId child{};
  std::optional<NodeId> parent;
  std::optional<NodeId> first_change_node;
};

struct ImageSegment {
  NodeId root{};
  std::optional<ChildRange> child_range;  // Semi-listed units only.
  std::vector<ImageDescriptor> images;
  ImageClass image_class = ImageClass::kUnlisted;
  std::vector<std::string> context_texts;  // Document order.
  std::string page_title;
};

// Everything find_segment learned about one image, for auditing and tests.
struct SegmentTrace {
  std::optional<ImageSegment> segment;
  std::optional<NodeId> first_change;
  std::optional<NodeId> second_change;
  TraversalState state;
};

// Throws ContractError if `image.node` is not an image node of `tree`.
SegmentTrace trace_segment(StructureAnalyzer& analyzer,
                           const ImageDescriptor& image);
SegmentTrace trace_segment(const DomTree& tree, const ImageDescriptor& image,
                           double tolerance = kDefaultTolerance);

std::optional<ImageSegment> find_segment(const DomTree& tree,
                                         const ImageDescriptor& image,
                                         double tolerance = kDefaultTolerance);

enum class SkipReason { kNoTextContext, kFilteredInvalid };

// "no_text_context", "filtered_invalid".
std::string_view to_string(SkipReason r);

struct SkippedImage {
  NodeId node{};
  std::string src;
  SkipReason reason = SkipReason::kNoTextContext;
};

struct PageSegmentation {
  std::vector<ImageSegment> segments;
  std::vector<SkippedImage> skipped;  // Document order.
};

// Segments every valid image of the page. Images that land on the same
// (root, child_range) share one segment. Segments are ordered by root, then
// by range start.
PageSegmentation segment_page(const DomTree& tree,
                              const FilterPolicy& policy = {},
                              double tolerance = kDefaultTolerance);

// Text leaves under `root` (restricted to `range` of its children when
// given), in document order.
std::vector<std::string> collect_texts(const DomTree& tree, NodeId root,
                                       std::optional<ChildRange> range = {});

}  // namespace imgseg

#endif  // IMGSEG_SEGMENTER_H_
