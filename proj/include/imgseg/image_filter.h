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

#ifndef IMGSEG_IMAGE_FILTER_H_
#define IMGSEG_IMAGE_FILTER_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "imgseg/dom.h"

namespace imgseg {

struct ImageDescriptor {
  NodeId node{};
  std::string src;
  std::string filename;  // Last path component of src, no query/fragment.
  std::string alt;
  std::optional<int> width_px;
  std::optional<int> height_px;

  friend bool operator==(const ImageDescriptor&,
                         const ImageDescriptor&) = default;
};

// Declared-size rules for images worth segmenting. Images that are large
// (both sides >= large_min_px) need a width/height ratio inside
// wide_ratio_bounds; small images (both sides in [small_min_px,
// large_min_px)) must be roughly square, inside square_ratio_bounds.
struct FilterPolicy {
  int large_min_px = 60;
  int small_min_px = 45;
  std::pair<double, double> wide_ratio_bounds = {1.0 / 5.0, 5.0};
  std::pair<double, double> square_ratio_bounds = {1.0 / 2.0, 2.0};
  // Images missing a plain pixel width or height.
  bool unknown_dims_valid = true;

  // Throws ContractError unless small_min_px < large_min_px and each bound
  // pair is reciprocal with low <= 1 <= high.
  void Validate() const;
};

// Plain non-negative pixel integer ("120", " 120px "), else nullopt.
std::optional<int> parse_pixel_length(std::string_view value);

// "http://x/a/b.jpg?v=2" -> "b.jpg".
std::string filename_from_src(std::string_view src);

// Throws ContractError if `node` is not an image.
ImageDescriptor describe_image(const DomTree& tree, NodeId node);

bool is_valid_image(const ImageDescriptor& desc, const FilterPolicy& policy);

// Valid images in document order.
std::vector<ImageDescriptor> collect_valid_images(const DomTree& tree,
                                                  const FilterPolicy& policy);

}  // namespace imgseg

#endif  // IMGSEG_IMAGE_FILTER_H_
