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

#include "imgseg/image_filter.h"

#include <cmath>
#include <limits>

#include "imgseg/errors.h"

namespace imgseg {

namespace {

bool reciprocal(const std::pair<double, double>& bounds) {
  const auto [low, high] = bounds;
  return low > 0 && low <= 1.0 && high >= 1.0 &&
         std::abs(low * high - 1.0) < 1e-9;
}

// low <= w/h <= high, evaluated without dividing by h.
bool ratio_within(int w, int h, const std::pair<double, double>& bounds) {
  const double high = bounds.second;
  return w <= high * h && h <= high * w;
}

}  // namespace

void FilterPolicy::Validate() const {
  if (small_min_px >= large_min_px) {
    throw ContractError("small_min_px must be less than large_min_px");
  }
  if (!reciprocal(wide_ratio_bounds) || !reciprocal(square_ratio_bounds)) {
    throw ContractError("ratio bounds must satisfy low = 1/high");
  }
}

std::optional<int> parse_pixel_length(std::string_view value) {
  std::size_t i = 0;
  std::size_t end = value.size();
  while (i < end && (value[i] == ' ' || value[i] == '\t')) ++i;
  while (end > i && (value[end - 1] == ' ' || value[end - 1] == '\t')) --end;
  if (end - i > 2 && (value[end - 2] == 'p' || value[end - 2] == 'P') &&
      (value[end - 1] == 'x' || value[end - 1] == 'X')) {
    end -= 2;
  }
  if (i == end) return std::nullopt;
  long long n = 0;
  for (std::size_t k = i; k < end; ++k) {
    if (value[k] < '0' || value[k] > '9') return std::nullopt;
    n = n * 10 + (value[k] - '0');
    if (n > std::numeric_limits<int>::max()) return std::nullopt;
  }
  return static_cast<int>(n);
}

std::string filename_from_src(std::string_view src) {
  const std::size_t cut = src.find_first_of("?#");
  if (cut != std::string_view::npos) src = src.substr(0, cut);
  const std::size_t slash = src.find_last_of("/\\");
  if (slash != std::string_view::npos) src = src.substr(slash + 1);
  return std::string(src);
}

ImageDescriptor describe_image(const DomTree& tree, NodeId node) {
  const DomNode& n = tree.node(node);
  if (!n.is_image()) throw ContractError("node is not an image");
  ImageDescriptor d;
  d.node = node;
  if (auto src = n.attribute("src")) d.src = std::string(*src);
  d.filename = filename_from_src(d.src);
  if (auto alt = n.attribute("alt")) d.alt = collapse_whitespace(*alt);
  if (auto w = n.attribute("width")) d.width_px = parse_pixel_length(*w);
  if (auto h = n.attribute("height")) d.height_px = parse_pixel_length(*h);
  return d;
}

bool is_valid_image(const ImageDescriptor& desc, const FilterPolicy& policy) {
  if (!desc.width_px || !desc.height_px) return policy.unknown_dims_valid;
  const int w = *desc.width_px;
  const int h = *desc.height_px;
  const int large = policy.large_min_px;
  const int small = policy.small_min_px;
  if (w >= large && h >= large) {
    return ratio_within(w, h, policy.wide_ratio_bounds);
  }
  if (w >= small && w < large && h >= small && h < large) {
    return ratio_within(w, h, policy.square_ratio_bounds);
  }
  return false;
}

std::vector<ImageDescriptor> collect_valid_images(const DomTree& tree,
                                                  const FilterPolicy& policy) {
  std::vector<ImageDescriptor> out;
  for (const DomNode& n : tree.nodes()) {
    if (!n.is_image()) continue;
    ImageDescriptor d = describe_image(tree, n.id);
    if (is_valid_image(d, policy)) out.push_back(std::move(d));
  }
  return out;
}

}  // namespace imgseg
