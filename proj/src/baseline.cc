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

#include "imgseg/baseline.h"

#include <algorithm>

namespace imgseg {

WordStream::WordStream(const DomTree& tree) {
  for (const DomNode& n : tree.nodes()) {
    if (!n.is_text()) continue;
    // Text is whitespace-collapsed, so single spaces separate words.
    std::size_t start = 0;
    while (start <= n.text.size()) {
      std::size_t end = n.text.find(' ', start);
      if (end == std::string::npos) end = n.text.size();
      if (end > start) {
        words_.push_back(n.text.substr(start, end - start));
        owners_.push_back(n.id);
      }
      start = end + 1;
    }
  }
}

WindowContext WordStream::Window(const ImageDescriptor& image,
                                 std::size_t n) const {
  WindowContext ctx;
  ctx.image = image;
  ctx.n = n;
  // Words owned by text nodes preceding the image in preorder.
  const auto split = std::lower_bound(owners_.begin(), owners_.end(),
                                      image.node);
  const std::size_t pivot = static_cast<std::size_t>(split - owners_.begin());
  const std::size_t before =
      n == kUnboundedWindow ? pivot : std::min(n, pivot);
  const std::size_t after = n == kUnboundedWindow
                                ? words_.size() - pivot
                                : std::min(n, words_.size() - pivot);
  ctx.before_words.assign(words_.begin() + (pivot - before),
                          words_.begin() + pivot);
  ctx.after_words.assign(words_.begin() + pivot,
                         words_.begin() + pivot + after);
  return ctx;
}

WindowContext fixed_window_context(const DomTree& tree,
                                   const ImageDescriptor& image,
                                   std::size_t n) {
  tree.node(image.node);
  return WordStream(tree).Window(image, n);
}

}  // namespace imgseg
