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

#ifndef IMGSEG_BASELINE_H_
#define IMGSEG_BASELINE_H_

#include <cstddef>
#include <string>
#include <vector>

#include "imgseg/dom.h"
#include "imgseg/image_filter.h"

namespace imgseg {

inline constexpr std::size_t kDefaultWindow = 32;
// Window size meaning "the whole page".
inline constexpr std::size_t kUnboundedWindow = 0;

struct WindowContext {
  ImageDescriptor image;
  std::vector<std::string> before_words;
  std::vector<std::string> after_words;
  std::size_t n = kDefaultWindow;
};

// All words of the page's text nodes in document order, each tagged with the
// id of the text node it came from.
class WordStream {
 public:
  explicit WordStream(const DomTree& tree);

  // Up to n words before and after the document position of `image`.
  WindowContext Window(const ImageDescriptor& image, std::size_t n) const;

  std::size_t size() const { return words_.size(); }

 private:
  std::vector<std::string> words_;
  std::vector<NodeId> owners_;
};

// The n words preceding and following the image in document order. Words are
// maximal runs of non-whitespace; n == kUnboundedWindow takes everything.
WindowContext fixed_window_context(const DomTree& tree,
                                   const ImageDescriptor& image,
                                   std::size_t n = kDefaultWindow);

}  // namespace imgseg

#endif  // IMGSEG_BASELINE_H_
