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

#ifndef IMGSEG_HTML_INGEST_H_
#define IMGSEG_HTML_INGEST_H_

#include <set>
#include <string>
#include <string_view>

#include "imgseg/dom.h"

namespace imgseg {

struct IngestOptions {
  // Text nodes with fewer code points than this are dropped.
  int min_text_chars = 1;
  // Elements removed together with their content. Comments are always
  // dropped; "head" keeps its title, which becomes the page title.
  std::set<std::string> strip_tags = {"script", "style", "noscript", "head"};
  // Adds the alt text of each image as a text node right after it.
  bool treat_alt_as_text = false;

  // Throws ContractError when strip_tags contains "img" or "body", or when
  // min_text_chars < 1.
  void Validate() const;
};

// Parses an HTML document into a normalized tree rooted at an "html" element.
// Tolerates malformed markup: unclosed elements are closed implicitly, stray
// end tags are ignored. Throws ParseError("empty document") on empty input.
DomTree parse_html(std::string_view bytes, std::string source_identifier,
                   const IngestOptions& options = {});

// Serializes a tree back to HTML with explicit end tags. Parsing the result
// with the same options yields a tree of identical shape.
std::string to_html(const DomTree& tree);

// Converts `bytes` to valid UTF-8. Honors a declared meta charset for the
// Latin-1 family; anything else is read as UTF-8 with invalid sequences
// replaced by U+FFFD.
std::string decode_document(std::string_view bytes);

}  // namespace imgseg

#endif  // IMGSEG_HTML_INGEST_H_
