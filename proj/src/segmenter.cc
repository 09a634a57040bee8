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

#include "imgseg/segmenter.h"

#include <algorithm>
#include <map>
#include <tuple>
#include <utility>

#include "imgseg/errors.h"

namespace imgseg {

std::string_view to_string(ImageClass c) {
  switch (c) {
    case ImageClass::kUnlisted: return "unlisted";
    case ImageClass::kListed: return "listed";
    case ImageClass::kSemiListed: return "semi-listed";
  }
  return "unlisted";
}

std::optional<ImageClass> parse_image_class(std::string_view name) {
  if (name == "unlisted") return ImageClass::kUnlisted;
  if (name == "listed") return ImageClass::kListed;
  if (name == "semi-listed") return ImageClass::kSemiListed;
  return std::nullopt;
}

std::string_view to_string(SkipReason r) {
  switch (r) {
    case SkipReason::kNoTextContext: return "no_text_context";
    case SkipReason::kFilteredInvalid: return "filtered_invalid";
  }
  return "no_text_context";
}

std::vector<std::string> collect_texts(const DomTree& tree, NodeId root,
                                       std::optional<ChildRange> range) {
  std::size_t begin = index_of(root);
  std::size_t end = begin + tree.subtree_size(root);
  if (range) {
    const auto& children = tree.node(root).children;
    if (range->begin >= range->end || range->end > children.size()) {
      return {};
    }
    const NodeId last = children[range->end - 1];
    begin = index_of(children[range->begin]);
    end = index_of(last) + tree.subtree_size(last);
  }
  std::vector<std::string> texts;
  for (std::size_t i = begin; i < end; ++i) {
    const DomNode& n = tree.nodes()[i];
    if (n.is_text()) texts.push_back(n.text);
  }
  return texts;
}

namespace {

ImageSegment make_segment(const DomTree& tree, const ImageDescriptor& image,
                          NodeId root, ImageClass c,
                          std::optional<ChildRange> range = {}) {
  ImageSegment s;
  s.root = root;
  s.child_range = range;
  s.images.push_back(image);
  s.image_class = c;
  s.context_texts = collect_texts(tree, root, range);
  s.page_title = tree.page_title();
  return s;
}

}  // namespace

SegmentTrace trace_segment(StructureAnalyzer& analyzer,
                           const ImageDescriptor& image) {
  const DomTree& tree = analyzer.tree();
  if (!tree.contains(image.node) || !tree.node(image.node).is_image()) {
    throw ContractError("find_segment needs an image node");
  }

  SegmentTrace trace;
  TraversalState& st = trace.state;
  st.child = image.node;
  st.parent = tree.node(image.node).parent;

  while (st.parent) {
    const NodeId parent = *st.parent;
    const SubtreeCounts counts = tree.counts(parent);
    st.state_img = counts.images;
    st.state_text = counts.texts;

    if (st.state_text != st.state && st.state_img > 0 && st.state_text > 0) {
      if (st.state_changed_twice) {
        trace.second_change = parent;
        if (analyzer.is_listed_context(parent, st.child)) {
          // The smaller section found at the first change.
          trace.segment = make_segment(tree, image, *st.first_change_node,
                                       ImageClass::kListed);
        } else {
          trace.segment =
              make_segment(tree, image, parent, ImageClass::kUnlisted);
        }
        return trace;
      }
      st.first_change_node = parent;
      trace.first_change = parent;
      if (st.state_img >= 2) {
        if (const auto& plan = analyzer.semi_listed_partition(parent)) {
          const std::size_t slot = tree.child_index(st.child);
          for (const ChildRange& r : plan->ranges) {
            if (r.contains(slot)) {
              trace.segment = make_segment(tree, image, parent,
                                           ImageClass::kSemiListed, r);
              return trace;
            }
          }
        }
      }
      st.state = st.state_text;
      st.state_changed_twice = true;
    }
    st.child = parent;
    st.parent = tree.node(parent).parent;
  }

  // Ran out of ancestors after at most one change.
  if (st.first_change_node) {
    trace.segment = make_segment(tree, image, *st.first_change_node,
                                 ImageClass::kUnlisted);
  }
  return trace;
}

SegmentTrace trace_segment(const DomTree& tree, const ImageDescriptor& image,
                           double tolerance) {
  StructureAnalyzer analyzer(tree, tolerance);
  return trace_segment(analyzer, image);
}

std::optional<ImageSegment> find_segment(const DomTree& tree,
                                         const ImageDescriptor& image,
                                         double tolerance) {
  return trace_segment(tree, image, tolerance).segment;
}

PageSegmentation segment_page(const DomTree& tree, const FilterPolicy& policy,
                              double tolerance) {
  policy.Validate();
  StructureAnalyzer analyzer(tree, tolerance);
  PageSegmentation page;

  using Key = std::tuple<NodeId, bool, std::size_t, std::size_t>;
  std::map<Key, std::size_t> by_key;
  for (const DomNode& n : tree.nodes()) {
    if (!n.is_image()) continue;
    ImageDescriptor image = describe_image(tree, n.id);
    if (!is_valid_image(image, policy)) {
      page.skipped.push_back({n.id, image.src, SkipReason::kFilteredInvalid});
      continue;
    }
    std::optional<ImageSegment> segment =
        trace_segment(analyzer, image).segment;
    if (!segment) {
      page.skipped.push_back({n.id, image.src, SkipReason::kNoTextContext});
      continue;
    }
    const Key key{segment->root, segment->child_range.has_value(),
                  segment->child_range ? segment->child_range->begin : 0,
                  segment->child_range ? segment->child_range->end : 0};
    auto [it, inserted] = by_key.emplace(key, page.segments.size());
    if (inserted) {
      page.segments.push_back(std::move(*segment));
    } else {
      page.segments[it->second].images.push_back(std::move(image));
    }
  }

  std::vector<ImageSegment> ordered;
  ordered.reserve(page.segments.size());
  for (const auto& [key, index] : by_key) {
    ordered.push_back(std::move(page.segments[index]));
  }
  page.segments = std::move(ordered);
  return page;
}

}  // namespace imgseg
