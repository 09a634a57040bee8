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

// Normalized document tree shared by every analysis in the library.
//
// A DomTree holds three kinds of nodes: elements (internal), text leaves and
// image leaves. Node ids are dense and assigned in preorder, so comparing two
// ids compares document positions. Trees are immutable once built; per-node
// image/text counts, subtree sizes and depths are computed during
// construction and can be read from any number of threads.

#ifndef IMGSEG_DOM_H_
#define IMGSEG_DOM_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace imgseg {

enum class NodeId : std::uint32_t {};

constexpr std::size_t index_of(NodeId id) {
  return static_cast<std::size_t>(id);
}
constexpr NodeId node_id(std::size_t index) {
  return static_cast<NodeId>(static_cast<std::uint32_t>(index));
}

enum class NodeKind { kElement, kText, kImage };

using Attributes = std::map<std::string, std::string>;

struct DomNode {
  NodeId id{};
  NodeKind kind = NodeKind::kElement;
  std::string tag;          // Lowercase; "img" for images, empty for text.
  Attributes attributes;    // Elements and images only.
  std::string text;         // Text nodes only; never empty.
  std::vector<NodeId> children;
  std::optional<NodeId> parent;

  bool is_element() const { return kind == NodeKind::kElement; }
  bool is_text() const { return kind == NodeKind::kText; }
  bool is_image() const { return kind == NodeKind::kImage; }

  // Value of attribute `name`, or nullopt when absent.
  std::optional<std::string_view> attribute(std::string_view name) const;
};

struct SubtreeCounts {
  int images = 0;
  int texts = 0;

  friend bool operator==(const SubtreeCounts&, const SubtreeCounts&) = default;
};

class DomTree {
 public:
  DomTree(const DomTree&) = default;
  DomTree(DomTree&&) noexcept = default;
  DomTree& operator=(const DomTree&) = default;
  DomTree& operator=(DomTree&&) noexcept = default;

  NodeId root() const { return NodeId{0}; }
  std::size_t size() const { return nodes_.size(); }
  bool contains(NodeId id) const { return index_of(id) < nodes_.size(); }

  // Throws LookupError for ids outside the tree.
  const DomNode& node(NodeId id) const;

  // Cached image and text counts of the subtree rooted at `id`, inclusive.
  SubtreeCounts counts(NodeId id) const;
  // Number of nodes in the subtree rooted at `id`, inclusive.
  std::size_t subtree_size(NodeId id) const;
  // Distance from the root; the root has depth 0.
  int depth(NodeId id) const;

  // Preorder ids form a contiguous block: [id, id + subtree_size(id)).
  bool is_ancestor_or_self(NodeId ancestor, NodeId node) const;

  // Position of `id` within its parent's child list; 0 for the root.
  std::size_t child_index(NodeId id) const;

  const std::vector<DomNode>& nodes() const { return nodes_; }
  const std::string& page_title() const { return page_title_; }
  const std::string& source_identifier() const { return source_identifier_; }

 private:
  friend class DomTreeBuilder;
  DomTree() = default;

  std::vector<DomNode> nodes_;
  std::vector<SubtreeCounts> counts_;
  std::vector<std::uint32_t> sizes_;
  std::vector<int> depths_;
  std::vector<std::uint32_t> child_indices_;
  std::string page_title_;
  std::string source_identifier_;
};

// Assembles a tree node by node. Handles returned by the Add* calls are only
// meaningful to the builder; Build() renumbers every node into preorder and
// can report the mapping from handles to final ids.
class DomTreeBuilder {
 public:
  explicit DomTreeBuilder(std::string root_tag = "html",
                          Attributes root_attributes = {});

  NodeId root() const { return NodeId{0}; }

  NodeId AddElement(NodeId parent, std::string tag, Attributes attributes = {});
  // Collapses whitespace; throws ContractError if nothing is left.
  NodeId AddText(NodeId parent, std::string_view text);
  NodeId AddImage(NodeId parent, Attributes attributes = {});

  // Merges attributes into an existing element without overwriting.
  void MergeAttributes(NodeId element, const Attributes& attributes);

  void set_page_title(std::string title) { page_title_ = std::move(title); }
  void set_source_identifier(std::string source) {
    source_identifier_ = std::move(source);
  }

  std::size_t size() const { return nodes_.size(); }
  const DomNode& node(NodeId handle) const;

  // `remap`, when given, receives final ids indexed by builder handle.
  DomTree Build(std::vector<NodeId>* remap = nullptr) const;

 private:
  DomNode& element_for_append(NodeId parent);
  NodeId Append(NodeId parent, DomNode node);

  std::vector<DomNode> nodes_;
  std::string page_title_;
  std::string source_identifier_;
};

// Parent, grandparent, ..., root. Empty for the root.
std::vector<NodeId> ancestors(const DomTree& tree, NodeId node);

// Image and text leaves in the subtree of `node`, inclusive of `node` itself.
SubtreeCounts subtree_counts(const DomTree& tree, NodeId node);

// Slash-joined child indices from the root down to `node`, e.g. "0/1/3";
// empty for the root.
std::string child_index_path(const DomTree& tree, NodeId node);

// Collapses runs of whitespace (ASCII and U+00A0) to one space and trims.
std::string collapse_whitespace(std::string_view text);

// Number of UTF-8 code points in `text`.
std::size_t utf8_length(std::string_view text);

}  // namespace imgseg

#endif  // IMGSEG_DOM_H_
