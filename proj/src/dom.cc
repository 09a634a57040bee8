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

#include "imgseg/dom.h"

#include <string>
#include <utility>

#include "imgseg/errors.h"

namespace imgseg {

std::optional<std::string_view> DomNode::attribute(
    std::string_view name) const {
  auto it = attributes.find(std::string(name));
  if (it == attributes.end()) return std::nullopt;
  return std::string_view(it->second);
}

const DomNode& DomTree::node(NodeId id) const {
  if (!contains(id)) {
    throw LookupError("unknown node id " + std::to_string(index_of(id)));
  }
  return nodes_[index_of(id)];
}

SubtreeCounts DomTree::counts(NodeId id) const {
  node(id);
  return counts_[index_of(id)];
}

std::size_t DomTree::subtree_size(NodeId id) const {
  node(id);
  return sizes_[index_of(id)];
}

int DomTree::depth(NodeId id) const {
  node(id);
  return depths_[index_of(id)];
}

bool DomTree::is_ancestor_or_self(NodeId ancestor, NodeId n) const {
  const std::size_t a = index_of(ancestor);
  const std::size_t i = index_of(n);
  return i >= a && i < a + subtree_size(ancestor);
}

std::size_t DomTree::child_index(NodeId id) const {
  node(id);
  return child_indices_[index_of(id)];
}

DomTreeBuilder::DomTreeBuilder(std::string root_tag,
                               Attributes root_attributes) {
  DomNode root;
  root.kind = NodeKind::kElement;
  root.tag = std::move(root_tag);
  root.attributes = std::move(root_attributes);
  nodes_.push_back(std::move(root));
}

const DomNode& DomTreeBuilder::node(NodeId handle) const {
  if (index_of(handle) >= nodes_.size()) {
    throw LookupError("unknown builder handle " +
                      std::to_string(index_of(handle)));
  }
  return nodes_[index_of(handle)];
}

DomNode& DomTreeBuilder::element_for_append(NodeId parent) {
  node(parent);
  DomNode& p = nodes_[index_of(parent)];
  if (!p.is_element()) {
    throw ContractError("text and image nodes cannot have children");
  }
  return p;
}

NodeId DomTreeBuilder::Append(NodeId parent, DomNode n) {
  element_for_append(parent);
  const NodeId id = node_id(nodes_.size());
  n.id = id;
  n.parent = parent;
  nodes_.push_back(std::move(n));
  nodes_[index_of(parent)].children.push_back(id);
  return id;
}

NodeId DomTreeBuilder::AddElement(NodeId parent, std::string tag,
                                  Attributes attributes) {
  if (tag == "img") return AddImage(parent, std::move(attributes));
  DomNode n;
  n.kind = NodeKind::kElement;
  n.tag = std::move(tag);
  n.attributes = std::move(attributes);
  return Append(parent, std::move(n));
}

NodeId DomTreeBuilder::AddText(NodeId parent, std::string_view text) {
  DomNode n;
  n.kind = NodeKind::kText;
  n.text = collapse_whitespace(text);
  if (n.text.empty()) throw ContractError("text node is empty");
  return Append(parent, std::move(n));
}

NodeId DomTreeBuilder::AddImage(NodeId parent, Attributes attributes) {
  DomNode n;
  n.kind = NodeKind::kImage;
  n.tag = "img";
  n.attributes = std::move(attributes);
  return Append(parent, std::move(n));
}

void DomTreeBuilder::MergeAttributes(NodeId element,
                                     const Attributes& attributes) {
  DomNode& e = element_for_append(element);
  for (const auto& [name, value] : attributes) e.attributes.emplace(name, value);
}

DomTree DomTreeBuilder::Build(std::vector<NodeId>* remap) const {
  const std::size_t n = nodes_.size();
  std::vector<NodeId> order;  // Preorder list of builder handles.
  order.reserve(n);
  std::vector<NodeId> stack{root()};
  while (!stack.empty()) {
    const NodeId h = stack.back();
    stack.pop_back();
    order.push_back(h);
    const auto& kids = nodes_[index_of(h)].children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }

  std::vector<NodeId> final_id(n);
  for (std::size_t i = 0; i < order.size(); ++i) {
    final_id[index_of(order[i])] = node_id(i);
  }

  DomTree tree;
  tree.nodes_.resize(n);
  tree.counts_.assign(n, SubtreeCounts{});
  tree.sizes_.assign(n, 1);
  tree.depths_.assign(n, 0);
  tree.child_indices_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    DomNode copy = nodes_[index_of(order[i])];
    copy.id = node_id(i);
    if (copy.parent) copy.parent = final_id[index_of(*copy.parent)];
    for (std::size_t c = 0; c < copy.children.size(); ++c) {
      copy.children[c] = final_id[index_of(copy.children[c])];
      tree.child_indices_[index_of(copy.children[c])] =
          static_cast<std::uint32_t>(c);
    }
    tree.nodes_[i] = std::move(copy);
  }

  // Depths top-down (parents precede children in preorder), sums bottom-up.
  for (std::size_t i = 1; i < n; ++i) {
    tree.depths_[i] = tree.depths_[index_of(*tree.nodes_[i].parent)] + 1;
  }
  for (std::size_t i = n; i-- > 0;) {
    const DomNode& node = tree.nodes_[i];
    if (node.is_image()) ++tree.counts_[i].images;
    if (node.is_text()) ++tree.counts_[i].texts;
    if (node.parent) {
      const std::size_t p = index_of(*node.parent);
      tree.counts_[p].images += tree.counts_[i].images;
      tree.counts_[p].texts += tree.counts_[i].texts;
      tree.sizes_[p] += tree.sizes_[i];
    }
  }

  tree.page_title_ = page_title_;
  tree.source_identifier_ = source_identifier_;
  if (remap) *remap = std::move(final_id);
  return tree;
}

std::vector<NodeId> ancestors(const DomTree& tree, NodeId node) {
  std::vector<NodeId> out;
  out.reserve(tree.depth(node));
  std::optional<NodeId> p = tree.node(node).parent;
  while (p) {
    out.push_back(*p);
    p = tree.node(*p).parent;
  }
  return out;
}

SubtreeCounts subtree_counts(const DomTree& tree, NodeId node) {
  return tree.counts(node);
}

std::string child_index_path(const DomTree& tree, NodeId node) {
  std::vector<std::size_t> steps;
  for (NodeId n = node; tree.node(n).parent; n = *tree.node(n).parent) {
    steps.push_back(tree.child_index(n));
  }
  std::string path;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    if (!path.empty()) path.push_back('/');
    path += std::to_string(*it);
  }
  return path;
}

namespace {

// Length of the whitespace sequence starting at `s[i]`, or 0.
std::size_t whitespace_at(std::string_view s, std::size_t i) {
  const unsigned char c = static_cast<unsigned char>(s[i]);
  if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
      c == '\v') {
    return 1;
  }
  // U+00A0 NO-BREAK SPACE.
  if (c == 0xC2 && i + 1 < s.size() &&
      static_cast<unsigned char>(s[i + 1]) == 0xA0) {
    return 2;
  }
  return 0;
}

}  // namespace

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < text.size();) {
    if (std::size_t w = whitespace_at(text, i); w > 0) {
      pending_space = !out.empty();
      i += w;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(text[i++]);
  }
  return out;
}

std::size_t utf8_length(std::string_view text) {
  std::size_t n = 0;
  for (char c : text) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace imgseg
