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

#include "imgseg/structure.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "imgseg/errors.h"

namespace imgseg {

namespace {

std::size_t similarity_limit(std::size_t longest, double tolerance) {
  return static_cast<std::size_t>(
      std::floor(tolerance * static_cast<double>(longest) + 1e-9));
}

std::size_t diff(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

}  // namespace

ShapeSignature shape_signature(const DomTree& tree, NodeId node) {
  ShapeSignature sig;
  const std::size_t begin = index_of(node);
  const std::size_t n = tree.subtree_size(node);
  sig.tokens.reserve(n);
  // A subtree occupies a contiguous block of preorder ids.
  for (std::size_t i = begin; i < begin + n; ++i) {
    const DomNode& d = tree.nodes()[i];
    switch (d.kind) {
      case NodeKind::kText: sig.tokens.emplace_back(kTextToken); break;
      case NodeKind::kImage: sig.tokens.emplace_back(kImageToken); break;
      case NodeKind::kElement: sig.tokens.push_back(d.tag); break;
    }
  }
  return sig;
}

std::size_t bounded_edit_distance(std::span<const std::string> a,
                                  std::span<const std::string> b,
                                  std::size_t limit) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t cap = limit + 1;
  if (diff(n, m) > limit) return cap;
  if (n == 0) return std::min(m, cap);
  if (m == 0) return std::min(n, cap);

  // Only cells within `limit` of the diagonal can hold values <= limit.
  std::vector<std::size_t> prev(m + 1, cap), cur(m + 1, cap);
  for (std::size_t j = 0; j <= std::min(m, limit); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t lo = i > limit ? i - limit : 1;
    const std::size_t hi = std::min(m, i + limit);
    cur[lo - 1] = (lo == 1 && i <= limit) ? i : cap;
    std::size_t row_min = cur[lo - 1];
    for (std::size_t j = lo; j <= hi; ++j) {
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      std::size_t v = std::min({prev[j - 1] + cost, prev[j] + 1, cur[j - 1] + 1});
      cur[j] = std::min(v, cap);
      row_min = std::min(row_min, cur[j]);
    }
    if (hi + 1 <= m) cur[hi + 1] = cap;
    if (row_min >= cap) return cap;
    std::swap(prev, cur);
  }
  return std::min(prev[m], cap);
}

double normalized_edit_distance(const ShapeSignature& a,
                                const ShapeSignature& b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  const std::size_t d = bounded_edit_distance(a.tokens, b.tokens, longest);
  return static_cast<double>(d) / static_cast<double>(longest);
}

bool signatures_similar(const ShapeSignature& a, const ShapeSignature& b,
                        double tolerance) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return true;
  const std::size_t limit = similarity_limit(longest, tolerance);
  return bounded_edit_distance(a.tokens, b.tokens, limit) <= limit;
}

bool is_listed_context(const DomTree& tree, NodeId parent, NodeId child,
                       double tolerance) {
  StructureAnalyzer analyzer(tree, tolerance);
  return analyzer.is_listed_context(parent, child);
}

std::optional<PartitionPlan> find_semi_listed_partition(const DomTree& tree,
                                                        NodeId node,
                                                        double tolerance) {
  StructureAnalyzer analyzer(tree, tolerance);
  return analyzer.semi_listed_partition(node);
}

StructureAnalyzer::StructureAnalyzer(const DomTree& tree, double tolerance)
    : tree_(tree), tolerance_(tolerance) {
  if (!(tolerance >= 0.0 && tolerance <= 1.0)) {
    throw ContractError("tolerance must lie in [0, 1]");
  }
}

const ShapeSignature& StructureAnalyzer::signature(NodeId node) {
  auto it = signatures_.find(node);
  if (it == signatures_.end()) {
    it = signatures_.emplace(node, shape_signature(tree_, node)).first;
  }
  return it->second;
}

bool StructureAnalyzer::is_listed_context(NodeId parent, NodeId child) {
  const DomNode& c = tree_.node(child);
  tree_.node(parent);
  if (!c.parent || *c.parent != parent) {
    throw ContractError("child is not a child of parent");
  }
  const std::size_t child_size = tree_.subtree_size(child);
  for (NodeId sibling : tree_.node(parent).children) {
    if (sibling == child || tree_.counts(sibling).images == 0) continue;
    // Sizes alone can rule a sibling out before building its signature.
    const std::size_t sibling_size = tree_.subtree_size(sibling);
    const std::size_t longest = std::max(child_size, sibling_size);
    if (diff(child_size, sibling_size) > similarity_limit(longest, tolerance_)) {
      continue;
    }
    if (signatures_similar(signature(child), signature(sibling), tolerance_)) {
      return true;
    }
  }
  return false;
}

const std::optional<PartitionPlan>& StructureAnalyzer::semi_listed_partition(
    NodeId node) {
  auto it = partitions_.find(node);
  if (it == partitions_.end()) {
    it = partitions_.emplace(node, compute_partition(node)).first;
  }
  return it->second;
}

ShapeSignature StructureAnalyzer::range_signature(
    const std::vector<NodeId>& children, ChildRange range) {
  ShapeSignature out;
  for (std::size_t i = range.begin; i < range.end; ++i) {
    const auto& tokens = signature(children[i]).tokens;
    out.tokens.insert(out.tokens.end(), tokens.begin(), tokens.end());
  }
  return out;
}

std::optional<PartitionPlan> StructureAnalyzer::compute_partition(NodeId node) {
  const DomNode& n = tree_.node(node);
  if (!n.is_element() || tree_.counts(node).images < 2) {
    throw ContractError("partition requires an element holding >= 2 images");
  }
  const std::vector<NodeId>& children = n.children;
  std::vector<std::size_t> anchors;
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (tree_.counts(children[i]).images > 0) anchors.push_back(i);
  }
  if (anchors.size() < 2) return std::nullopt;

  // Every unit starts `lead` children before its anchor. The lead may not
  // reach back into the previous unit's anchor.
  std::size_t max_lead = anchors[0];
  for (std::size_t j = 1; j < anchors.size(); ++j) {
    max_lead = std::min(max_lead, anchors[j] - anchors[j - 1] - 1);
  }
  auto ranges_for = [&](std::size_t lead) {
    std::vector<ChildRange> ranges;
    for (std::size_t j = 0; j < anchors.size(); ++j) {
      const std::size_t end =
          j + 1 < anchors.size() ? anchors[j + 1] - lead : children.size();
      ranges.push_back({anchors[j] - lead, end});
    }
    return ranges;
  };

  // Pick the lead whose first two units match best; ties go to the longer
  // lead (earlier start). Scanning from the longest lead and accepting only
  // strict improvements implements the tie rule.
  std::size_t best_lead = max_lead;
  std::size_t best_distance = std::numeric_limits<std::size_t>::max();
  for (std::size_t lead = max_lead + 1; lead-- > 0 && best_distance > 0;) {
    const auto ranges = ranges_for(lead);
    const ShapeSignature first = range_signature(children, ranges[0]);
    const ShapeSignature second = range_signature(children, ranges[1]);
    const std::size_t longest = std::max(first.size(), second.size());
    const std::size_t limit =
        best_distance == std::numeric_limits<std::size_t>::max()
            ? longest
            : std::min(longest, best_distance - 1);
    const std::size_t d = bounded_edit_distance(first.tokens, second.tokens, limit);
    if (d <= limit && d < best_distance) {
      best_distance = d;
      best_lead = lead;
    }
  }

  PartitionPlan plan{node, ranges_for(best_lead)};
  std::vector<ShapeSignature> sigs;
  sigs.reserve(plan.ranges.size());
  for (const ChildRange& r : plan.ranges) {
    int texts = 0;
    for (std::size_t i = r.begin; i < r.end; ++i) {
      texts += tree_.counts(children[i]).texts;
    }
    if (texts == 0) return std::nullopt;
    sigs.push_back(range_signature(children, r));
  }
  for (std::size_t a = 0; a < sigs.size(); ++a) {
    for (std::size_t b = a + 1; b < sigs.size(); ++b) {
      if (!signatures_similar(sigs[a], sigs[b], tolerance_)) {
        return std::nullopt;
      }
    }
  }
  return plan;
}

}  // namespace imgseg
