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

// Structural comparisons between subtrees.
//
// A subtree's shape is its preorder sequence of tag names, with TEXT and IMG
// standing in for leaves. Two shapes are similar when their token-level edit
// distance, divided by the longer length, is at most a tolerance. Siblings
// with similar shapes mark listed images; a run of children that repeats
// around several images marks semi-listed images.

#ifndef IMGSEG_STRUCTURE_H_
#define IMGSEG_STRUCTURE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "imgseg/dom.h"

namespace imgseg {

inline constexpr double kDefaultTolerance = 0.2;
inline constexpr std::string_view kTextToken = "TEXT";
inline constexpr std::string_view kImageToken = "IMG";

struct ShapeSignature {
  std::vector<std::string> tokens;

  std::size_t size() const { return tokens.size(); }
  friend bool operator==(const ShapeSignature&,
                         const ShapeSignature&) = default;
};

// Half-open range of child indices.
struct ChildRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool contains(std::size_t index) const {
    return index >= begin && index < end;
  }
  friend bool operator==(const ChildRange&, const ChildRange&) = default;
  friend auto operator<=>(const ChildRange&, const ChildRange&) = default;
};

struct PartitionPlan {
  NodeId parent{};
  std::vector<ChildRange> ranges;

  friend bool operator==(const PartitionPlan&, const PartitionPlan&) = default;
};

ShapeSignature shape_signature(const DomTree& tree, NodeId node);

// Token-level Levenshtein distance, capped: returns min(distance, limit + 1).
std::size_t bounded_edit_distance(std::span<const std::string> a,
                                  std::span<const std::string> b,
                                  std::size_t limit);

// Levenshtein(a, b) / max(|a|, |b|); 0 when both are empty.
double normalized_edit_distance(const ShapeSignature& a,
                                const ShapeSignature& b);

bool signatures_similar(const ShapeSignature& a, const ShapeSignature& b,
                        double tolerance = kDefaultTolerance);

// True iff another child of `parent` holds an image and has a shape similar
// to `child`'s. Throws ContractError if `child` is not a child of `parent`.
bool is_listed_context(const DomTree& tree, NodeId parent, NodeId child,
                       double tolerance = kDefaultTolerance);

// Splits the children of `node` into repeating units, one per image-bearing
// child. Returns nullopt unless the units are mutually similar and each has
// text. Throws ContractError unless `node` is an element with >= 2 images.
std::optional<PartitionPlan> find_semi_listed_partition(
    const DomTree& tree, NodeId node, double tolerance = kDefaultTolerance);

// Memoizing front end to the functions above for repeated queries against
// one tree. Not thread-safe; use one per worker.
class StructureAnalyzer {
 public:
  StructureAnalyzer(const DomTree& tree, double tolerance);

  const DomTree& tree() const { return tree_; }
  double tolerance() const { return tolerance_; }

  const ShapeSignature& signature(NodeId node);
  bool is_listed_context(NodeId parent, NodeId child);
  const std::optional<PartitionPlan>& semi_listed_partition(NodeId node);

 private:
  ShapeSignature range_signature(const std::vector<NodeId>& children,
                                 ChildRange range);
  std::optional<PartitionPlan> compute_partition(NodeId node);

  const DomTree& tree_;
  double tolerance_;
  std::unordered_map<NodeId, ShapeSignature> signatures_;
  std::unordered_map<NodeId, std::optional<PartitionPlan>> partitions_;
};

}  // namespace imgseg

#endif  // IMGSEG_STRUCTURE_H_
