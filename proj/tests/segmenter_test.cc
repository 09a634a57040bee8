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
#include <random>

#include <gtest/gtest.h>

#include "imgseg/errors.h"
#include "imgseg/html_ingest.h"
#include "test_support.h"

namespace imgseg {
namespace {

using testing::oracle_find_segment;
using testing::random_tree;
using testing::read_fixture;

DomTree fixture(const std::string& name) {
  return parse_html(read_fixture("pages/" + name), name);
}

std::vector<std::string> srcs(const ImageSegment& s) {
  std::vector<std::string> out;
  for (const auto& i : s.images) out.push_back(i.src);
  return out;
}

TEST(SegmentPageTest, ListedTable) {
  const DomTree t = fixture("listed_grid.html");
  const PageSegmentation page = segment_page(t);
  ASSERT_EQ(page.segments.size(), 4u);
  for (const ImageSegment& s : page.segments) {
    EXPECT_EQ(s.image_class, ImageClass::kListed);
    EXPECT_EQ(t.node(s.root).tag, "table");
    EXPECT_EQ(s.images.size(), 1u);
    EXPECT_EQ(s.context_texts.size(), 2u);
    EXPECT_EQ(s.page_title, "Featured Products");
  }
  EXPECT_EQ(srcs(page.segments[0]), std::vector<std::string>{"/img/lamp.jpg"});
  EXPECT_EQ(page.segments[0].context_texts,
            (std::vector<std::string>{"Brass desk lamp", "$49.00"}));
  EXPECT_TRUE(page.skipped.empty());
}

TEST(SegmentPageTest, UnlistedProfile) {
  const DomTree t = fixture("unlisted_profile.html");
  const PageSegmentation page = segment_page(t);
  ASSERT_EQ(page.segments.size(), 1u);
  const ImageSegment& s = page.segments[0];
  EXPECT_EQ(s.image_class, ImageClass::kUnlisted);
  EXPECT_EQ(t.node(s.root).attribute("id"), "profile");
  EXPECT_EQ(s.context_texts.size(), 2u);
  EXPECT_EQ(s.context_texts[0], "Jane Smith, 2009");
  EXPECT_EQ(s.images[0].alt, "Portrait of Jane");
}

TEST(SegmentPageTest, SemiListedNews) {
  const DomTree t = fixture("semilisted_news.html");
  const PageSegmentation page = segment_page(t);
  ASSERT_EQ(page.segments.size(), 2u);
  EXPECT_EQ(page.segments[0].child_range, (ChildRange{1, 5}));
  EXPECT_EQ(page.segments[1].child_range, (ChildRange{5, 9}));
  for (const ImageSegment& s : page.segments) {
    EXPECT_EQ(s.image_class, ImageClass::kSemiListed);
    EXPECT_EQ(t.node(s.root).attribute("class"), "news");
    EXPECT_EQ(s.context_texts.size(), 2u);
  }
  EXPECT_EQ(page.segments[1].context_texts[0], "New sports centre opens");
}

TEST(SegmentPageTest, ShopPage) {
  const DomTree t = fixture("shop.html");
  const PageSegmentation page = segment_page(t);
  ASSERT_EQ(page.segments.size(), 9u);
  const auto listed = std::count_if(
      page.segments.begin(), page.segments.end(),
      [](const ImageSegment& s) { return s.image_class == ImageClass::kListed; });
  EXPECT_EQ(listed, 8);
  EXPECT_EQ(page.segments.back().image_class, ImageClass::kUnlisted);
  ASSERT_EQ(page.skipped.size(), 2u);
  for (const SkippedImage& s : page.skipped) {
    EXPECT_EQ(s.reason, SkipReason::kFilteredInvalid);
  }
  EXPECT_EQ(page.skipped[0].src, "/img/icon-cart.gif");
}

TEST(SegmentPageTest, NoTextMeansNoSegment) {
  DomTreeBuilder b;
  const NodeId body = b.AddElement(b.root(), "body");
  const NodeId img = b.AddImage(b.AddElement(body, "div"), {{"src", "a"}});
  const DomTree t = b.Build();
  EXPECT_EQ(find_segment(t, describe_image(t, img)), std::nullopt);
  const PageSegmentation page = segment_page(t);
  EXPECT_TRUE(page.segments.empty());
  ASSERT_EQ(page.skipped.size(), 1u);
  EXPECT_EQ(page.skipped[0].reason, SkipReason::kNoTextContext);
}

TEST(SegmentPageTest, NoImages) {
  const DomTree t = parse_html("<p>just text</p>", "t");
  const PageSegmentation page = segment_page(t);
  EXPECT_TRUE(page.segments.empty());
  EXPECT_TRUE(page.skipped.empty());
}

TEST(SegmentPageTest, SharedBoundaryMergesImages) {
  const DomTree t =
      parse_html("<div><img src=a><img src=b><p>caption</p></div>", "t");
  const PageSegmentation page = segment_page(t);
  ASSERT_EQ(page.segments.size(), 1u);
  EXPECT_EQ(srcs(page.segments[0]), (std::vector<std::string>{"a", "b"}));
}

TEST(SegmentPageTest, FirstChangeAtRootIsUnlisted) {
  DomTreeBuilder b;
  b.AddImage(b.root(), {{"src", "a"}});
  b.AddText(b.root(), "hello");
  const DomTree t = b.Build();
  const auto trace = trace_segment(t, describe_image(t, NodeId{1}));
  ASSERT_TRUE(trace.segment.has_value());
  EXPECT_EQ(trace.segment->root, t.root());
  EXPECT_EQ(trace.segment->image_class, ImageClass::kUnlisted);
  EXPECT_EQ(trace.first_change, t.root());
  EXPECT_EQ(trace.second_change, std::nullopt);
}

TEST(FindSegmentTest, RejectsNonImages) {
  const DomTree t = parse_html("<p>x</p>", "t");
  ImageDescriptor d;
  d.node = NodeId{2};
  EXPECT_THROW(find_segment(t, d), ContractError);
  d.node = NodeId{50};
  EXPECT_THROW(find_segment(t, d), ContractError);
}

TEST(ImageClassTest, Names) {
  for (ImageClass c :
       {ImageClass::kUnlisted, ImageClass::kListed, ImageClass::kSemiListed}) {
    EXPECT_EQ(parse_image_class(to_string(c)), c);
  }
  EXPECT_EQ(to_string(ImageClass::kSemiListed), "semi-listed");
  EXPECT_EQ(parse_image_class("other"), std::nullopt);
  EXPECT_EQ(to_string(SkipReason::kNoTextContext), "no_text_context");
}

TEST(FindSegmentPropertyTest, AgreesWithOracleAndInvariantsHold) {
  std::mt19937 rng(29);
  int found = 0;
  for (int round = 0; round < 150; ++round) {
    const DomTree t = random_tree(rng, 200);
    for (const DomNode& n : t.nodes()) {
      if (!n.is_image()) continue;
      const ImageDescriptor d = describe_image(t, n.id);
      const SegmentTrace trace = trace_segment(t, d);
      const auto expected = oracle_find_segment(t, n.id, kDefaultTolerance);
      ASSERT_EQ(trace.segment.has_value(), expected.found);
      ASSERT_EQ(trace.first_change, expected.first_change);
      ASSERT_EQ(trace.second_change, expected.second_change);
      if (trace.first_change && trace.second_change) {
        ASSERT_NE(*trace.first_change, *trace.second_change);
        ASSERT_TRUE(t.is_ancestor_or_self(*trace.second_change,
                                          *trace.first_change));
      }
      if (!trace.segment) continue;
      ++found;
      ASSERT_EQ(trace.segment->root, expected.root);
      ASSERT_EQ(trace.segment->image_class, expected.image_class);
      ASSERT_EQ(trace.segment->child_range, expected.range);
      ASSERT_TRUE(t.is_ancestor_or_self(trace.segment->root, n.id));
      ASSERT_FALSE(trace.segment->context_texts.empty());
    }
  }
  EXPECT_GT(found, 100);
}

TEST(SegmentPagePropertyTest, SegmentsAreWellFormed) {
  std::mt19937 rng(31);
  for (int round = 0; round < 150; ++round) {
    const DomTree t = random_tree(rng, 200);
    const PageSegmentation page = segment_page(t);
    EXPECT_EQ(segment_page(t).segments.size(), page.segments.size());
    for (std::size_t i = 0; i < page.segments.size(); ++i) {
      const ImageSegment& s = page.segments[i];
      ASSERT_FALSE(s.images.empty());
      ASSERT_FALSE(s.context_texts.empty());
      for (const auto& img : s.images) {
        ASSERT_TRUE(t.is_ancestor_or_self(s.root, img.node));
      }
      if (i > 0) {
        const ImageSegment& prev = page.segments[i - 1];
        ASSERT_LE(index_of(prev.root), index_of(s.root));
        if (prev.root == s.root) {
          ASSERT_TRUE(s.child_range.has_value());
          if (prev.child_range) {
            ASSERT_LE(prev.child_range->end, s.child_range->begin);
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace imgseg
