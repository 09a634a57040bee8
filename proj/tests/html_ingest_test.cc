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


#include "imgseg/html_ingest.h"

#include <fstream>
#include <random>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "imgseg/errors.h"
#include "test_support.h"

namespace imgseg {
namespace {

using testing::read_fixture;

std::vector<std::string> texts_of(const DomTree& t) {
  std::vector<std::string> out;
  for (const DomNode& n : t.nodes()) {
    if (n.is_text()) out.push_back(n.text);
  }
  return out;
}

int count_elements(const DomTree& t) {
  int n = 0;
  for (const DomNode& node : t.nodes()) {
    if (node.is_element() && node.tag != "html" && node.tag != "body") ++n;
  }
  return n;
}

// Same tags, kinds, texts, attributes and parent links, node by node.
void expect_same_shape(const DomTree& a, const DomTree& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const DomNode& x = a.nodes()[i];
    const DomNode& y = b.nodes()[i];
    ASSERT_EQ(x.kind, y.kind) << i;
    ASSERT_EQ(x.tag, y.tag) << i;
    ASSERT_EQ(x.text, y.text) << i;
    ASSERT_EQ(x.attributes, y.attributes) << i;
    ASSERT_EQ(x.parent, y.parent) << i;
  }
  EXPECT_EQ(a.page_title(), b.page_title());
}

TEST(ParseHtmlTest, InlineMarkupSplitsText) {
  const DomTree t = parse_html("<p>hello <b>world</b></p>", "t");
  EXPECT_EQ(texts_of(t), (std::vector<std::string>{"hello", "world"}));
  EXPECT_EQ(t.node(t.root()).tag, "html");
  EXPECT_EQ(t.node(NodeId{1}).tag, "body");
  EXPECT_EQ(t.source_identifier(), "t");
}

TEST(ParseHtmlTest, WhitespaceOnlyTextIsDropped) {
  const DomTree t = parse_html("<div>  \n\t </div><div>&nbsp;</div>", "t");
  EXPECT_TRUE(texts_of(t).empty());
  EXPECT_EQ(count_elements(t), 2);
}

TEST(ParseHtmlTest, EmptyInputIsAnError) {
  EXPECT_THROW(parse_html("", "t"), ParseError);
}

TEST(ParseHtmlTest, HeadScriptStyleAndCommentsAreStripped) {
  const DomTree t = parse_html(
      "<html><head><title> My  page </title><script>var a='<p>x</p>';"
      "</script><style>p{}</style></head><body>one<!-- c -->two"
      "<noscript>nojs</noscript> three<script>1<2</script></body></html>",
      "t");
  EXPECT_EQ(t.page_title(), "My page");
  EXPECT_EQ(texts_of(t), (std::vector<std::string>{"onetwo three"}));
}

TEST(ParseHtmlTest, ImpliedEndTags) {
  const DomTree t = parse_html(
      "<ul><li>a<li>b</ul><p>one<p>two<table><tr><td>x<td>y<tr><td>z</table>",
      "t");
  std::vector<std::string> tags;
  for (const DomNode& n : t.nodes()) {
    if (n.is_element()) tags.push_back(n.tag);
  }
  EXPECT_EQ(tags, (std::vector<std::string>{"html", "body", "ul", "li", "li",
                                            "p", "p", "table", "tr", "td",
                                            "td", "tr", "td"}));
  // Both li elements are children of the ul.
  EXPECT_EQ(t.node(NodeId{2}).children.size(), 2u);
}

TEST(ParseHtmlTest, ImagesAndAttributes) {
  const DomTree t = parse_html(
      "<A HREF='/x'><IMG SRC=\"a.jpg\" Width=80 height='60' alt=\"A &amp; B\">"
      "</A>",
      "t");
  ASSERT_EQ(t.size(), 4u);
  const DomNode& img = t.node(NodeId{3});
  ASSERT_TRUE(img.is_image());
  EXPECT_EQ(img.attribute("src"), "a.jpg");
  EXPECT_EQ(img.attribute("width"), "80");
  EXPECT_EQ(img.attribute("alt"), "A & B");
  EXPECT_EQ(t.node(NodeId{2}).attribute("href"), "/x");
}

TEST(ParseHtmlTest, AltAsTextOption) {
  IngestOptions opts;
  opts.treat_alt_as_text = true;
  const DomTree t = parse_html("<div><img src=a alt=' red  car '></div>", "t",
                               opts);
  EXPECT_EQ(texts_of(t), (std::vector<std::string>{"red car"}));
  EXPECT_TRUE(texts_of(parse_html("<img src=a alt=car>", "t")).empty());
}

TEST(ParseHtmlTest, MinTextChars) {
  IngestOptions opts;
  opts.min_text_chars = 3;
  const DomTree t = parse_html("<p>ab</p><p>abc</p><p>\xc3\xa9\xc3\xa9</p>",
                               "t", opts);
  EXPECT_EQ(texts_of(t), (std::vector<std::string>{"abc"}));
}

TEST(ParseHtmlTest, OptionsAreValidated) {
  IngestOptions opts;
  opts.strip_tags.insert("img");
  EXPECT_THROW(parse_html("<p>x</p>", "t", opts), ContractError);
  IngestOptions zero;
  zero.min_text_chars = 0;
  EXPECT_THROW(zero.Validate(), ContractError);
}

TEST(ParseHtmlTest, EntitiesDecode) {
  const DomTree t =
      parse_html("<p>&pound;5 &lt;b&gt; &#233;&#x2014; &copy &bogus;</p>", "t");
  EXPECT_EQ(texts_of(t),
            (std::vector<std::string>{"\xc2\xa3" "5 <b> \xc3\xa9\xe2\x80\x94 "
                                      "\xc2\xa9 &bogus;"}));
}

TEST(DecodeDocumentTest, Latin1Declared) {
  const std::string page =
      "<meta charset=\"iso-8859-1\"><p>caf\xe9</p>";
  const DomTree t = parse_html(page, "t");
  EXPECT_EQ(texts_of(t), (std::vector<std::string>{"caf\xc3\xa9"}));
}

TEST(DecodeDocumentTest, InvalidUtf8IsReplaced) {
  EXPECT_EQ(decode_document("a\xff" "b"), "a\xef\xbf\xbd" "b");
  EXPECT_EQ(decode_document("caf\xc3\xa9"), "caf\xc3\xa9");
}

TEST(FixtureCountsTest, MatchReferenceParser) {
  const auto expected =
      nlohmann::json::parse(read_fixture("expected_counts.json"));
  for (const auto& [name, counts] : expected.items()) {
    SCOPED_TRACE(name);
    const DomTree t = parse_html(read_fixture("pages/" + name), name);
    int images = 0;
    int texts = 0;
    for (const DomNode& n : t.nodes()) {
      images += n.is_image();
      texts += n.is_text();
    }
    EXPECT_EQ(count_elements(t), counts["elements"].get<int>());
    EXPECT_EQ(images, counts["images"].get<int>());
    EXPECT_EQ(texts, counts["texts"].get<int>());
    EXPECT_EQ(t.page_title(), counts["title"].get<std::string>());
  }
}

TEST(RoundTripTest, FixturesReparseToSameShape) {
  for (const char* name : {"shop.html", "unlisted_profile.html",
                           "semilisted_news.html", "listed_grid.html",
                           "news_article.html"}) {
    SCOPED_TRACE(name);
    const DomTree t =
        parse_html(read_fixture(std::string("pages/") + name), name);
    expect_same_shape(t, parse_html(to_html(t), name));
  }
}

TEST(RoundTripTest, RandomTagSoup) {
  std::mt19937 rng(11);
  for (int round = 0; round < 300; ++round) {
    const std::string soup = testing::random_html(rng, 60);
    SCOPED_TRACE(soup);
    const DomTree t = parse_html(soup, "soup");
    const std::string once = to_html(t);
    expect_same_shape(t, parse_html(once, "soup"));
    EXPECT_EQ(once, to_html(parse_html(once, "soup")));
  }
}

}  // namespace
}  // namespace imgseg
