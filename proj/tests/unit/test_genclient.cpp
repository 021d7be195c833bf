#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "synthcoll/error.hpp"
#include "synthcoll/genclient/ledger.hpp"
#include "synthcoll/genclient/list_parser.hpp"
#include "synthcoll/genclient/prompts.hpp"
#include "synthcoll/genclient/provider.hpp"

using namespace synthcoll;
using namespace synthcoll::genclient;

TEST(Prompts, InitTemplate) {
  EXPECT_EQ(render_prompt(PromptKind::kInit, {{"description", "D"}, {"document_type", "long text"}}),
            "D. Can you write a long text about that?");
  EXPECT_EQ(render_prompt(PromptKind::kInit, {{"description", "D."}, {"document_type", "long text"}}),
            "D. Can you write a long text about that?");
}

TEST(Prompts, SubtopicsTemplateWithDefaultCount) {
  EXPECT_EQ(render_prompt(PromptKind::kSubtopics, {}),
            "Can you write 100 subtopics related to this? Please be as specific as possible.");
  EXPECT_EQ(render_prompt(PromptKind::kSubtopics, {{"count", "10"}}),
            "Can you write 10 subtopics related to this? Please be as specific as possible.");
}

TEST(Prompts, DocFromSubtopicTemplate) {
  EXPECT_EQ(render_prompt(PromptKind::kDocFromSubtopic, {{"subtopic", "S"}, {"description", "D"}}),
            "Can you write a long text with a title about S, within the scope of D ?");
}

TEST(Prompts, AlteredTopicsTemplate) {
  EXPECT_EQ(render_prompt(PromptKind::kAlteredTopics, {{"masked_description", "M"}, {"description", "D"}}),
            "Can you generate 10 variants of the next sentence by filling [MASK]: M\n\nExample: D");
}

TEST(Prompts, RandomDocTemplateAndNames) {
  EXPECT_EQ(render_prompt(PromptKind::kRandomDoc, {{"document_type", "news article"}}),
            "Write me a news article about any topic");
  EXPECT_EQ(parse_prompt_kind(prompt_kind_name(PromptKind::kAlteredTopics)), PromptKind::kAlteredTopics);
  const std::vector<std::string> want{"subtopic", "description"};
  EXPECT_EQ(prompt_placeholders(PromptKind::kDocFromSubtopic), want);
}

TEST(Prompts, MissingBindingNamesPlaceholder) {
  try {
    render_prompt(PromptKind::kDocFromSubtopic, {{"subtopic", "S"}});
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("'description'"), std::string::npos);
  }
}

TEST(ListParser, ParenthesisNumbering) {
  const auto l = parse_numbered_list("1) foo\n2) bar", 2);
  EXPECT_EQ(l.items, (std::vector<std::string>{"foo", "bar"}));
  EXPECT_EQ(l.shortfall, 0u);
}

TEST(ListParser, DottedNumberingKeepsItemText) {
  const auto l = parse_numbered_list(
      "1. The significance of the Neolithic era in human history\n"
      "2. How scientists determine the age of ancient artifacts and fossils",
      2);
  ASSERT_EQ(l.items.size(), 2u);
  EXPECT_EQ(l.items[0], "The significance of the Neolithic era in human history");
}

TEST(ListParser, ShortfallIsRecorded) {
  std::string text = "Here are some subtopics:\n\n";
  for (int i = 1; i <= 87; ++i) text += std::to_string(i) + ". item " + std::to_string(i) + "\n";
  const auto l = parse_numbered_list(text, 100);
  EXPECT_EQ(l.items.size(), 87u);
  EXPECT_EQ(l.shortfall, 13u);
}

TEST(ListParser, DashesAndNoItems) {
  EXPECT_EQ(parse_numbered_list("- a\n- b\n3 - c", 3).items, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_TRUE(parse_numbered_list("", 3).items.empty());
  try {
    parse_numbered_list("Sorry, I cannot help with that.", 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "no list items found");
  }
}

TEST(MockProvider, SamePromptSameText) {
  const MockProvider p;
  GenRequest r;
  r.prompt = "Write me a long text about any topic";
  const auto a = p.generate(r);
  const auto b = p.generate(r);
  EXPECT_EQ(a.text, b.text);
  EXPECT_FALSE(a.usage_estimated);
  EXPECT_GT(a.usage.completion_tokens, 0u);
  EXPECT_EQ(a.model_id, "mock-1");
}

TEST(MockProvider, SaltChangesText) {
  MockOptions o1, o2;
  o1.seed_salt = "s1";
  o2.seed_salt = "s2";
  GenRequest r;
  r.prompt = "Write me a long text about any topic";
  EXPECT_NE(MockProvider(o1).generate(r).text, MockProvider(o2).generate(r).text);
}

TEST(MockProvider, AnswersListPromptsWithNumberedLists) {
  const MockProvider p;
  GenRequest r;
  r.prompt = "Glaciers.\n\n" + render_prompt(PromptKind::kSubtopics, {{"count", "12"}});
  const auto l = parse_numbered_list(p.generate(r).text, 12);
  EXPECT_EQ(l.items.size(), 12u);
  r.prompt = render_prompt(PromptKind::kAlteredTopics,
                           {{"count", "7"}, {"masked_description", "New methods of producing [MASK]"},
                            {"description", "New methods of producing steel"}});
  const auto v = parse_numbered_list(p.generate(r).text, 7);
  ASSERT_EQ(v.items.size(), 7u);
  for (const auto& item : v.items) EXPECT_EQ(item.find("[MASK]"), std::string::npos) << item;
}

TEST(MockProvider, DocumentsHaveTitleLine) {
  const MockProvider p;
  GenRequest r;
  r.prompt = "Glacier retreat in the Alps. Can you write a long text about that?";
  const auto text = p.generate(r).text;
  EXPECT_EQ(text.rfind("Title: ", 0), 0u);
}

TEST(Provider, RejectsEmptyPrompt) {
  const MockProvider p;
  EXPECT_THROW(p.generate(GenRequest{}), PreconditionError);
  GenRequest r;
  r.prompt = "x";
  r.max_output_tokens = 0;
  EXPECT_THROW(p.generate(r), PreconditionError);
}

TEST(EstimateTokens, CeilOfCodePointsOverFour) {
  EXPECT_EQ(estimate_tokens(""), 0u);
  EXPECT_EQ(estimate_tokens("abcd"), 1u);
  EXPECT_EQ(estimate_tokens("abcde"), 2u);
  EXPECT_EQ(estimate_tokens("éééé"), 1u);
}

TEST(Ledger, SubtotalsSumToTotals) {
  UsageLedger l;
  l.add("INIT_RELEVANT", "INIT", {10, 100});
  l.add("TRICKY_NONREL", "TRICKY_DOC", {5, 50}, true);
  l.add("INIT_RELEVANT", "INIT", {1, 1});
  const auto t = l.totals();
  EXPECT_EQ(t.prompt_tokens, 16u);
  EXPECT_EQ(t.completion_tokens, 151u);
  EXPECT_EQ(l.requests(), 3u);
  EXPECT_EQ(l.estimated_requests(), 1u);
  std::uint64_t sum = 0;
  for (const auto& [k, u] : l.subtotals()) sum += u.total();
  EXPECT_EQ(sum, t.total());
  EXPECT_EQ(l.subtotals().at("INIT_RELEVANT/INIT").prompt_tokens, 11u);
}

TEST(Ledger, JsonRoundTripAndMerge) {
  UsageLedger a;
  a.add("RANDOM", "RANDOM_DOC", {3, 4});
  const auto b = UsageLedger::from_json(a.to_json());
  EXPECT_EQ(b.to_json(), a.to_json());
  UsageLedger c;
  c.merge(a);
  c.merge(b);
  EXPECT_EQ(c.totals().total(), 14u);
  EXPECT_THROW(UsageLedger::from_json("{not json"), ParseError);
}

TEST(Cost, ReportedTokenCounts) {
  const Usage u{1'924'000, 61'700'000};
  const auto c = cost_estimate(u, PriceTable{});
  EXPECT_NEAR(c.usd, 126.286, 1e-9);
  EXPECT_NEAR(c.kwh, 63'624'000 * 0.015 / 1000.0, 1e-9);
}

TEST(Cost, EnergyForSixtyThreePointSixMillionTokens) {
  const auto c = cost_estimate(Usage{0, 63'600'000}, PriceTable{});
  EXPECT_NEAR(c.kwh, 954.0, 1e-9);
}

TEST(Cost, ZeroTokens) {
  const auto c = cost_estimate(UsageLedger{}, PriceTable{});
  EXPECT_EQ(c.usd, 0.0);
  EXPECT_EQ(c.kwh, 0.0);
}
