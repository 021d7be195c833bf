#include <gtest/gtest.h>

#include "synthcoll/error.hpp"
#include "synthcoll/topics.hpp"

using namespace synthcoll;

TEST(TopicParse, SgmlBlockWithClosingTags) {
  const auto t = parse_topics(
      "<top><num> Number: 402 </num><title>behavioral genetics</title>"
      "<desc>Description: What is happening...</desc></top>",
      TopicFormat::kTrecSgml);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].id, "402");
  EXPECT_EQ(t[0].title, "behavioral genetics");
  EXPECT_EQ(t[0].description, "What is happening...");
  EXPECT_FALSE(t[0].narrative.has_value());
}

TEST(TopicParse, ClassicTrecLayoutWithoutClosingTags) {
  const auto t = parse_topics(
      "<top>\n<num> Number: 301\n<title> International Organized Crime\n\n"
      "<desc> Description:\nIdentify organizations that participate in\ninternational criminal activity.\n\n"
      "<narr> Narrative:\nA relevant document must name the organization.\n</top>\n",
      TopicFormat::kTrecSgml);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].id, "301");
  EXPECT_EQ(t[0].title, "International Organized Crime");
  EXPECT_EQ(t[0].description, "Identify organizations that participate in international criminal activity.");
  ASSERT_TRUE(t[0].narrative.has_value());
  EXPECT_EQ(*t[0].narrative, "A relevant document must name the organization.");
}

TEST(TopicParse, EmptyInputGivesEmptyList) {
  EXPECT_TRUE(parse_topics("", TopicFormat::kTrecSgml).empty());
  EXPECT_TRUE(parse_topics("", TopicFormat::kJsonl).empty());
}

TEST(TopicParse, JsonlLine) {
  const auto t = parse_topics(R"({"id":"260","description":"Evidence of the existence of human life 10,000 years ago."})",
                              TopicFormat::kJsonl);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].id, "260");
  EXPECT_EQ(t[0].description, "Evidence of the existence of human life 10,000 years ago.");
}

TEST(TopicParse, MissingDescNamesOffsetAndPartialId) {
  const std::string good = "<top><num>401</num><desc>fine</desc></top>\n";
  const std::string input = good + "<top><num>402</num><title>x</title></top>";
  try {
    parse_topics(input, TopicFormat::kTrecSgml);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("'402'"), std::string::npos) << what;
    EXPECT_NE(what.find("byte " + std::to_string(good.size())), std::string::npos) << what;
    EXPECT_EQ(e.offset(), good.size());
  }
}

TEST(TopicParse, MissingNumIsAnError) {
  EXPECT_THROW(parse_topics("<top><desc>something</desc></top>", TopicFormat::kTrecSgml), ParseError);
}

TEST(TopicParse, DuplicateIdIsAnError) {
  EXPECT_THROW(parse_topics("{\"id\":\"1\",\"description\":\"a\"}\n{\"id\":\"1\",\"description\":\"b\"}",
                            TopicFormat::kJsonl),
               ParseError);
}

TEST(TopicParse, FormatNames) {
  EXPECT_EQ(parse_topic_format("trec"), TopicFormat::kTrecSgml);
  EXPECT_EQ(parse_topic_format("sgml"), TopicFormat::kTrecSgml);
  EXPECT_EQ(parse_topic_format("jsonl"), TopicFormat::kJsonl);
  EXPECT_THROW(parse_topic_format("xml"), PreconditionError);
}

TEST(TopicSerialize, EmptyJsonlIsEmptyString) {
  EXPECT_EQ(serialize_topics({}, TopicFormat::kJsonl), "");
}

TEST(TopicSerialize, RoundTripsBothFormats) {
  const std::vector<Topic> topics{{"7", "t", "a description", std::string("n")}, {"8", "", "other", {}}};
  for (const auto f : {TopicFormat::kJsonl, TopicFormat::kTrecSgml}) {
    EXPECT_EQ(parse_topics(serialize_topics(topics, f), f), topics);
  }
  const auto one = serialize_topics({topics[0]}, TopicFormat::kJsonl);
  EXPECT_EQ(std::count(one.begin(), one.end(), '\n'), 1);
}

TEST(Masking, EnvironmentalExample) {
  const Topic t{"1", "", "Countries that do not practice or ignore environmental protective measures.", {}};
  const auto m = mask_description(t);
  EXPECT_EQ(m.masked_text, "Countries that do not practice or ignore [MASK] protective measures.");
  EXPECT_EQ(m.masked_terms, std::vector<std::string>{"environmental"});
  EXPECT_EQ(m.source_topic_id, "1");
}

TEST(Masking, SteelExample) {
  const auto m = mask_description({"2", "", "New methods of producing steel", {}});
  EXPECT_EQ(m.masked_text, "New methods of producing [MASK]");
  EXPECT_EQ(m.masked_terms, std::vector<std::string>{"steel"});
}

TEST(Masking, OnlyFunctionWordsIsUnmaskable) {
  try {
    mask_description({"3", "", "the of and", {}});
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_STREQ(e.what(), "unmaskable description");
  }
}

TEST(Masking, TopTwoAndUnmaskRoundTrip) {
  const Topic t{"4", "", "New methods of producing steel in Germany", {}};
  KeywordRule rule;
  rule.max_terms = 2;
  const auto m = mask_description(t, rule);
  EXPECT_EQ(m.masked_terms.size(), 2u);
  EXPECT_EQ(unmask(m), t.description);
  // Capitalised, non-initial tokens rank first.
  EXPECT_NE(std::find(m.masked_terms.begin(), m.masked_terms.end(), "Germany"), m.masked_terms.end());
}
