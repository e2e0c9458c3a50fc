#include <cmath>

#include "doctest.h"

#include "arena/judge/content.hpp"
#include "arena/judge/report.hpp"
#include "arena/judge/strategy.hpp"
#include "test_support.hpp"

using namespace arena;
using namespace arena::judge;
using gateway::MockBackend;
using gateway::MockScript;
using CC = ContentCategory;

namespace {

dialogue::ConversationTranscript two_utterances() {
  // 6 and 4 tokens on the educator side.
  return testing::make_transcript({{Speaker::kEducator, "Take your pills. Call us soon."},
                                   {Speaker::kPatient, "Okay"},
                                   {Speaker::kEducator, "Follow up next week."}});
}

SentenceLabeling lab(std::size_t u, std::size_t s, std::vector<CC> labels) {
  SentenceLabeling l;
  l.utterance_index = u;
  l.sentence_index = s;
  l.labels = std::move(labels);
  return l;
}

}  // namespace

TEST_CASE("content category names and codes") {
  CHECK(code(CC::kReturnToED) == "c1");
  CHECK(code(CC::kFollowUp) == "c6");
  CHECK(code(CC::kNA) == "NA");
  CHECK(name(CC::kPostDischargeTreatment) == "PostDischargeTreatment");
  for (auto c : kContentCategories) {
    CHECK(content_category_from_string(code(c)) == c);
    CHECK(content_category_from_string(name(c)) == c);
  }
}

TEST_CASE("content label parsing") {
  using V = std::vector<CC>;
  CHECK(parse_content_labels("c2") == V{CC::kMedication});
  CHECK(parse_content_labels("### Classifcation : c3, c1") == V{CC::kReturnToED, CC::kDiagnosis});
  CHECK(parse_content_labels("C5") == V{CC::kTestsAndTreatments});
  CHECK(parse_content_labels("NA") == V{CC::kNA});
  CHECK(parse_content_labels("c4 and NA") == V{CC::kPostDischargeTreatment});
  CHECK(parse_content_labels("c12") == std::nullopt);
  CHECK(parse_content_labels("Follow-up") == V{CC::kFollowUp});
  CHECK(parse_content_labels("banana") == std::nullopt);
}

TEST_CASE("content judge prompt ends with the sentence") {
  const std::string p = content_judge_prompt("Take two pills daily.");
  CHECK(p.find("Take two pills daily.") != std::string::npos);
  CHECK(p.find("c6") != std::string::npos);
}

TEST_CASE("content score worked values") {
  const std::array<UtteranceCount, 1> one{{{2, 100}}};
  CHECK(content_score(one) == doctest::Approx(2.0 / std::log(100.0)).epsilon(1e-12));
  CHECK(content_score(one) == doctest::Approx(0.4343).epsilon(1e-4));
  const std::array<UtteranceCount, 2> two{{{2, 50}, {1, 20}}};
  CHECK(content_score(two) == doctest::Approx(0.4225).epsilon(1e-4));
  CHECK(log_token_denominator(1) == std::log(2.0));
  CHECK(log_token_denominator(0) == std::log(2.0));
  CHECK_THROWS_AS(content_score(std::span<const UtteranceCount>{}), EmptyTranscript);
}

TEST_CASE("content score from labelings") {
  const auto t = two_utterances();
  const std::vector<SentenceLabeling> labels{lab(0, 0, {CC::kMedication}),
                                             lab(0, 1, {CC::kReturnToED, CC::kMedication}),
                                             lab(1, 0, {CC::kFollowUp})};
  CHECK(content_score(t, labels, CC::kMedication) ==
        doctest::Approx(0.5 * (2.0 / std::log(6.0))).epsilon(1e-12));
  CHECK(content_score(t, labels, CC::kFollowUp) ==
        doctest::Approx(0.5 * (1.0 / std::log(4.0))).epsilon(1e-12));
  CHECK(content_score(t, labels, CC::kDiagnosis) == 0.0);
}

TEST_CASE("sentence classification with a scripted judge") {
  MockScript s;
  s.cycle = true;
  s.entries = {{std::string("Take your pills."), "c2"},
               {std::string("Call us soon."), "I am not sure"},
               {std::string("Follow up"), "Classification: c6"}};
  MockBackend judge(s);
  const auto labels = classify_sentences(two_utterances(), judge, testing::mock_config("j"));
  REQUIRE(labels.size() == 3);
  CHECK(labels[0].labels == std::vector<CC>{CC::kMedication});
  CHECK_FALSE(labels[1].parsed);
  CHECK(labels[1].labels == std::vector<CC>{CC::kNA});
  CHECK(labels[2].utterance_index == 1);
  CHECK(labels[2].labels == std::vector<CC>{CC::kFollowUp});
}

TEST_CASE("strategy names") {
  for (auto c : kStrategyCategories) CHECK(strategy_category_from_string(name(c)) == c);
  CHECK(label(StrategyCategory::kDecisionMaking) == "Decision making");
}

TEST_CASE("strategy reply parsing") {
  const std::string reply =
      "1. **Fostering relationship**: 4/5 | Evidence: warm greeting\n"
      "2. Gathering information - 3\n"
      "Evidence: ask open questions\n"
      "3) Providing information: 5/5\n"
      "Decision making: 2/5\n"
      "Enabling disease and treatment-related behavior: 1/5\n"
      "Responding to emotions: 3/5 | Evidence: acknowledge fear";
  const auto v = parse_strategy_reply(reply);
  for (auto c : kStrategyCategories) CHECK(v.at(c).has_value());
  CHECK(v.at(StrategyCategory::kFosteringRelationship)->likert == 4);
  CHECK(v.at(StrategyCategory::kFosteringRelationship)->evidence == "warm greeting");
  CHECK(v.at(StrategyCategory::kGatheringInformation)->evidence == "ask open questions");
  CHECK(v.at(StrategyCategory::kEnablingBehavior)->likert == 1);
  CHECK(v.raw == reply);

  const auto partial = parse_strategy_reply("Providing information: 4/5");
  CHECK_FALSE(partial.at(StrategyCategory::kDecisionMaking).has_value());

  const auto bare = parse_strategy_reply(" 3 ", StrategyCategory::kDecisionMaking);
  CHECK(bare.at(StrategyCategory::kDecisionMaking)->likert == 3);
  CHECK_THROWS_AS(parse_strategy_reply("6", StrategyCategory::kDecisionMaking), LikertOutOfRange);
  CHECK_THROWS_AS(parse_strategy_reply("Decision making: 0/5"), LikertOutOfRange);
  CHECK_THROWS_AS(parse_strategy_reply("Decision making: 7"), LikertOutOfRange);
}

TEST_CASE("strategy score normalization") {
  CHECK(normalized_strategy_score(4, std::log(403.0)) == doctest::Approx(0.6668).epsilon(1e-4));
  CHECK(normalized_strategy_score(5, 2.0) == 2.5);

  const auto t = two_utterances();
  const auto v = parse_strategy_reply("Decision making: 4/5");
  CHECK(strategy_score(t, v, StrategyCategory::kDecisionMaking) == 4.0 / std::log(10.0));
  CHECK_THROWS_AS(strategy_score(t, v, StrategyCategory::kGatheringInformation),
                  UnparseableVerdict);
  const auto patient_only = testing::make_transcript({});
  CHECK_THROWS_AS(strategy_score(patient_only, v, StrategyCategory::kDecisionMaking),
                  EmptyTranscript);

  MockBackend judge(MockScript::always("6"));
  CHECK_THROWS_AS(strategy_score(t, judge, testing::mock_config("j"), StrategyCategory::kDecisionMaking),
                  LikertOutOfRange);
}

TEST_CASE("judge sees the whole conversation once") {
  const auto t = two_utterances();
  const std::string conv = format_conversation(t);
  CHECK(conv.find("Agent: Take your pills.") != std::string::npos);
  CHECK(conv.find("Patient: Okay") != std::string::npos);
  CHECK(strategy_judge_prompt(t).find(conv) != std::string::npos);
}

TEST_CASE("judge report with the fixture judge") {
  MockBackend judge(testing::load_script("judge.json"));
  auto t = testing::make_transcript({{Speaker::kEducator, "Take amoxicillin daily. Hello."},
                                     {Speaker::kPatient, "ok"}});
  const auto r = judge_report(t, judge, testing::mock_config("j"));
  CHECK(r.educator_utterances == 1);
  CHECK(r.educator_tokens == 4);
  CHECK(r.content[1].score == doctest::Approx(1.0 / std::log(4.0)));
  CHECK(r.content[0].score == 0.0);
  CHECK(r.strategy[2].likert == 5);
  CHECK(*r.strategy[2].score == doctest::Approx(5.0 / std::log(4.0)));
  for (const auto& c : r.strategy) CHECK_FALSE(c.error.has_value());
}

TEST_CASE("judge failures become cell errors") {
  MockScript s;
  s.cycle = true;
  s.entries = {{std::string("likert"), "Decision making: 9/5"}, {std::nullopt, "c1"}};
  MockBackend judge(s);
  auto t = testing::make_transcript({{Speaker::kEducator, "Come back if worse."}});
  const auto r = judge_report(t, judge, testing::mock_config("j"));
  CHECK(r.content[0].score.has_value());
  for (const auto& c : r.strategy) {
    CHECK(c.error.has_value());
    CHECK_FALSE(c.score.has_value());
  }
  CHECK(r.strategy[3].error->rfind("LikertOutOfRange", 0) == 0);
  CHECK_THROWS_AS(judge_report(testing::make_transcript({}), judge, testing::mock_config("j")),
                  EmptyTranscript);
}
