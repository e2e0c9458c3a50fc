#include <map>
#include <set>

#include "doctest.h"

#include "arena/forge/conversation.hpp"
#include "arena/forge/errors.hpp"
#include "arena/gateway/errors.hpp"
#include "arena/forge/generate.hpp"
#include "arena/forge/profile.hpp"
#include "arena/forge/tables.hpp"
#include "test_support.hpp"

using namespace arena;
using namespace arena::forge;

namespace {

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("ratio tables sum to one") {
  auto sum = [](const auto& table) {
    double s = 0;
    for (const auto& row : table) s += row.ratio;
    return s;
  };
  CHECK(sum(kAgeRatios) == doctest::Approx(1.0));
  CHECK(sum(kGenderRatios) == doctest::Approx(1.0));
  CHECK(sum(kEthnicityRatios) == doctest::Approx(1.0));
}

TEST_CASE("labels round trip") {
  for (const auto& row : clinical_rows()) {
    CHECK(from_label<DiseaseCategory>(label(row.disease)) == row.disease);
    for (auto c : row.complaints) CHECK(from_label<ChiefComplaint>(label(c)) == c);
    for (auto p : row.procedures) CHECK(from_label<Procedure>(label(p)) == p);
  }
  CHECK_THROWS_AS(from_label<Gender>("Other"), std::invalid_argument);
}

TEST_CASE("clinical table has one row per disease") {
  CHECK(clinical_rows().size() == 14);
  CHECK(clinical_row(DiseaseCategory::kMentalHealth).procedures ==
        std::vector<Procedure>{Procedure::kMedication, Procedure::kLaboratoryTesting,
                               Procedure::kVitalSignMeasurement});
}

TEST_CASE("compatibility predicate") {
  CHECK(is_compatible(DiseaseCategory::kInfectious, ChiefComplaint::kRespiratoryIssues,
                      {Procedure::kMedication}));
  CHECK_FALSE(is_compatible(DiseaseCategory::kInfectious, ChiefComplaint::kPain,
                            {Procedure::kMedication}));
  CHECK_FALSE(is_compatible(DiseaseCategory::kMentalHealth,
                            ChiefComplaint::kMentalHealthConcerns, {Procedure::kSurgery}));
  CHECK_FALSE(is_compatible(DiseaseCategory::kGenetic, ChiefComplaint::kGeneralSymptoms, {}));
}

TEST_CASE("sampler is seeded and emits compatible profiles") {
  ProfileSampler a(5), b(5), c(6);
  bool differs = false;
  for (int i = 0; i < 2000; ++i) {
    const auto pa = a.next();
    CHECK(pa == b.next());
    differs = differs || !(pa == c.next());
    CHECK(is_compatible(pa.disease, pa.chief_complaint, pa.procedures));
    CHECK_FALSE(pa.procedures.empty());
  }
  CHECK(differs);
  CHECK(sample_profile(5) == ProfileSampler(5).next());
}

TEST_CASE("sampler marginals track the population table") {
  ProfileSampler s(123);
  std::map<AgeBand, int> age;
  std::map<Gender, int> gender;
  std::map<DiseaseCategory, int> disease;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    const auto p = s.next();
    ++age[p.age_band];
    ++gender[p.gender];
    ++disease[p.disease];
  }
  for (const auto& r : kAgeRatios) CHECK(age[r.value] / double(n) == doctest::Approx(r.ratio).epsilon(0.06));
  CHECK(gender[Gender::kFemale] / double(n) == doctest::Approx(0.529).epsilon(0.03));
  for (const auto& row : clinical_rows()) {
    CHECK(disease[row.disease] / double(n) == doctest::Approx(1.0 / 14).epsilon(0.1));
  }
}

TEST_CASE("note parses and renders back") {
  const DischargeNote n = testing::sample_note("scn-1");
  CHECK(n.sex == "F");
  CHECK(n.chief_complaint == "Fever and productive cough");
  CHECK(n.sections[0].find("pneumonia") != std::string::npos);
  CHECK(n.content_flags.all());
  DischargeNote again = parse_note(render_note(n));
  again.note_id = n.note_id;
  CHECK(again == n);
  CHECK(render_note(n).find(section_heading(2)) != std::string::npos);
  CHECK(section_heading(0) == "1. Patient Summary");
}

TEST_CASE("note rejections") {
  const std::string text = testing::note_text();
  CHECK_THROWS_AS(parse_note(replace_once(text, "|||END", "")), GenerationRejected);
  CHECK_THROWS_AS(parse_note(replace_once(text, "2. Patient History", "Patient History")),
                  GenerationRejected);
  // Sections out of order.
  std::string swapped = replace_once(text, "4. Discharge Instructions", "9. tmp");
  swapped = replace_once(swapped, "5. Discharge Summary", "4. Discharge Instructions");
  swapped = replace_once(swapped, "9. tmp", "5. Discharge Summary");
  CHECK_THROWS_AS(parse_note(swapped), GenerationRejected);
}

TEST_CASE("content detection and completeness") {
  DischargeNote n = testing::sample_note();
  n.sections[4] = "Nothing more to add.";
  n.content_flags = detect_content(n);
  CHECK_FALSE(n.content_flags.follow_up);
  CHECK_THROWS_AS(require_complete(n), GenerationRejected);
  CHECK_NOTHROW(require_complete(testing::sample_note()));
}

TEST_CASE("exam reply parsing and validation") {
  ComprehensionExam e = parse_exam_reply(testing::exam_reply(), "scn-2");
  REQUIRE(e.items.size() == 5);
  CHECK(e.note_id == "scn-2");
  for (const auto& item : e.items) {
    CHECK(item.correct_index == 0);
    CHECK(item.options[0].kind == OptionKind::kAnswer);
    CHECK(item.options[1].kind == OptionKind::kDistractor);
    CHECK(item.options[2].kind == OptionKind::kIrrelevant);
  }
  CHECK_NOTHROW(validate_exam(e));

  const std::string fenced = "Here you go:\n```json\n" + testing::exam_reply() + "\n```\n";
  CHECK(parse_exam_reply(fenced, "scn-2") == e);

  Json four = Json::parse(testing::exam_reply());
  four.erase(four.size() - 1);
  CHECK_THROWS_AS(parse_exam_reply(four.dump(), "x"), GenerationRejected);

  Json eleven = Json::array();
  for (int i = 0; i < 11; ++i) eleven.push_back(Json::parse(testing::exam_reply())[i % 5]);
  CHECK_THROWS_AS(parse_exam_reply(eleven.dump(), "x"), GenerationRejected);

  Json missing = Json::parse(testing::exam_reply());
  missing[0].erase("distractor");
  CHECK_THROWS_AS(parse_exam_reply(missing.dump(), "x"), SchemaError);
  CHECK_THROWS_AS(parse_exam_reply("no json here", "x"), SchemaError);
}

TEST_CASE("options form with explicit kinds") {
  Json items = Json::array();
  for (int i = 0; i < 5; ++i) {
    items.push_back({{"question", "Q" + std::to_string(i)},
                     {"options",
                      {{{"text", "x"}, {"kind", "irrelevant"}},
                       {{"text", "y"}, {"kind", "answer"}},
                       {{"text", "z"}, {"kind", "distractor"}}}}});
  }
  const auto e = parse_exam_reply(items.dump(), "n");
  CHECK(e.items[0].correct_index == 1);
  CHECK(e.items[0].options[1].text == "y");

  ComprehensionExam bad = e;
  bad.items[0].correct_index = 2;  // points at the distractor
  CHECK_THROWS_AS(validate_exam(bad), SchemaError);
  bad = e;
  bad.items[1].options[2].kind = OptionKind::kAnswer;
  CHECK_THROWS_AS(validate_exam(bad), SchemaError);
}

TEST_CASE("option shuffle is stable and keeps the key") {
  ComprehensionExam a = parse_exam_reply(testing::exam_reply(), "scn-9");
  ComprehensionExam b = a;
  shuffle_options(a);
  shuffle_options(b);
  CHECK(a == b);
  CHECK_NOTHROW(validate_exam(a));
  std::set<int> positions;
  for (const auto& item : a.items) {
    CHECK(item.options[item.correct_index].kind == OptionKind::kAnswer);
    positions.insert(item.correct_index);
  }
  CHECK(positions.size() > 1);
}

TEST_CASE("coverage hints") {
  const auto e = testing::sample_exam();
  CHECK(uncovered_topics(e).size() <= 6);
}

TEST_CASE("reference conversation parsing") {
  const auto c = parse_conversation_reply(testing::conversation_reply(), "scn-3");
  REQUIRE(c.turns.size() == 6);
  CHECK(c.turns[0].speaker == Speaker::kEducator);
  CHECK(c.turns[0].evidence.has_value());
  CHECK(c.turns[1].speaker == Speaker::kPatient);
  CHECK_FALSE(c.turns[1].evidence.has_value());
  CHECK_NOTHROW(validate_conversation(c));

  const auto alias = parse_conversation_reply("Doctor: Hi there.\nmore words\nPatient: ok", "x");
  REQUIRE(alias.turns.size() == 2);
  CHECK(alias.turns[0].text.find("more words") != std::string::npos);

  CHECK_THROWS_AS(validate_conversation(parse_conversation_reply("Patient: hi\nEducator: hello", "x")),
                  GenerationRejected);
}

TEST_CASE("unmentioned items") {
  const auto c = parse_conversation_reply(testing::conversation_reply(), "scn-test");
  const auto e = testing::sample_exam();
  for (auto idx : unmentioned_items(c, e)) CHECK(idx < e.items.size());
}

TEST_CASE("prompts embed their inputs") {
  const DemographicProfile p = sample_profile(1);
  const std::string np = note_prompt(p, "scn-00001");
  CHECK(np.find(std::string(label(p.disease))) != std::string::npos);
  CHECK(np.find(std::string(label(p.chief_complaint))) != std::string::npos);
  const auto note = testing::sample_note();
  CHECK(exam_prompt(note).find(note.sections[3]) != std::string::npos);
  const auto exam = testing::sample_exam();
  const std::string q = format_questionnaire(exam);
  CHECK(q.find(exam.items[0].question) != std::string::npos);
  CHECK(conversation_prompt(note, exam).find(exam.items[4].question) != std::string::npos);
}

TEST_CASE("generation retries invalid replies and assigns ids") {
  gateway::MockScript s;
  std::string broken = testing::note_text();
  broken.erase(broken.find("|||END"));
  s.entries = {{std::nullopt, broken}, {std::nullopt, testing::note_text()}};
  gateway::MockBackend backend(s);
  RejectionLog log;
  const auto note = generate_note(sample_profile(0), "scn-00042", backend,
                                  testing::mock_config("generator"), {}, &log);
  CHECK(note.note_id == "scn-00042");
  CHECK(log.reasons.size() == 1);
}

TEST_CASE("generation gives up after the retry budget") {
  gateway::MockBackend backend(gateway::MockScript::always("nonsense"));
  GenerationOptions opts;
  opts.retry_budget = 2;
  CHECK_THROWS_AS(generate_note(sample_profile(0), "x", backend, testing::mock_config("g"), opts),
                  GenerationRejected);
  CHECK(backend.requests().size() == 3);
}

TEST_CASE("endpoint failures are not retried by generation") {
  gateway::MockScript s;
  s.entries = {{std::nullopt, "", gateway::MockFailure::kUnreachable}};
  gateway::MockBackend backend(s);
  CHECK_THROWS_AS(generate_note(sample_profile(0), "x", backend, testing::mock_config("g")),
                  gateway::EndpointUnreachable);
}

TEST_CASE("exam and conversation generation") {
  const auto note = testing::sample_note("scn-5");
  gateway::MockBackend backend(gateway::MockScript::always(testing::exam_reply()));
  const auto exam = generate_exam(note, backend, testing::mock_config("g"));
  CHECK(exam.note_id == "scn-5");
  CHECK(exam.items.size() == 5);
  gateway::MockBackend conv_backend(gateway::MockScript::always(testing::conversation_reply()));
  const auto conv = generate_reference_conversation(note, exam, conv_backend, testing::mock_config("g"));
  CHECK(conv.note_id == "scn-5");
  CHECK(conv.turns.size() == 6);
}
