#include <bit>

#include "doctest.h"

#include "arena/dialogue/arena.hpp"
#include "arena/dialogue/exam_result.hpp"
#include "arena/gateway/errors.hpp"
#include "test_support.hpp"

using namespace arena;
using namespace arena::dialogue;
using gateway::MockBackend;
using gateway::MockScript;

namespace {

forge::ComprehensionItem item(const std::string& a, const std::string& b, const std::string& c) {
  forge::ComprehensionItem it;
  it.question = "Which one?";
  it.options = {{{a, forge::OptionKind::kAnswer},
                 {b, forge::OptionKind::kDistractor},
                 {c, forge::OptionKind::kIrrelevant}}};
  return it;
}

forge::ComprehensionExam exam_of(std::size_t n) {
  forge::ComprehensionExam e;
  e.note_id = "x";
  for (std::size_t i = 0; i < n; ++i) e.items.push_back(item("yes", "no", "maybe"));
  return e;
}

struct Pair {
  MockBackend educator;
  MockBackend patient;
};

Pair never_closing() {
  return {MockBackend(testing::load_script("educator_never_close.json")),
          MockBackend(testing::load_script("patient_answers_a.json"))};
}

}  // namespace

TEST_CASE("reward equals the fraction of correct items for every pattern") {
  for (std::size_t t : {5u, 7u, 10u}) {
    const auto exam = exam_of(t);
    for (unsigned mask = 0; mask < (1u << t); ++mask) {
      std::vector<std::optional<int>> chosen;
      for (std::size_t i = 0; i < t; ++i) {
        if (mask >> i & 1u) chosen.emplace_back(0);
        else if (i % 2) chosen.emplace_back(std::nullopt);
        else chosen.emplace_back(2);
      }
      const auto r = grade_answers("x", exam, chosen);
      CHECK(r.num_correct() == static_cast<std::size_t>(std::popcount(mask)));
      CHECK(compute_reward(r) == static_cast<double>(std::popcount(mask)) / static_cast<double>(t));
    }
  }
}

TEST_CASE("reward edge cases") {
  CHECK_THROWS_AS(compute_reward(ExamResult{}), EmptyExam);
  const auto exam = exam_of(5);
  std::vector<std::optional<int>> short_answers(4, 0);
  CHECK_THROWS(grade_answers("x", exam, short_answers));
}

TEST_CASE("transcript validation") {
  auto t = testing::make_transcript({{Speaker::kEducator, "hi"}, {Speaker::kPatient, "hello"}});
  CHECK(t.exchange_pairs() == 1);
  CHECK_NOTHROW(validate_transcript(t));
  t.turns.push_back(make_turn(Speaker::kEducator, "bye now"));
  CHECK(t.exchange_pairs() == 2);
  CHECK(t.educator_token_total() == 3);
  CHECK_THROWS_AS(validate_transcript(t, 1), std::invalid_argument);
  auto bad = testing::make_transcript({{Speaker::kPatient, "first"}});
  CHECK_THROWS_AS(validate_transcript(bad), std::invalid_argument);
  auto stale = t;
  stale.turns[0].token_count = 9;
  CHECK_THROWS_AS(validate_transcript(stale), std::invalid_argument);
  CHECK(termination_from_string(to_string(Termination::kNaturalClose)) == Termination::kNaturalClose);
}

TEST_CASE("role views mirror each other") {
  auto t = testing::make_transcript({{Speaker::kEducator, "e1"}, {Speaker::kPatient, "p1"}});
  const auto ev = educator_view("SYS", t.turns);
  REQUIRE(ev.size() == 4);
  CHECK(ev[0].role == gateway::Role::kSystem);
  CHECK(ev[1].role == gateway::Role::kUser);
  CHECK(ev[2].role == gateway::Role::kAssistant);
  CHECK(ev[2].content == "e1");
  CHECK(ev[3].role == gateway::Role::kUser);
  const auto pv = patient_view("PERSONA", t.turns);
  REQUIRE(pv.size() == 3);
  CHECK(pv[1].role == gateway::Role::kUser);
  CHECK(pv[1].content == "e1");
  CHECK(pv[2].role == gateway::Role::kAssistant);
}

TEST_CASE("prompts keep the note on the educator side") {
  const auto note = testing::sample_note();
  const std::string sys = educator_system_prompt(note, "<<END>>");
  CHECK(sys.find(note.sections[3]) != std::string::npos);
  CHECK(sys.find("<<END>>") != std::string::npos);
  const std::string persona = patient_system_prompt("<<END>>");
  CHECK(persona.find(note.sections[0]) == std::string::npos);
  const auto it = item("alpha", "beta", "gamma");
  const std::string q = exam_item_prompt(it);
  CHECK(q.find("A. alpha") != std::string::npos);
  CHECK(q.find("C. gamma") != std::string::npos);
}

TEST_CASE("never-closing agents run to the turn cap") {
  auto p = never_closing();
  const auto t = run_dialogue("s", testing::sample_note(), p.educator, testing::mock_config("e"),
                              p.patient, testing::mock_config("p"));
  CHECK(t.exchange_pairs() == 20);
  CHECK(t.turns.size() == 40);
  CHECK(t.terminated_by == Termination::kTurnCap);
  CHECK_NOTHROW(validate_transcript(t));
}

TEST_CASE("closing marker ends the dialogue and is stripped") {
  MockScript edu;
  edu.entries = {{std::nullopt, "Hello, let us start."}, {std::nullopt, "That is all. <<END>>"}};
  MockBackend educator(edu), patient(MockScript::always("ok thanks"));
  const auto t = run_dialogue("s", testing::sample_note(), educator, testing::mock_config("e"),
                              patient, testing::mock_config("p"));
  CHECK(t.terminated_by == Termination::kNaturalClose);
  REQUIRE(t.turns.size() == 3);
  CHECK(t.turns[2].text == "That is all.");

  MockBackend educator2(MockScript::always("Some info.")), patient2(MockScript::always("Got it <<END>>"));
  const auto t2 = run_dialogue("s", testing::sample_note(), educator2, testing::mock_config("e"),
                               patient2, testing::mock_config("p"));
  CHECK(t2.terminated_by == Termination::kNaturalClose);
  CHECK(t2.turns.size() == 2);
  CHECK(t2.turns[1].text == "Got it");
}

TEST_CASE("custom turn cap and marker") {
  MockBackend educator(MockScript::always("info")), patient(MockScript::always("more <<END>>"));
  DialogueOptions opts;
  opts.turn_cap = 3;
  opts.closing_marker = "[DONE]";
  const auto t = run_dialogue("s", testing::sample_note(), educator, testing::mock_config("e"),
                              patient, testing::mock_config("p"), opts);
  CHECK(t.exchange_pairs() == 3);
}

TEST_CASE("blank replies are asked again once") {
  MockScript edu;
  edu.cycle = true;
  edu.entries = {{std::nullopt, "   "}, {std::nullopt, "Real content."}};
  MockBackend educator(edu), patient(MockScript::always("fine"));
  DialogueOptions opts;
  opts.turn_cap = 2;
  const auto t = run_dialogue("s", testing::sample_note(), educator, testing::mock_config("e"),
                              patient, testing::mock_config("p"), opts);
  CHECK(t.turns.size() == 4);
  CHECK(educator.requests().size() == 4);

  MockBackend mute(MockScript::always(" ")), patient2(MockScript::always("fine"));
  try {
    run_dialogue("s", testing::sample_note(), mute, testing::mock_config("e"), patient2,
                 testing::mock_config("p"));
    FAIL("expected DialogueError");
  } catch (const DialogueError& e) {
    CHECK(e.kind() == FailureKind::kEmptyUtterance);
    CHECK(e.partial().terminated_by == Termination::kError);
  }
}

TEST_CASE("endpoint failures abort with the partial transcript") {
  MockScript pat;
  pat.entries = {{std::nullopt, "first"}, {std::nullopt, "", gateway::MockFailure::kTimeout}};
  MockBackend educator(MockScript::always("info")), patient(pat);
  try {
    run_dialogue("s", testing::sample_note(), educator, testing::mock_config("e"), patient,
                 testing::mock_config("p"));
    FAIL("expected DialogueError");
  } catch (const DialogueError& e) {
    CHECK(e.kind() == FailureKind::kTimeout);
    CHECK(e.partial().turns.size() == 3);
  }
  MockScript bad;
  bad.entries = {{std::nullopt, "", gateway::MockFailure::kMalformed}};
  MockBackend educator2(bad), patient2(MockScript::always("x"));
  try {
    run_dialogue("s", testing::sample_note(), educator2, testing::mock_config("e"), patient2,
                 testing::mock_config("p"));
    FAIL("expected DialogueError");
  } catch (const DialogueError& e) {
    CHECK(e.kind() == FailureKind::kMalformedResponse);
    CHECK(e.partial().turns.empty());
  }
}

TEST_CASE("answer extraction") {
  const auto it = item("Take amoxicillin three times a day", "Stop all medicine", "Buy new shoes");
  CHECK(extract_choice("B", it) == 1);
  CHECK(extract_choice("c.", it) == 2);
  CHECK(extract_choice("(A)", it) == 0);
  CHECK(extract_choice("The answer is B.", it) == 1);
  CHECK(extract_choice("I think it's C) buy new shoes", it) == 2);
  CHECK(extract_choice("Answer: a", it) == 0);
  CHECK(extract_choice("option A I think", it) == 0);
  // "a" followed by a word is the article, not a letter.
  CHECK(extract_choice("It is a guess, so B", it) == 1);
  CHECK(extract_choice("I should take amoxicillin three times a day", it) == 0);
  CHECK(extract_choice("stop all medicine", it) == 1);
  CHECK_FALSE(extract_choice("I don't know", it).has_value());
  CHECK_FALSE(extract_choice("", it).has_value());
  CHECK_FALSE(extract_choice("ABC", it).has_value());
}

TEST_CASE("exam administration keeps the note out") {
  const auto note = testing::sample_note();
  const auto exam = testing::sample_exam();
  auto t = testing::make_transcript({{Speaker::kEducator, "Take your pills."}, {Speaker::kPatient, "ok"}});
  MockBackend patient(MockScript::always("A"));
  const auto r = administer_exam(exam, t, patient, testing::mock_config("p"));
  CHECK(r.items.size() == exam.items.size());
  CHECK(patient.requests().size() == exam.items.size());
  for (const auto& req : patient.requests()) {
    CHECK(req.back().content.find("A. ") != std::string::npos);
    CHECK(find_note_leaks(note, req).empty());
  }
  for (std::size_t i = 0; i < r.items.size(); ++i) {
    CHECK(r.items[i].chosen_index == 0);
    CHECK(r.items[i].correct == (exam.items[i].correct_index == 0));
  }

  MockBackend mumbler(MockScript::always("hmm, not sure"));
  const auto r2 = administer_exam(exam, t, mumbler, testing::mock_config("p"));
  CHECK(r2.num_correct() == 0);
  CHECK_FALSE(r2.items[0].chosen_index.has_value());
}

TEST_CASE("episode reward equals compute_reward") {
  Scenario s{"scn-1", testing::sample_note("scn-1"), testing::sample_exam("scn-1")};
  auto p = never_closing();
  const Episode e = run_episode(s, p.educator, testing::mock_config("e"), p.patient,
                                testing::mock_config("p"));
  CHECK(e.reward == compute_reward(e.exam_result));
  CHECK(e.transcript.exchange_pairs() == 20);
}

TEST_CASE("leak scan finds note text") {
  const auto note = testing::sample_note();
  std::vector<gateway::ChatMessage> msgs{{gateway::Role::kUser, "Hello"}};
  CHECK(find_note_leaks(note, msgs).empty());
  msgs.push_back({gateway::Role::kUser, "so " + note.sections[2]});
  CHECK_FALSE(find_note_leaks(note, msgs).empty());
  msgs = {{gateway::Role::kUser, "we discussed 3. Procedures and Progress during stay"}};
  CHECK_FALSE(find_note_leaks(note, msgs).empty());
}

TEST_CASE("batch keeps input order and isolates failures") {
  std::vector<Scenario> scenarios;
  for (int i = 0; i < 6; ++i) {
    const std::string id = "scn-" + std::to_string(i);
    scenarios.push_back({id, testing::sample_note(id), testing::sample_exam(id)});
  }
  BatchConfig cfg;
  cfg.educator = {testing::mock_config("e"),
                  MockBackend::factory(testing::load_script("educator_never_close.json"))};
  cfg.patient = {testing::mock_config("p"),
                 MockBackend::factory(testing::load_script("patient_answers_a.json"))};
  cfg.dialogue.turn_cap = 4;
  cfg.parallelism = 3;
  const auto out = run_batch(scenarios, cfg);
  REQUIRE(out.size() == 6);
  for (std::size_t i = 0; i < out.size(); ++i) {
    REQUIRE(std::holds_alternative<Episode>(out[i]));
    CHECK(std::get<Episode>(out[i]).scenario_id == scenarios[i].scenario_id);
  }
  cfg.parallelism = 1;
  CHECK(run_batch(scenarios, cfg) == out);

  MockScript down;
  down.entries = {{std::nullopt, "", gateway::MockFailure::kUnreachable}};
  cfg.patient.make_backend = MockBackend::factory(down);
  const auto failed = run_batch(scenarios, cfg);
  for (const auto& o : failed) {
    REQUIRE(std::holds_alternative<EpisodeError>(o));
    CHECK(std::get<EpisodeError>(o).kind == "EndpointUnreachable");
    CHECK(std::get<EpisodeError>(o).partial.has_value());
  }
}
