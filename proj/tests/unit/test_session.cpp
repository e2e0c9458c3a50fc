#include <thread>

#include "doctest.h"
#include "httplib.h"

#include "arena/dialogue/exam_result.hpp"
#include "arena/forge/note.hpp"
#include "arena/session/http.hpp"
#include "arena/session/service.hpp"
#include "test_support.hpp"

using namespace arena;
using namespace arena::session;

namespace {

struct Harness {
  std::shared_ptr<std::atomic<double>> now = std::make_shared<std::atomic<double>>(0.0);
  std::shared_ptr<int> counter = std::make_shared<int>(0);
  forge::DischargeNote note = testing::sample_note("note-1");
  forge::ComprehensionExam exam = testing::sample_exam("note-1");
  SessionService service;

  explicit Harness(gateway::MockScript bot = gateway::MockScript::always("Hello, I will explain your discharge. <<END>>"))
      : service(make_catalog(), default_groups({testing::mock_config("chatbot"),
                                                gateway::MockBackend::factory(std::move(bot))}),
                ServiceOptions{}, [n = now] { return n->load(); },
                [c = counter] { return "tok" + std::to_string((*c)++) + "abcdefabcdefabcdef"; }) {}

  Catalog make_catalog() const {
    Catalog c;
    c.notes[note.note_id] = note;
    c.exams[note.note_id] = exam;
    return c;
  }

  CreatedSession create(const std::string& group, const std::string& id = "") {
    CreateRequest r;
    r.session_id = id;
    r.group = group;
    r.note_id = "note-1";
    r.exam_id = "note-1";
    r.patient_subject = "P001";
    r.educator_subject = group == "B" ? "" : "E001";
    return service.create_session(r);
  }

  std::vector<std::optional<int>> key() const {
    std::vector<std::optional<int>> out;
    for (const auto& item : exam.items) out.emplace_back(item.correct_index);
    return out;
  }
};

/// Every string a patient-side payload could leak.
void check_patient_blind(const Json& payload, const Harness& h, bool revealed = false) {
  const std::string dump = payload.dump();
  CHECK_FALSE(payload.contains("note"));
  CHECK_FALSE(payload.contains("note_id"));
  for (const auto& section : h.note.sections) {
    CHECK(dump.find(section) == std::string::npos);
  }
  CHECK(dump.find("answer_key") == std::string::npos);
  CHECK(dump.find("correct_index") == std::string::npos);
  CHECK(dump.find("\"kind\"") == std::string::npos);
  if (!revealed) {
    CHECK_FALSE(payload.contains("group"));
    CHECK_FALSE(payload.contains("condition"));
    CHECK(dump.find("chatbot") == std::string::npos);
    CHECK(dump.find("mock-chatbot") == std::string::npos);
  }
}

}  // namespace

TEST_CASE("humanness vocabulary") {
  CHECK(to_string(HumannessGuess::kNotSure) == "NotSure");
  CHECK(humanness_from_string("Not Sure") == HumannessGuess::kNotSure);
  CHECK(humanness_from_string("Yes") == HumannessGuess::kYes);
  CHECK(humanness_from_string("No") == HumannessGuess::kNo);
}

TEST_CASE("create validates its inputs") {
  Harness h;
  CreateRequest r{"", "Z", "note-1", "note-1", "P001", ""};
  CHECK_THROWS_AS(h.service.create_session(r), UnknownGroup);
  r.group = "A";
  r.note_id = "nope";
  CHECK_THROWS_AS(h.service.create_session(r), UnknownNote);
  r.note_id = "note-1";
  r.exam_id = "nope";
  CHECK_THROWS_AS(h.service.create_session(r), UnknownExam);
  r.exam_id = "note-1";
  r.patient_subject = "jane.doe@example.com";
  CHECK_THROWS_AS(h.service.create_session(r), InvalidRequest);
  r.patient_subject = "P002";
  r.session_id = "dup-1";
  h.service.create_session(r);
  CHECK_THROWS_AS(h.service.create_session(r), DuplicateSession);
  const auto b = h.create("B");
  CHECK_FALSE(b.educator_token.has_value());
  CHECK(h.create("A").educator_token.has_value());
}

TEST_CASE("chatbot session protocol with a fake clock") {
  Harness h;
  const auto c = h.create("B", "sess-b");
  const auto& id = c.session_id;
  CHECK(h.service.state(id) == SessionState::kCreated);
  CHECK_THROWS_AS(h.service.join(id, Seat::kPatient, "wrong"), Forbidden);
  check_patient_blind(h.service.join(id, Seat::kPatient, c.patient_token), h);
  CHECK(h.service.state(id) == SessionState::kPretest);
  CHECK_THROWS_AS(h.service.post_message(id, Seat::kPatient, c.patient_token, "hi"), WrongState);
  CHECK_THROWS_AS(h.service.submit_pretest(id, c.patient_token, 40), InvalidRequest);
  h.service.submit_pretest(id, c.patient_token, 21);
  CHECK(h.service.state(id) == SessionState::kChatting);

  *h.now = 10.0;
  const Json v = h.service.post_message(id, Seat::kPatient, c.patient_token, "Hi, what happened to me?");
  check_patient_blind(v, h);
  REQUIRE(v["messages"].size() == 2);
  CHECK(v["messages"][1]["from"] == "educator");
  CHECK(v["messages"][1]["text"] == "Hello, I will explain your discharge.");
  CHECK(v["remaining_seconds"] == doctest::Approx(890.0));

  // Within the grace second the chat is still open.
  *h.now = 900.5;
  CHECK_NOTHROW(h.service.post_message(id, Seat::kPatient, c.patient_token, "one more"));
  *h.now = 902.0;
  CHECK_THROWS_AS(h.service.post_message(id, Seat::kPatient, c.patient_token, "late"),
                  SessionExpired);
  CHECK(h.service.state(id) == SessionState::kExam);

  const Json exam_view = h.service.view(id, Seat::kPatient, c.patient_token);
  check_patient_blind(exam_view, h);
  REQUIRE(exam_view.contains("exam"));
  CHECK(exam_view["exam"]["items"].size() == h.exam.items.size());
  CHECK_THROWS_AS(h.service.reveal(id, c.patient_token), WrongState);

  auto incomplete = h.key();
  incomplete.back().reset();
  CHECK_THROWS_AS(h.service.submit_exam(id, c.patient_token, incomplete, HumannessGuess::kNo),
                  IncompleteAnswers);

  auto answers = h.key();
  answers[0] = (*answers[0] + 1) % 3;
  const auto sub = h.service.submit_exam(id, c.patient_token, answers, HumannessGuess::kNotSure);
  const double expected = dialogue::compute_reward(dialogue::grade_answers(id, h.exam, answers));
  CHECK(sub.score == expected);
  CHECK(sub.score == doctest::Approx(0.8));
  CHECK_THROWS_AS(h.service.submit_exam(id, c.patient_token, h.key(), HumannessGuess::kYes),
                  WrongState);

  const Json r = h.service.reveal(id, c.patient_token);
  CHECK(r["group"] == "B");
  CHECK(r["educator"] == "chatbot");
  CHECK(r["model"] == "mock-chatbot");
  CHECK(r["humanness_guess"] == "NotSure");
  CHECK(r["score"] == expected);
  CHECK(r["pretest_score"] == 21);
  CHECK(r["chat_ended_by"] == "timer");
  h.service.close(id, c.patient_token);
  CHECK(h.service.state(id) == SessionState::kClosed);
}

TEST_CASE("human groups wait for the educator and show only the educator the note") {
  Harness h;
  const auto c = h.create("A");
  const auto& id = c.session_id;
  h.service.join(id, Seat::kPatient, c.patient_token);
  h.service.submit_pretest(id, c.patient_token, std::nullopt);
  CHECK(h.service.state(id) == SessionState::kPretest);
  CHECK_THROWS_AS(h.service.post_message(id, Seat::kPatient, c.patient_token, "hello?"), WrongState);
  const Json ev = h.service.join(id, Seat::kEducator, *c.educator_token);
  CHECK(ev["note"].get<std::string>().find(h.note.sections[1]) != std::string::npos);
  CHECK(h.service.state(id) == SessionState::kChatting);
  CHECK_THROWS_AS(h.service.view(id, Seat::kEducator, c.patient_token), Forbidden);
  h.service.post_message(id, Seat::kEducator, *c.educator_token, "Hello, I am your educator.");
  const Json pv = h.service.post_message(id, Seat::kPatient, c.patient_token, "Hi!");
  CHECK(pv["messages"].size() == 2);
  check_patient_blind(pv, h);
  h.service.finish_chat(id, Seat::kEducator, *c.educator_token);
  CHECK(h.service.state(id) == SessionState::kExam);
  h.service.submit_exam(id, c.patient_token, h.key(), HumannessGuess::kYes);
  const Json r = h.service.reveal(id, c.patient_token);
  CHECK(r["educator"] == "human");
  CHECK(r["score"] == 1.0);
  CHECK_FALSE(r.contains("model"));
}

TEST_CASE("chatbot endpoint failure surfaces as EndpointError") {
  gateway::MockScript down;
  down.entries = {{std::nullopt, "", gateway::MockFailure::kUnreachable}};
  Harness h(down);
  const auto c = h.create("B");
  h.service.join(c.session_id, Seat::kPatient, c.patient_token);
  h.service.submit_pretest(c.session_id, c.patient_token, 3);
  CHECK_THROWS_AS(h.service.post_message(c.session_id, Seat::kPatient, c.patient_token, "hi"),
                  EndpointError);
}

TEST_CASE("wait_view wakes on change and times out otherwise") {
  Harness h;
  const auto c = h.create("A");
  const auto v0 = h.service.view(c.session_id, Seat::kPatient, c.patient_token);
  const auto version = v0["version"].get<std::uint64_t>();
  const auto quiet = h.service.wait_view(c.session_id, Seat::kPatient, c.patient_token, version,
                                         std::chrono::milliseconds(20));
  CHECK(quiet["version"] == version);
  std::thread t([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(30));
    h.service.join(c.session_id, Seat::kPatient, c.patient_token);
  });
  const auto woke = h.service.wait_view(c.session_id, Seat::kPatient, c.patient_token, version,
                                        std::chrono::seconds(5));
  t.join();
  CHECK(woke["version"].get<std::uint64_t>() > version);
  CHECK(woke["state"] == "pretest");
}

TEST_CASE("http status mapping") {
  CHECK(http_status("UnknownSession") == 404);
  CHECK(http_status("Forbidden") == 403);
  CHECK(http_status("WrongState") == 409);
  CHECK(http_status("SessionExpired") == 410);
  CHECK(http_status("IncompleteAnswers") == 422);
  CHECK(http_status("EndpointError") == 502);
  CHECK(http_status("InvalidRequest") == 400);
}

TEST_CASE("headless end-to-end session over http with payload audit") {
  Harness h;
  HttpServer server(h.service);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread serving([&] { server.serve(); });
  httplib::Client cli("127.0.0.1", port);
  cli.set_read_timeout(10, 0);
  std::vector<Json> patient_payloads;
  auto post = [&](const std::string& path, const Json& body, bool patient) {
    auto res = cli.Post(path.c_str(), body.dump(), "application/json");
    REQUIRE(res);
    Json j = Json::parse(res->body);
    if (patient) patient_payloads.push_back(j);
    return std::make_pair(res->status, j);
  };
  auto get = [&](const std::string& path, bool patient) {
    auto res = cli.Get(path.c_str());
    REQUIRE(res);
    Json j = Json::parse(res->body);
    if (patient) patient_payloads.push_back(j);
    return std::make_pair(res->status, j);
  };

  auto [st, created] = post("/sessions",
                            {{"group", "B"}, {"note_id", "note-1"}, {"exam_id", "note-1"},
                             {"patient_subject", "P010"}},
                            false);
  REQUIRE(st == 201);
  const std::string id = created["session_id"];
  const std::string tok = created["patient_token"];
  const std::string base = "/sessions/" + id;

  CHECK(get(base + "/view?seat=patient&token=bad", false).first == 403);
  CHECK(get("/sessions/nope/view?seat=patient&token=" + tok, false).first == 404);
  CHECK(post(base + "/join", {{"seat", "patient"}, {"token", tok}}, true).first == 200);
  CHECK(post(base + "/pretest", {{"token", tok}, {"score", 30}}, true).first == 200);
  auto [ms, mv] = post(base + "/messages", {{"seat", "patient"}, {"token", tok}, {"text", "hello"}}, true);
  CHECK(ms == 200);
  CHECK(mv["messages"].size() == 2);
  CHECK(get(base + "/poll?seat=patient&token=" + tok + "&after=0&timeout_ms=10", true).first == 200);

  // SSE: the first event carries the current view.
  std::string sse;
  httplib::Client stream_cli("127.0.0.1", port);
  stream_cli.Get((base + "/stream?seat=patient&token=" + tok).c_str(),
                 [&](const char* data, std::size_t len) {
                   sse.append(data, len);
                   return sse.find("\n\n") == std::string::npos || sse.rfind(": keepalive", 0) == 0;
                 });
  const auto data_pos = sse.find("data: ");
  REQUIRE(data_pos != std::string::npos);
  patient_payloads.push_back(Json::parse(sse.substr(data_pos + 6, sse.find('\n', data_pos) - data_pos - 6)));

  *h.now = 1000.0;
  CHECK(post(base + "/messages", {{"seat", "patient"}, {"token", tok}, {"text", "late"}}, true).first == 410);
  auto [es, exam_view] = get(base + "/view?seat=patient&token=" + tok, true);
  CHECK(exam_view["state"] == "exam");
  CHECK(get(base + "/reveal?token=" + tok, true).first == 409);

  Json answers = Json::array();
  for (const auto& a : h.key()) answers.push_back(*a);
  Json partial = answers;
  partial[1] = nullptr;
  CHECK(post(base + "/exam", {{"token", tok}, {"answers", partial}, {"humanness_guess", "No"}}, true).first == 422);
  auto [xs, sub] = post(base + "/exam", {{"token", tok}, {"answers", answers}, {"humanness_guess", "Not Sure"}}, true);
  CHECK(xs == 200);
  CHECK(sub["score"] == 1.0);
  CHECK(sub["humanness_guess"] == "NotSure");
  CHECK(post(base + "/exam", {{"token", tok}, {"answers", answers}, {"humanness_guess", "Yes"}}, true).first == 409);

  for (const auto& p : patient_payloads) check_patient_blind(p, h);

  auto [rs, rev] = get(base + "/reveal?token=" + tok, false);
  CHECK(rs == 200);
  CHECK(rev["group"] == "B");
  CHECK(rev["humanness_guess"] == "NotSure");

  server.stop();
  serving.join();
}
