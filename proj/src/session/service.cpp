#include "arena/session/service.hpp"

#include <algorithm>
#include <random>
#include <regex>

#include <spdlog/spdlog.h>

#include "arena/common/text.hpp"
#include "arena/dialogue/exam_result.hpp"
#include "arena/gateway/errors.hpp"

namespace arena::session {

std::string_view to_string(SessionState s) {
  switch (s) {
    case SessionState::kCreated:
      return "created";
    case SessionState::kPretest:
      return "pretest";
    case SessionState::kChatting:
      return "chatting";
    case SessionState::kExam:
      return "exam";
    case SessionState::kRevealed:
      return "revealed";
    case SessionState::kClosed:
      return "closed";
  }
  return "closed";
}

std::string_view to_string(Seat s) { return s == Seat::kPatient ? "patient" : "educator"; }

Seat seat_from_string(std::string_view s) {
  if (s == "patient") return Seat::kPatient;
  if (s == "educator") return Seat::kEducator;
  throw InvalidRequest("unknown seat: " + std::string(s));
}

std::string_view to_string(HumannessGuess g) {
  switch (g) {
    case HumannessGuess::kYes:
      return "Yes";
    case HumannessGuess::kNo:
      return "No";
    case HumannessGuess::kNotSure:
      return "NotSure";
  }
  return "NotSure";
}

HumannessGuess humanness_from_string(std::string_view s) {
  if (s == "Yes") return HumannessGuess::kYes;
  if (s == "No") return HumannessGuess::kNo;
  if (s == "NotSure" || s == "Not Sure") return HumannessGuess::kNotSure;
  throw InvalidRequest("humanness guess must be Yes, No or NotSure");
}

Clock steady_clock_seconds() {
  return [] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
  };
}

TokenSource random_tokens() {
  auto rng = std::make_shared<std::mt19937_64>(std::random_device{}());
  auto mu = std::make_shared<std::mutex>();
  return [rng, mu] {
    std::lock_guard lock(*mu);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (int i = 0; i < 2; ++i) {
      auto x = (*rng)();
      for (int k = 0; k < 16; ++k, x >>= 4) out.push_back(kHex[x & 0xf]);
    }
    return out;
  };
}

std::map<std::string, Condition> default_groups(gateway::Endpoint chatbot) {
  return {{"A", Condition{"non-expert human educator", std::nullopt}},
          {"B", Condition{"chatbot educator", std::move(chatbot)}},
          {"C", Condition{"expert human educator", std::nullopt}}};
}

struct SessionService::Session {
  std::mutex mu;
  std::condition_variable cv;

  std::string id;
  std::string group;
  const Condition* condition = nullptr;
  forge::DischargeNote note;
  forge::ComprehensionExam exam;
  std::string patient_subject;
  std::string educator_subject;
  std::string patient_token;
  std::optional<std::string> educator_token;

  SessionState state = SessionState::kCreated;
  bool patient_joined = false;
  bool educator_joined = false;
  bool pretest_done = false;
  std::optional<int> pretest_score;
  std::optional<double> chat_started;
  std::string chat_ended_by;

  std::vector<ChatEntry> messages;
  std::uint64_t next_seq = 1;
  std::uint64_t version = 0;

  std::unique_ptr<gateway::ChatBackend> bot;
  std::string bot_system;
  std::optional<ExamSubmission> submission;

  bool chatbot() const { return condition->chatbot.has_value(); }
  void touch() {
    ++version;
    cv.notify_all();
  }
};

namespace {

bool valid_subject(const std::string& s) {
  static const std::regex re(R"(^[A-Za-z0-9_-]{1,32}$)");
  return std::regex_match(s, re) && std::any_of(s.begin(), s.end(), [](char c) {
           return c >= '0' && c <= '9';
         });
}

bool valid_session_id(const std::string& s) {
  static const std::regex re(R"(^[A-Za-z0-9_-]{1,64}$)");
  return std::regex_match(s, re);
}

}  // namespace

SessionService::SessionService(Catalog catalog, std::map<std::string, Condition> groups,
                               ServiceOptions options, Clock clock, TokenSource tokens)
    : catalog_(std::move(catalog)),
      groups_(std::move(groups)),
      options_(std::move(options)),
      clock_(std::move(clock)),
      tokens_(std::move(tokens)) {
  for (const auto& [letter, condition] : groups_) {
    if (condition.chatbot && !condition.chatbot->make_backend) {
      throw std::invalid_argument("group " + letter + " has a chatbot without a backend");
    }
  }
}

CreatedSession SessionService::create_session(const CreateRequest& request) {
  const auto group = groups_.find(request.group);
  if (group == groups_.end()) throw UnknownGroup("unknown group: " + request.group);
  const auto note = catalog_.notes.find(request.note_id);
  if (note == catalog_.notes.end()) throw UnknownNote("unknown note: " + request.note_id);
  const auto exam = catalog_.exams.find(request.exam_id);
  if (exam == catalog_.exams.end()) throw UnknownExam("unknown exam: " + request.exam_id);
  if (!valid_subject(request.patient_subject)) {
    throw InvalidRequest("patient_subject must be a subject number");
  }
  if (!request.educator_subject.empty() && !valid_subject(request.educator_subject)) {
    throw InvalidRequest("educator_subject must be a subject number");
  }

  auto s = std::make_shared<Session>();
  s->id = request.session_id.empty() ? "s-" + tokens_().substr(0, 16) : request.session_id;
  if (!valid_session_id(s->id)) throw InvalidRequest("malformed session id");
  s->group = request.group;
  s->condition = &group->second;
  s->note = note->second;
  s->exam = exam->second;
  s->patient_subject = request.patient_subject;
  s->educator_subject = request.educator_subject;
  s->patient_token = tokens_();
  if (s->chatbot()) {
    s->bot = s->condition->chatbot->make_backend();
    s->bot_system = dialogue::educator_system_prompt(s->note, options_.closing_marker);
    s->educator_joined = true;
  } else {
    s->educator_token = tokens_();
  }

  std::lock_guard lock(mu_);
  if (!sessions_.emplace(s->id, s).second) {
    throw DuplicateSession("session " + s->id + " already exists");
  }
  spdlog::info("session {} created", s->id);
  return {s->id, s->patient_token, s->educator_token};
}

std::shared_ptr<SessionService::Session> SessionService::find(const std::string& id) const {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw UnknownSession("unknown session: " + id);
  return it->second;
}

std::vector<std::string> SessionService::session_ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> ids;
  for (const auto& [id, s] : sessions_) ids.push_back(id);
  return ids;
}

void SessionService::check_token(const Session& s, Seat seat, const std::string& token) const {
  const auto& expected = seat == Seat::kPatient ? std::optional(s.patient_token) : s.educator_token;
  if (!expected) throw Forbidden("this group has no human educator seat");
  if (token.empty() || token != *expected) throw Forbidden("bad seat token");
}

double SessionService::elapsed(const Session& s) const {
  return s.chat_started ? clock_() - *s.chat_started : 0.0;
}

void SessionService::advance(Session& s, SessionState next) {
  if (static_cast<int>(next) <= static_cast<int>(s.state)) {
    throw WrongState("session " + s.id + " is " + std::string(to_string(s.state)));
  }
  s.state = next;
  s.touch();
}

void SessionService::expire_if_due(Session& s) {
  if (s.state == SessionState::kChatting &&
      elapsed(s) > options_.session_seconds + options_.grace_seconds) {
    s.chat_ended_by = "timer";
    advance(s, SessionState::kExam);
  }
}

void SessionService::maybe_start_chat(Session& s) {
  if (s.state == SessionState::kPretest && s.pretest_done && s.educator_joined) {
    s.chat_started = clock_();
    advance(s, SessionState::kChatting);
  }
}

Json SessionService::join(const std::string& id, Seat seat, const std::string& token) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  check_token(*s, seat, token);
  expire_if_due(*s);
  if (seat == Seat::kPatient) {
    s->patient_joined = true;
    if (s->state == SessionState::kCreated) advance(*s, SessionState::kPretest);
  } else {
    s->educator_joined = true;
    maybe_start_chat(*s);
  }
  s->touch();
  return view_locked(*s, seat);
}

Json SessionService::submit_pretest(const std::string& id, const std::string& token,
                                    std::optional<int> score) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  check_token(*s, Seat::kPatient, token);
  if (s->state != SessionState::kPretest || s->pretest_done) {
    throw WrongState("pre-test is not open in session " + id);
  }
  if (score && (*score < 0 || *score > 36)) throw InvalidRequest("pre-test score must be 0..36");
  s->pretest_score = score;
  s->pretest_done = true;
  s->touch();
  maybe_start_chat(*s);
  return view_locked(*s, Seat::kPatient);
}

Json SessionService::post_message(const std::string& id, Seat seat, const std::string& token,
                                  const std::string& text) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  check_token(*s, seat, token);
  if (s->state == SessionState::kChatting &&
      elapsed(*s) > options_.session_seconds + options_.grace_seconds) {
    expire_if_due(*s);
    throw SessionExpired("the " + std::to_string(static_cast<int>(options_.session_seconds)) +
                         " s session in " + id + " has ended");
  }
  if (s->state != SessionState::kChatting) {
    throw WrongState(s->state == SessionState::kPretest && !s->educator_joined
                         ? "waiting for the educator to join session " + id
                         : "session " + id + " is " + std::string(to_string(s->state)));
  }
  const std::string body(text::trim(text));
  if (body.empty()) throw InvalidRequest("empty message");

  s->messages.push_back({s->next_seq++, seat, body, elapsed(*s)});
  s->touch();

  if (s->chatbot() && seat == Seat::kPatient) {
    std::vector<dialogue::Turn> turns;
    for (const auto& m : s->messages) {
      turns.push_back(dialogue::make_turn(
          m.from == Seat::kEducator ? Speaker::kEducator : Speaker::kPatient, m.text));
    }
    const auto messages = dialogue::educator_view(s->bot_system, turns);
    std::string reply;
    try {
      for (int attempt = 0; attempt < 2 && text::is_blank(reply); ++attempt) {
        reply = s->bot->complete(s->condition->chatbot->config, messages);
      }
    } catch (const gateway::GatewayError& e) {
      spdlog::warn("session {}: chatbot endpoint failed: {}", id, e.what());
      throw EndpointError(std::string("educator endpoint failed: ") + e.what());
    }
    std::string cleaned(text::trim(reply));
    if (const auto& marker = options_.closing_marker; !marker.empty()) {
      for (auto pos = cleaned.find(marker); pos != std::string::npos; pos = cleaned.find(marker)) {
        cleaned.erase(pos, marker.size());
      }
      cleaned = std::string(text::trim(cleaned));
    }
    if (cleaned.empty()) throw EndpointError("educator endpoint returned an empty reply");
    s->messages.push_back({s->next_seq++, Seat::kEducator, cleaned, elapsed(*s)});
    s->touch();
  }
  return view_locked(*s, seat);
}

Json SessionService::finish_chat(const std::string& id, Seat seat, const std::string& token) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  check_token(*s, seat, token);
  expire_if_due(*s);
  if (s->state != SessionState::kChatting) {
    throw WrongState("session " + id + " is " + std::string(to_string(s->state)));
  }
  s->chat_ended_by = std::string(to_string(seat));
  advance(*s, SessionState::kExam);
  return view_locked(*s, seat);
}

ExamSubmission SessionService::submit_exam(const std::string& id, const std::string& token,
                                           const std::vector<std::optional<int>>& answers,
                                           HumannessGuess guess) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  check_token(*s, Seat::kPatient, token);
  expire_if_due(*s);
  if (s->state != SessionState::kExam || s->submission) {
    throw WrongState("the exam is not open in session " + id);
  }
  if (answers.size() != s->exam.items.size() ||
      std::any_of(answers.begin(), answers.end(), [](const auto& a) { return !a; })) {
    throw IncompleteAnswers("expected an answer for each of the " +
                            std::to_string(s->exam.items.size()) + " items");
  }
  ExamSubmission sub;
  sub.session_id = id;
  for (const auto& a : answers) {
    if (*a < 0 || *a > 2) throw InvalidRequest("answers must be option indices 0..2");
    sub.answers.push_back(*a);
  }
  sub.score = dialogue::compute_reward(dialogue::grade_answers(id, s->exam, answers));
  sub.humanness_guess = guess;
  s->submission = sub;
  advance(*s, SessionState::kRevealed);
  spdlog::info("session {} exam submitted", id);
  return sub;
}

Json SessionService::reveal(const std::string& id, const std::string& token) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  check_token(*s, Seat::kPatient, token);
  if (s->state != SessionState::kRevealed && s->state != SessionState::kClosed) {
    throw WrongState("identity is disclosed only after the exam");
  }
  const auto& sub = *s->submission;
  Json key = Json::array();
  for (const auto& item : s->exam.items) key.push_back(item.correct_index);
  const auto result = dialogue::grade_answers(
      id, s->exam, std::vector<std::optional<int>>(sub.answers.begin(), sub.answers.end()));
  Json out{{"session_id", id},
           {"state", to_string(s->state)},
           {"group", s->group},
           {"condition", s->condition->description},
           {"educator", s->chatbot() ? "chatbot" : "human"},
           {"answers", sub.answers},
           {"answer_key", key},
           {"num_correct", result.num_correct()},
           {"total", result.total()},
           {"score", sub.score},
           {"humanness_guess", to_string(sub.humanness_guess)},
           {"pretest_score", s->pretest_score ? Json(*s->pretest_score) : Json(nullptr)},
           {"chat_ended_by", s->chat_ended_by}};
  if (s->chatbot()) out["model"] = s->condition->chatbot->config.model_name;
  return out;
}

Json SessionService::close(const std::string& id, const std::string& token) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  check_token(*s, Seat::kPatient, token);
  if (s->state != SessionState::kRevealed) {
    throw WrongState("session " + id + " can close only after reveal");
  }
  advance(*s, SessionState::kClosed);
  return view_locked(*s, Seat::kPatient);
}

Json SessionService::view(const std::string& id, Seat seat, const std::string& token) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  check_token(*s, seat, token);
  expire_if_due(*s);
  return view_locked(*s, seat);
}

Json SessionService::wait_view(const std::string& id, Seat seat, const std::string& token,
                               std::uint64_t version, std::chrono::milliseconds timeout) {
  auto s = find(id);
  std::unique_lock lock(s->mu);
  check_token(*s, seat, token);
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    expire_if_due(*s);
    if (s->version > version || stopping_) break;
    auto step = deadline - std::chrono::steady_clock::now();
    if (step <= std::chrono::steady_clock::duration::zero()) break;
    // Wake at least once a second so timer expiry is noticed.
    step = std::min<std::chrono::steady_clock::duration>(step, std::chrono::seconds(1));
    s->cv.wait_for(lock, step);
  }
  return view_locked(*s, seat);
}

SessionState SessionService::state(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  expire_if_due(*s);
  return s->state;
}

void SessionService::shutdown() {
  stopping_ = true;
  std::lock_guard lock(mu_);
  for (auto& [id, s] : sessions_) {
    std::lock_guard session_lock(s->mu);
    s->cv.notify_all();
  }
}

Json SessionService::view_locked(const Session& s, Seat seat) const {
  double remaining = options_.session_seconds;
  if (s.state == SessionState::kChatting) {
    remaining = std::max(0.0, options_.session_seconds - elapsed(s));
  } else if (static_cast<int>(s.state) > static_cast<int>(SessionState::kChatting)) {
    remaining = 0.0;
  }
  Json messages = Json::array();
  for (const auto& m : s.messages) {
    messages.push_back({{"seq", m.seq}, {"from", to_string(m.from)}, {"text", m.text}});
  }
  Json v{{"session_id", s.id},
         {"seat", to_string(seat)},
         {"state", to_string(s.state)},
         {"version", s.version},
         {"remaining_seconds", remaining},
         {"messages", messages},
         {"pretest_done", s.pretest_done},
         {"waiting_for_educator", !s.educator_joined},
         {"exam_submitted", s.submission.has_value()}};
  if (seat == Seat::kEducator) {
    v["note_id"] = s.note.note_id;
    v["note"] = forge::render_note(s.note);
  } else if (s.state == SessionState::kExam && !s.submission) {
    Json items = Json::array();
    for (const auto& item : s.exam.items) {
      items.push_back({{"question", item.question},
                       {"options", {item.options[0].text, item.options[1].text,
                                    item.options[2].text}}});
    }
    v["exam"] = {{"items", items}, {"humanness_choices", {"Yes", "No", "NotSure"}}};
  }
  return v;
}

}  // namespace arena::session
