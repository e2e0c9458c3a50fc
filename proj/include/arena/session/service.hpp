#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arena/common/json.hpp"
#include "arena/dialogue/arena.hpp"
#include "arena/forge/exam.hpp"
#include "arena/forge/note.hpp"
#include "arena/gateway/backend.hpp"

namespace arena::session {

class SessionError : public std::runtime_error {
 public:
  SessionError(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  /// Error name as exposed to clients, e.g. "WrongState".
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

#define ARENA_SESSION_ERROR(Name)                                  \
  class Name : public SessionError {                               \
   public:                                                         \
    explicit Name(const std::string& what) : SessionError(#Name, what) {} \
  }

ARENA_SESSION_ERROR(UnknownSession);
ARENA_SESSION_ERROR(UnknownNote);
ARENA_SESSION_ERROR(UnknownExam);
ARENA_SESSION_ERROR(UnknownGroup);
ARENA_SESSION_ERROR(DuplicateSession);
ARENA_SESSION_ERROR(InvalidRequest);
ARENA_SESSION_ERROR(Forbidden);
ARENA_SESSION_ERROR(WrongState);
ARENA_SESSION_ERROR(SessionExpired);
ARENA_SESSION_ERROR(IncompleteAnswers);
ARENA_SESSION_ERROR(EndpointError);

#undef ARENA_SESSION_ERROR

/// Monotone order; a session never moves backwards.
enum class SessionState { kCreated, kPretest, kChatting, kExam, kRevealed, kClosed };
enum class Seat { kPatient, kEducator };
enum class HumannessGuess { kYes, kNo, kNotSure };

std::string_view to_string(SessionState s);
std::string_view to_string(Seat s);
Seat seat_from_string(std::string_view s);
/// "Yes", "No", "NotSure".
std::string_view to_string(HumannessGuess g);
/// Also accepts "Not Sure".
HumannessGuess humanness_from_string(std::string_view s);

/// What a group letter stands for. Letters are opaque; operators decide the
/// mapping.
struct Condition {
  /// Human-readable condition, disclosed at reveal.
  std::string description;
  /// Chatbot-backed educator seat when set, human educator otherwise.
  std::optional<gateway::Endpoint> chatbot;
};

struct Catalog {
  std::map<std::string, forge::DischargeNote> notes;
  std::map<std::string, forge::ComprehensionExam> exams;
};

struct ServiceOptions {
  double session_seconds = 900.0;
  double grace_seconds = 1.0;
  std::string closing_marker{dialogue::kDefaultClosingMarker};
};

/// Seconds on a monotonic clock.
using Clock = std::function<double()>;
using TokenSource = std::function<std::string()>;

Clock steady_clock_seconds();
/// 128-bit random hex tokens.
TokenSource random_tokens();

struct CreateRequest {
  /// Generated when empty.
  std::string session_id;
  std::string group;
  std::string note_id;
  std::string exam_id;
  /// Study subject numbers; names or e-mail addresses are rejected.
  std::string patient_subject;
  std::string educator_subject;
};

struct CreatedSession {
  std::string session_id;
  std::string patient_token;
  /// Absent for chatbot-backed groups.
  std::optional<std::string> educator_token;
};

struct ChatEntry {
  std::uint64_t seq = 0;
  Seat from = Seat::kPatient;
  std::string text;
  double elapsed_seconds = 0.0;
};

struct ExamSubmission {
  std::string session_id;
  std::vector<int> answers;
  double score = 0.0;
  HumannessGuess humanness_guess = HumannessGuess::kNotSure;
};

/// Blinded, timed live sessions. Every public call is thread-safe; each
/// session is guarded by its own mutex and every change bumps a version
/// that waiters can block on.
class SessionService {
 public:
  SessionService(Catalog catalog, std::map<std::string, Condition> groups,
                 ServiceOptions options = {}, Clock clock = steady_clock_seconds(),
                 TokenSource tokens = random_tokens());

  CreatedSession create_session(const CreateRequest& request);

  /// A seat holder connects. The patient joining moves created -> pretest;
  /// the educator seat of a human group must join before chatting starts.
  Json join(const std::string& id, Seat seat, const std::string& token);
  /// Stores the pre-test score (0..36 scale, optional) and starts the chat
  /// once the educator seat is ready.
  Json submit_pretest(const std::string& id, const std::string& token,
                      std::optional<int> score);
  /// Appends a message. In chatbot groups a patient message yields exactly
  /// one educator reply from the bound endpoint, or EndpointError.
  Json post_message(const std::string& id, Seat seat, const std::string& token,
                    const std::string& text);
  /// Either participant may end the chat early.
  Json finish_chat(const std::string& id, Seat seat, const std::string& token);
  ExamSubmission submit_exam(const std::string& id, const std::string& token,
                             const std::vector<std::optional<int>>& answers,
                             HumannessGuess guess);
  /// Identity disclosure; only after the exam.
  Json reveal(const std::string& id, const std::string& token);
  Json close(const std::string& id, const std::string& token);

  /// Seat-specific snapshot. Patient views never carry the note, the group,
  /// the endpoint, or the answer key.
  Json view(const std::string& id, Seat seat, const std::string& token);
  /// Blocks until the session changes past `version` or `timeout` passes;
  /// returns the view either way.
  Json wait_view(const std::string& id, Seat seat, const std::string& token,
                 std::uint64_t version, std::chrono::milliseconds timeout);

  SessionState state(const std::string& id);
  std::vector<std::string> session_ids() const;
  /// Stops all waiters (server shutdown).
  void shutdown();

 private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& id) const;
  void check_token(const Session& s, Seat seat, const std::string& token) const;
  /// Server-side expiry: chatting past budget + grace moves to exam.
  void expire_if_due(Session& s);
  void advance(Session& s, SessionState next);
  void maybe_start_chat(Session& s);
  Json view_locked(const Session& s, Seat seat) const;
  double elapsed(const Session& s) const;

  Catalog catalog_;
  std::map<std::string, Condition> groups_;
  ServiceOptions options_;
  Clock clock_;
  TokenSource tokens_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::atomic<bool> stopping_{false};
};

/// Default letter mapping: A human non-expert, B chatbot, C human expert.
std::map<std::string, Condition> default_groups(gateway::Endpoint chatbot);

}  // namespace arena::session
