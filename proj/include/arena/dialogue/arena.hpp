#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "arena/dialogue/exam_result.hpp"
#include "arena/dialogue/transcript.hpp"
#include "arena/forge/exam.hpp"
#include "arena/forge/note.hpp"
#include "arena/gateway/backend.hpp"

namespace arena::dialogue {

inline constexpr std::string_view kDefaultClosingMarker = "<<END>>";

struct DialogueOptions {
  int turn_cap = kDefaultTurnCap;
  std::string closing_marker{kDefaultClosingMarker};
};

enum class FailureKind {
  kEndpointUnreachable,
  kTimeout,
  kMalformedResponse,
  kEmptyUtterance,
};

std::string_view to_string(FailureKind kind);

/// A simulation aborted; carries whatever transcript existed at that point
/// (terminated_by = error).
class DialogueError : public std::runtime_error {
 public:
  DialogueError(FailureKind kind, const std::string& what,
                ConversationTranscript partial)
      : std::runtime_error(what), kind_(kind), partial_(std::move(partial)) {}

  FailureKind kind() const { return kind_; }
  const ConversationTranscript& partial() const { return partial_; }

 private:
  FailureKind kind_;
  ConversationTranscript partial_;
};

/// Educator system prompt: role instructions with the rendered note.
std::string educator_system_prompt(const forge::DischargeNote& note,
                                   std::string_view closing_marker);
/// Patient persona. Never contains note text.
std::string patient_system_prompt(std::string_view closing_marker);
std::string exam_item_prompt(const forge::ComprehensionItem& item);

/// Message list the educator endpoint sees before its next utterance:
/// system prompt, kickoff line, then its own turns as assistant and the
/// patient's as user.
std::vector<gateway::ChatMessage> educator_view(
    const std::string& system_prompt, std::span<const Turn> turns);
/// The patient's mirror image: persona, then educator turns as user.
std::vector<gateway::ChatMessage> patient_view(const std::string& persona,
                                               std::span<const Turn> turns);

/// Runs the educator/patient dialogue until turn_cap exchange pairs or until
/// either side emits the closing marker. A whitespace-only reply is asked
/// again once; a second one raises DialogueError(kEmptyUtterance). Endpoint
/// failures raise DialogueError with the partial transcript.
ConversationTranscript run_dialogue(const std::string& scenario_id,
                                    const forge::DischargeNote& note,
                                    gateway::ChatBackend& educator,
                                    const gateway::EndpointConfig& educator_config,
                                    gateway::ChatBackend& patient,
                                    const gateway::EndpointConfig& patient_config,
                                    const DialogueOptions& options = {});

/// Letter (A/B/C) or option text picked by a free-form reply; nullopt is
/// Abstain. The first standalone letter wins; an "a"/"A" followed by a word
/// is read as the article unless preceded by option/choice/letter/answer.
/// Without a letter, the option sharing the longest common substring with
/// the reply wins if that substring covers at least half the option text
/// (4 chars minimum) and no other option ties it.
std::optional<int> extract_choice(std::string_view reply,
                                  const forge::ComprehensionItem& item);

/// Asks the patient one item at a time, with the persona and the full
/// transcript as context (never the note).
ExamResult administer_exam(const forge::ComprehensionExam& exam,
                           const ConversationTranscript& transcript,
                           gateway::ChatBackend& patient,
                           const gateway::EndpointConfig& patient_config,
                           const DialogueOptions& options = {});

struct Scenario {
  std::string scenario_id;
  forge::DischargeNote note;
  forge::ComprehensionExam exam;
};

struct Episode {
  std::string scenario_id;
  ConversationTranscript transcript;
  ExamResult exam_result;
  /// Always compute_reward(exam_result).
  double reward = 0.0;

  friend bool operator==(const Episode&, const Episode&) = default;
};

struct EpisodeError {
  std::string scenario_id;
  std::string kind;
  std::string message;
  std::optional<ConversationTranscript> partial;

  friend bool operator==(const EpisodeError&, const EpisodeError&) = default;
};

using EpisodeOutcome = std::variant<Episode, EpisodeError>;

/// One scenario end to end: dialogue, exam, reward.
Episode run_episode(const Scenario& scenario, gateway::ChatBackend& educator,
                    const gateway::EndpointConfig& educator_config,
                    gateway::ChatBackend& patient,
                    const gateway::EndpointConfig& patient_config,
                    const DialogueOptions& options = {});

struct BatchConfig {
  gateway::Endpoint educator;
  gateway::Endpoint patient;
  DialogueOptions dialogue;
  int parallelism = 1;
};

/// Runs every scenario with fresh per-session backends on up to
/// `parallelism` worker threads. Output slot i belongs to scenarios[i];
/// a failing scenario yields an EpisodeError in its slot.
std::vector<EpisodeOutcome> run_batch(std::span<const Scenario> scenarios,
                                      const BatchConfig& config);

/// Section headings and section lines of at least `min_chars` characters
/// from the note that occur verbatim in any of the messages.
std::vector<std::string> find_note_leaks(
    const forge::DischargeNote& note,
    std::span<const gateway::ChatMessage> messages, std::size_t min_chars = 24);

}  // namespace arena::dialogue
