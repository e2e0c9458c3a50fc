#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "arena/common/json.hpp"
#include "arena/dialogue/arena.hpp"
#include "arena/forge/conversation.hpp"
#include "arena/forge/note.hpp"
#include "arena/gateway/types.hpp"

namespace arena::dataset {

class MissingNote : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using NoteIndex = std::map<std::string, forge::DischargeNote>;

NoteIndex index_notes(std::span<const forge::DischargeNote> notes);

/// Supervised fine-tuning sample: the note lives only in `system`; the
/// educator speaks as assistant and the patient as user.
struct SftRecord {
  std::string note_id;
  std::string system;
  std::vector<gateway::ChatMessage> messages;

  friend bool operator==(const SftRecord&, const SftRecord&) = default;
};

Json encode(const SftRecord& r);
SftRecord decode_sft(const Json& j);

/// Throws MissingNote when a conversation's note_id is not in `notes`.
std::vector<SftRecord> make_sft_records(std::span<const forge::ReferenceConversation> conversations,
                                        const NoteIndex& notes,
                                        std::string_view closing_marker =
                                            dialogue::kDefaultClosingMarker);
std::string export_sft(std::span<const forge::ReferenceConversation> conversations,
                       const NoteIndex& notes, const std::filesystem::path& path,
                       std::string_view closing_marker = dialogue::kDefaultClosingMarker);
std::vector<SftRecord> read_sft(const std::filesystem::path& path);

struct RlStep {
  /// Messages the educator saw before acting, system prompt excluded.
  std::vector<gateway::ChatMessage> context;
  std::string action;

  friend bool operator==(const RlStep&, const RlStep&) = default;
};

struct RlItem {
  std::optional<int> chosen_index;
  bool correct = false;

  friend bool operator==(const RlItem&, const RlItem&) = default;
};

/// Trainer-facing view of one episode.
struct RlEpisodeRecord {
  std::string scenario_id;
  /// Educator system prompt; absent when the note was not supplied.
  std::optional<std::string> system;
  std::vector<RlStep> steps;
  double reward = 0.0;
  std::vector<RlItem> exam_detail;
  dialogue::Termination terminated_by = dialogue::Termination::kTurnCap;

  friend bool operator==(const RlEpisodeRecord&, const RlEpisodeRecord&) = default;
};

Json encode(const RlEpisodeRecord& r);
RlEpisodeRecord decode_rl_episode(const Json& j);

RlEpisodeRecord make_rl_record(const dialogue::Episode& episode,
                               const forge::DischargeNote* note,
                               std::string_view closing_marker =
                                   dialogue::kDefaultClosingMarker);

/// One record per successful episode, in input order; error outcomes are
/// skipped. `notes` may be empty.
std::string export_rl_episodes(std::span<const dialogue::EpisodeOutcome> episodes,
                               const NoteIndex& notes, const std::filesystem::path& path,
                               std::string_view closing_marker =
                                   dialogue::kDefaultClosingMarker);
std::vector<RlEpisodeRecord> read_rl_episodes(const std::filesystem::path& path);

}  // namespace arena::dataset
