#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "arena/common/speaker.hpp"

namespace arena::dialogue {

/// Turn cap default: exchange pairs (one educator plus one patient
/// utterance) per simulated dialogue.
inline constexpr int kDefaultTurnCap = 20;

enum class Termination { kTurnCap, kNaturalClose, kError };

std::string_view to_string(Termination t);
Termination termination_from_string(std::string_view s);

struct Turn {
  Speaker speaker = Speaker::kEducator;
  std::string text;
  /// Whitespace token count of `text`; always recomputed by make_turn.
  std::size_t token_count = 0;

  friend bool operator==(const Turn&, const Turn&) = default;
};

Turn make_turn(Speaker speaker, std::string text);

struct ConversationTranscript {
  std::string scenario_id;
  std::vector<Turn> turns;
  Termination terminated_by = Termination::kTurnCap;

  /// Number of educator utterances; a trailing educator utterance without a
  /// patient reply counts as a (partial) pair.
  std::size_t exchange_pairs() const;
  std::vector<const Turn*> educator_turns() const;
  std::size_t educator_token_total() const;

  friend bool operator==(const ConversationTranscript&,
                         const ConversationTranscript&) = default;
};

/// Throws std::invalid_argument when roles do not alternate from the
/// educator, a token count is stale, or the pair count exceeds `turn_cap`.
void validate_transcript(const ConversationTranscript& t,
                         int turn_cap = kDefaultTurnCap);

}  // namespace arena::dialogue
