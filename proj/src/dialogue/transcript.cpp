#include "arena/dialogue/transcript.hpp"

#include <stdexcept>

#include "arena/common/text.hpp"

namespace arena::dialogue {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::kTurnCap:
      return "turn_cap";
    case Termination::kNaturalClose:
      return "natural_close";
    case Termination::kError:
      return "error";
  }
  return "error";
}

Termination termination_from_string(std::string_view s) {
  if (s == "turn_cap") return Termination::kTurnCap;
  if (s == "natural_close") return Termination::kNaturalClose;
  if (s == "error") return Termination::kError;
  throw std::invalid_argument("unknown termination: " + std::string(s));
}

Turn make_turn(Speaker speaker, std::string text) {
  Turn t{speaker, std::move(text), 0};
  t.token_count = text::count_whitespace_tokens(t.text);
  return t;
}

std::size_t ConversationTranscript::exchange_pairs() const {
  std::size_t n = 0;
  for (const auto& t : turns) {
    if (t.speaker == Speaker::kEducator) ++n;
  }
  return n;
}

std::vector<const Turn*> ConversationTranscript::educator_turns() const {
  std::vector<const Turn*> out;
  for (const auto& t : turns) {
    if (t.speaker == Speaker::kEducator) out.push_back(&t);
  }
  return out;
}

std::size_t ConversationTranscript::educator_token_total() const {
  std::size_t n = 0;
  for (const auto& t : turns) {
    if (t.speaker == Speaker::kEducator) n += t.token_count;
  }
  return n;
}

void validate_transcript(const ConversationTranscript& t, int turn_cap) {
  for (std::size_t i = 0; i < t.turns.size(); ++i) {
    const Speaker expected = i % 2 == 0 ? Speaker::kEducator : Speaker::kPatient;
    if (t.turns[i].speaker != expected) {
      throw std::invalid_argument("transcript " + t.scenario_id + ": turn " +
                                  std::to_string(i) + " breaks alternation");
    }
    if (t.turns[i].token_count != text::count_whitespace_tokens(t.turns[i].text) ||
        t.turns[i].token_count == 0) {
      throw std::invalid_argument("transcript " + t.scenario_id + ": turn " +
                                  std::to_string(i) + " has a bad token count");
    }
  }
  if (t.exchange_pairs() > static_cast<std::size_t>(turn_cap)) {
    throw std::invalid_argument("transcript " + t.scenario_id +
                                " exceeds the turn cap");
  }
}

}  // namespace arena::dialogue
