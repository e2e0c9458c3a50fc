#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arena/common/speaker.hpp"
#include "arena/forge/exam.hpp"

namespace arena::forge {

struct ReferenceTurn {
  Speaker speaker = Speaker::kEducator;
  std::string text;
  /// Supporting quote from the note, educator turns only.
  std::optional<std::string> evidence;

  friend bool operator==(const ReferenceTurn&, const ReferenceTurn&) = default;
};

/// Reference educator/patient dialogue; roles alternate, educator first.
struct ReferenceConversation {
  std::string note_id;
  std::vector<ReferenceTurn> turns;

  friend bool operator==(const ReferenceConversation&,
                         const ReferenceConversation&) = default;
};

/// Throws GenerationRejected unless the turns alternate starting with the
/// educator and there are at least two of them.
void validate_conversation(const ReferenceConversation& conv);

/// Parses "Educator: ..." / "Patient: ..." lines with optional
/// "Evidence: ..." lines after educator turns; unlabeled lines continue the
/// previous utterance. Doctor/Physician/Nurse/Chatbot are read as educator.
ReferenceConversation parse_conversation_reply(std::string_view reply,
                                               std::string note_id);

/// Soft check: indices of exam items whose answer is never mentioned by
/// the educator (keyword overlap).
std::vector<std::size_t> unmentioned_items(const ReferenceConversation& conv,
                                           const ComprehensionExam& exam);

}  // namespace arena::forge
