#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace arena::forge {

enum class OptionKind { kAnswer, kDistractor, kIrrelevant };

std::string_view to_string(OptionKind kind);
OptionKind option_kind_from_string(std::string_view s);

struct ExamOption {
  std::string text;
  OptionKind kind = OptionKind::kAnswer;

  friend bool operator==(const ExamOption&, const ExamOption&) = default;
};

/// Three-option multiple-choice item; exactly one option is the answer and
/// correct_index points at it.
struct ComprehensionItem {
  std::string question;
  std::array<ExamOption, 3> options;
  int correct_index = 0;

  friend bool operator==(const ComprehensionItem&,
                         const ComprehensionItem&) = default;
};

struct ComprehensionExam {
  static constexpr std::size_t kMinItems = 5;
  static constexpr std::size_t kMaxItems = 10;

  std::string note_id;
  std::vector<ComprehensionItem> items;

  friend bool operator==(const ComprehensionExam&,
                         const ComprehensionExam&) = default;
};

/// Throws SchemaError if an item breaks the one-answer rule or
/// correct_index is wrong, GenerationRejected if the item count is outside
/// [5, 10].
void validate_exam(const ComprehensionExam& exam);

/// Reads the generator's list-of-records reply. Accepted item shapes:
///   {"question", "answer", "distractor", "irrelevant"}
///   {"question", "options": [{"text", "kind"}, x3]}
/// Code fences and prose around the JSON array are tolerated. The flat shape
/// yields (answer, distractor, irrelevant) order and the options shape keeps
/// its order; call shuffle_options before administering. Throws SchemaError / GenerationRejected.
ComprehensionExam parse_exam_reply(std::string_view reply, std::string note_id);

/// Permutes each item's options with a seed derived from (note_id, item
/// index) and updates correct_index. Stable across runs.
void shuffle_options(ComprehensionExam& exam);

/// Soft coverage check: names of the six content topics that no question
/// appears to address.
std::vector<std::string> uncovered_topics(const ComprehensionExam& exam);

}  // namespace arena::forge
