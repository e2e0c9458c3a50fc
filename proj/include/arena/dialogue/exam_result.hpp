#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "arena/forge/exam.hpp"

namespace arena::dialogue {

class EmptyExam : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ItemOutcome {
  /// nullopt is Abstain, which always counts as wrong.
  std::optional<int> chosen_index;
  bool correct = false;
  /// Raw patient reply; empty for answers that did not come from a model.
  std::string reply;

  friend bool operator==(const ItemOutcome&, const ItemOutcome&) = default;
};

struct ExamResult {
  std::string scenario_id;
  std::vector<ItemOutcome> items;

  std::size_t total() const { return items.size(); }
  std::size_t num_correct() const;

  friend bool operator==(const ExamResult&, const ExamResult&) = default;
};

/// Grades chosen answers against the exam key. `chosen` must have one entry
/// per item.
ExamResult grade_answers(const std::string& scenario_id,
                         const forge::ComprehensionExam& exam,
                         std::span<const std::optional<int>> chosen);

/// Fraction of items answered correctly: (1/T) * sum of r_t with r_t in
/// {0, 1}. Throws EmptyExam when T = 0.
double compute_reward(const ExamResult& result);

}  // namespace arena::dialogue
