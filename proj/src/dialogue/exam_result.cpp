#include "arena/dialogue/exam_result.hpp"

namespace arena::dialogue {

std::size_t ExamResult::num_correct() const {
  std::size_t n = 0;
  for (const auto& item : items) {
    if (item.correct) ++n;
  }
  return n;
}

ExamResult grade_answers(const std::string& scenario_id,
                         const forge::ComprehensionExam& exam,
                         std::span<const std::optional<int>> chosen) {
  if (chosen.size() != exam.items.size()) {
    throw std::invalid_argument("expected " + std::to_string(exam.items.size()) +
                                " answers, got " + std::to_string(chosen.size()));
  }
  ExamResult result;
  result.scenario_id = scenario_id;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    ItemOutcome outcome;
    outcome.chosen_index = chosen[i];
    outcome.correct = chosen[i] && *chosen[i] == exam.items[i].correct_index;
    result.items.push_back(std::move(outcome));
  }
  return result;
}

double compute_reward(const ExamResult& result) {
  const std::size_t total = result.total();
  if (total == 0) throw EmptyExam("exam result " + result.scenario_id + " has no items");
  return static_cast<double>(result.num_correct()) / static_cast<double>(total);
}

}  // namespace arena::dialogue
