#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "arena/dialogue/transcript.hpp"
#include "arena/gateway/backend.hpp"

namespace arena::judge {

class LikertOutOfRange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Judge reply that carries no score for a requested category.
class UnparseableVerdict : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StrategyCategory {
  kFosteringRelationship,
  kGatheringInformation,
  kProvidingInformation,
  kDecisionMaking,
  kEnablingBehavior,
  kRespondingToEmotions,
};

inline constexpr std::array<StrategyCategory, 6> kStrategyCategories{
    StrategyCategory::kFosteringRelationship, StrategyCategory::kGatheringInformation,
    StrategyCategory::kProvidingInformation,  StrategyCategory::kDecisionMaking,
    StrategyCategory::kEnablingBehavior,      StrategyCategory::kRespondingToEmotions};

/// "FosteringRelationship", ...
std::string_view name(StrategyCategory c);
/// Aspect name as written in the judge prompt, e.g. "Fostering relationship".
std::string_view label(StrategyCategory c);
StrategyCategory strategy_category_from_string(std::string_view s);

struct StrategyRating {
  int likert = 1;
  std::string evidence;

  friend bool operator==(const StrategyRating&, const StrategyRating&) = default;
};

struct StrategyVerdict {
  /// Indexed like kStrategyCategories; nullopt where the reply had no line
  /// for the aspect.
  std::array<std::optional<StrategyRating>, 6> ratings;
  std::string raw;

  const std::optional<StrategyRating>& at(StrategyCategory c) const {
    return ratings[static_cast<std::size_t>(c)];
  }
};

/// Reads "<aspect>: <score>/5 | Evidence: <text>" lines; numbering,
/// markdown emphasis and other separators are tolerated. A reply that is a
/// bare integer is taken as the score of `bare_category` when given. Any
/// score outside 1..5 throws LikertOutOfRange.
StrategyVerdict parse_strategy_reply(
    std::string_view reply, std::optional<StrategyCategory> bare_category = std::nullopt);

/// Transcript rendered for the judge: one "Agent: ..." / "Patient: ..." line
/// per turn.
std::string format_conversation(const dialogue::ConversationTranscript& transcript);
std::string strategy_judge_prompt(const dialogue::ConversationTranscript& transcript);

/// likert / log_denominator.
double normalized_strategy_score(int likert, double log_denominator);

/// likert_k / ln(max(educator tokens, 2)). Throws EmptyTranscript when the
/// transcript has no educator turn, UnparseableVerdict when the verdict lacks
/// category k.
double strategy_score(const dialogue::ConversationTranscript& transcript,
                      const StrategyVerdict& verdict, StrategyCategory k);

/// Sends the whole transcript once and scores category k.
double strategy_score(const dialogue::ConversationTranscript& transcript,
                      gateway::ChatBackend& judge, const gateway::EndpointConfig& config,
                      StrategyCategory k);

}  // namespace arena::judge
