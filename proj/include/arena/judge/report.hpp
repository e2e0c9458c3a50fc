#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "arena/judge/content.hpp"
#include "arena/judge/strategy.hpp"

namespace arena::judge {

struct ContentCell {
  ContentCategory category = ContentCategory::kReturnToED;
  std::optional<double> score;
  /// Set instead of `score` when the cell could not be computed.
  std::optional<std::string> error;

  friend bool operator==(const ContentCell&, const ContentCell&) = default;
};

struct StrategyCell {
  StrategyCategory category = StrategyCategory::kFosteringRelationship;
  std::optional<int> likert;
  std::optional<double> score;
  std::string evidence;
  std::optional<std::string> error;

  friend bool operator==(const StrategyCell&, const StrategyCell&) = default;
};

struct JudgeReport {
  std::string scenario_id;
  std::size_t educator_utterances = 0;
  std::size_t educator_tokens = 0;
  std::array<ContentCell, 6> content;
  std::array<StrategyCell, 6> strategy;
  std::vector<SentenceLabeling> labelings;
  std::string strategy_raw;

  friend bool operator==(const JudgeReport&, const JudgeReport&) = default;
};

/// Content and strategy tables for one transcript. Judge failures become
/// per-cell error markers; a transcript without educator turns throws
/// EmptyTranscript.
JudgeReport judge_report(const dialogue::ConversationTranscript& transcript,
                         gateway::ChatBackend& judge,
                         const gateway::EndpointConfig& config);

}  // namespace arena::judge
