#include "arena/judge/report.hpp"

#include <spdlog/spdlog.h>

#include "arena/gateway/errors.hpp"

namespace arena::judge {

namespace {

std::string error_marker(const std::exception& e) {
  if (dynamic_cast<const gateway::Timeout*>(&e)) return std::string("Timeout: ") + e.what();
  if (dynamic_cast<const gateway::EndpointUnreachable*>(&e)) {
    return std::string("EndpointUnreachable: ") + e.what();
  }
  if (dynamic_cast<const LikertOutOfRange*>(&e)) {
    return std::string("LikertOutOfRange: ") + e.what();
  }
  if (dynamic_cast<const UnparseableVerdict*>(&e)) {
    return std::string("UnparseableVerdict: ") + e.what();
  }
  if (dynamic_cast<const gateway::GatewayError*>(&e)) {
    return std::string("MalformedResponse: ") + e.what();
  }
  return std::string("Error: ") + e.what();
}

}  // namespace

JudgeReport judge_report(const dialogue::ConversationTranscript& transcript,
                         gateway::ChatBackend& judge, const gateway::EndpointConfig& config) {
  JudgeReport report;
  report.scenario_id = transcript.scenario_id;
  report.educator_utterances = transcript.exchange_pairs();
  report.educator_tokens = transcript.educator_token_total();
  if (report.educator_utterances == 0) {
    throw EmptyTranscript("transcript " + transcript.scenario_id +
                          " has no educator utterances");
  }
  for (std::size_t i = 0; i < 6; ++i) {
    report.content[i].category = kContentCategories[i];
    report.strategy[i].category = kStrategyCategories[i];
  }

  try {
    report.labelings = classify_sentences(transcript, judge, config);
    for (auto& cell : report.content) {
      cell.score = content_score(transcript, report.labelings, cell.category);
    }
  } catch (const std::exception& e) {
    const std::string marker = error_marker(e);
    spdlog::warn("{}: content judging failed: {}", transcript.scenario_id, marker);
    for (auto& cell : report.content) {
      cell.score.reset();
      cell.error = marker;
    }
  }

  StrategyVerdict verdict;
  try {
    const std::vector<gateway::ChatMessage> messages{
        {gateway::Role::kUser, strategy_judge_prompt(transcript)}};
    report.strategy_raw = judge.complete(config, messages);
    verdict = parse_strategy_reply(report.strategy_raw);
  } catch (const std::exception& e) {
    const std::string marker = error_marker(e);
    spdlog::warn("{}: strategy judging failed: {}", transcript.scenario_id, marker);
    for (auto& cell : report.strategy) cell.error = marker;
    return report;
  }
  for (auto& cell : report.strategy) {
    try {
      cell.score = strategy_score(transcript, verdict, cell.category);
      cell.likert = verdict.at(cell.category)->likert;
      cell.evidence = verdict.at(cell.category)->evidence;
    } catch (const std::exception& e) {
      cell.error = error_marker(e);
    }
  }
  return report;
}

}  // namespace arena::judge
