#include "arena/judge/strategy.hpp"

#include <regex>

#include "arena/common/prompts.hpp"
#include "arena/common/text.hpp"
#include "arena/judge/content.hpp"

namespace arena::judge {

namespace {

struct StrategyInfo {
  std::string_view name;
  std::string_view label;
  std::string_view keyword;
};

constexpr std::array<StrategyInfo, 6> kInfo{{
    {"FosteringRelationship", "Fostering relationship", "fostering"},
    {"GatheringInformation", "Gathering information", "gathering"},
    {"ProvidingInformation", "Providing information", "providing"},
    {"DecisionMaking", "Decision making", "decision"},
    {"EnablingBehavior", "Enabling disease and treatment-related behavior", "enabling"},
    {"RespondingToEmotions", "Responding to emotions", "responding"},
}};

int checked_likert(long long v, std::string_view where) {
  if (v < 1 || v > 5) {
    throw LikertOutOfRange("likert score " + std::to_string(v) + " outside 1..5 in \"" +
                           std::string(where) + "\"");
  }
  return static_cast<int>(v);
}

std::string clean_evidence(std::string_view s) {
  s = text::trim(s);
  while (!s.empty() && (s.front() == '|' || s.front() == '-' || s.front() == ':' ||
                        s.front() == '*' || s.front() == ',' || s.front() == '.')) {
    s.remove_prefix(1);
    s = text::trim(s);
  }
  return std::string(s);
}

}  // namespace

std::string_view name(StrategyCategory c) { return kInfo[static_cast<std::size_t>(c)].name; }
std::string_view label(StrategyCategory c) { return kInfo[static_cast<std::size_t>(c)].label; }

StrategyCategory strategy_category_from_string(std::string_view s) {
  const std::string lower = text::to_lower(text::trim(s));
  for (std::size_t i = 0; i < kInfo.size(); ++i) {
    if (lower == text::to_lower(kInfo[i].name) || lower == text::to_lower(kInfo[i].label)) {
      return kStrategyCategories[i];
    }
  }
  throw std::invalid_argument("unknown strategy category: " + std::string(s));
}

StrategyVerdict parse_strategy_reply(std::string_view reply,
                                     std::optional<StrategyCategory> bare_category) {
  static const std::regex bare_re(R"(^\s*(-?\d+)\s*(/\s*5)?\s*\.?\s*$)");
  static const std::regex number_re(R"(-?\d+)");
  static const std::regex evidence_re(R"(evidence\s*:?)", std::regex::icase);
  static const std::regex list_marker_re(R"(^\s*(\d+\s*[.)]|[-*])\s*)");

  StrategyVerdict v;
  v.raw = std::string(reply);
  const std::string whole(reply);
  std::smatch m;
  if (std::regex_match(whole, m, bare_re)) {
    const int likert = checked_likert(std::stoll(m[1].str()), whole);
    if (bare_category) v.ratings[static_cast<std::size_t>(*bare_category)] = StrategyRating{likert, ""};
    return v;
  }

  std::optional<std::size_t> last;
  for (const auto& raw_line : text::split_lines(reply)) {
    // List numbering would otherwise read as the first digit of the line.
    const std::string line =
        std::regex_replace(std::string(text::trim(raw_line)), list_marker_re, "",
                           std::regex_constants::format_first_only);
    const std::string lower = text::to_lower(line);
    const auto first_digit = lower.find_first_of("0123456789");

    std::optional<std::size_t> which;
    std::size_t keyword_end = 0;
    std::size_t best_pos = std::string::npos;
    for (std::size_t i = 0; i < kInfo.size(); ++i) {
      const auto pos = lower.find(kInfo[i].keyword);
      if (pos != std::string::npos && pos < best_pos) {
        best_pos = pos;
        which = i;
        keyword_end = pos + kInfo[i].keyword.size();
      }
    }
    if (which && (first_digit == std::string::npos || best_pos > first_digit)) which.reset();

    if (!which) {
      // Continuation line carrying the evidence of the previous aspect.
      std::smatch em;
      if (last && v.ratings[*last] && v.ratings[*last]->evidence.empty() &&
          std::regex_search(line, em, evidence_re) && em.position(0) == 0) {
        v.ratings[*last]->evidence = clean_evidence(em.suffix().str());
      }
      continue;
    }
    if (v.ratings[*which]) continue;

    const std::string rest = line.substr(keyword_end);
    std::smatch nm;
    if (!std::regex_search(rest, nm, number_re)) continue;
    StrategyRating rating;
    rating.likert = checked_likert(std::stoll(nm[0].str()), line);
    std::string after = nm.suffix().str();
    std::smatch em;
    if (std::regex_search(after, em, evidence_re)) {
      rating.evidence = clean_evidence(em.suffix().str());
    } else {
      std::string_view a = text::trim(after);
      if (a.starts_with("/5")) a.remove_prefix(2);
      else if (a.starts_with("/ 5")) a.remove_prefix(3);
      rating.evidence = clean_evidence(a);
    }
    v.ratings[*which] = std::move(rating);
    last = which;
  }
  return v;
}

std::string format_conversation(const dialogue::ConversationTranscript& transcript) {
  std::string out;
  for (const auto& t : transcript.turns) {
    out += t.speaker == Speaker::kEducator ? "Agent: " : "Patient: ";
    out += t.text;
    out += '\n';
  }
  return out;
}

std::string strategy_judge_prompt(const dialogue::ConversationTranscript& transcript) {
  return prompts::fill(prompts::load("strategy_judge.v1"),
                       {{"conversation_history", format_conversation(transcript)}});
}

double normalized_strategy_score(int likert, double log_denominator) {
  checked_likert(likert, std::to_string(likert));
  if (!(log_denominator > 0.0)) throw std::invalid_argument("log denominator must be positive");
  return static_cast<double>(likert) / log_denominator;
}

double strategy_score(const dialogue::ConversationTranscript& transcript,
                      const StrategyVerdict& verdict, StrategyCategory k) {
  if (transcript.exchange_pairs() == 0) {
    throw EmptyTranscript("transcript " + transcript.scenario_id +
                          " has no educator utterances");
  }
  const auto& rating = verdict.at(k);
  if (!rating) {
    throw UnparseableVerdict("judge reply has no score for " + std::string(label(k)));
  }
  return normalized_strategy_score(rating->likert,
                                   log_token_denominator(transcript.educator_token_total()));
}

double strategy_score(const dialogue::ConversationTranscript& transcript,
                      gateway::ChatBackend& judge, const gateway::EndpointConfig& config,
                      StrategyCategory k) {
  if (transcript.exchange_pairs() == 0) {
    throw EmptyTranscript("transcript " + transcript.scenario_id +
                          " has no educator utterances");
  }
  const std::vector<gateway::ChatMessage> messages{
      {gateway::Role::kUser, strategy_judge_prompt(transcript)}};
  const auto verdict = parse_strategy_reply(judge.complete(config, messages), k);
  return strategy_score(transcript, verdict, k);
}

}  // namespace arena::judge
