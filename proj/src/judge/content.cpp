#include "arena/judge/content.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include <spdlog/spdlog.h>

#include "arena/common/prompts.hpp"
#include "arena/common/text.hpp"

namespace arena::judge {

namespace {

struct CategoryInfo {
  ContentCategory category;
  std::string_view code;
  std::string_view name;
  const char* name_pattern;
};

constexpr std::array<CategoryInfo, 7> kInfo{{
    {ContentCategory::kReturnToED, "c1", "ReturnToED", R"(return\s*to|returntoed)"},
    {ContentCategory::kMedication, "c2", "Medication", R"(medication)"},
    {ContentCategory::kDiagnosis, "c3", "Diagnosis", R"(diagnos)"},
    {ContentCategory::kPostDischargeTreatment, "c4", "PostDischargeTreatment",
     R"(post[- ]?discharge)"},
    {ContentCategory::kTestsAndTreatments, "c5", "TestsAndTreatments",
     R"(tests?\s*(and|&)\s*treatments?)"},
    {ContentCategory::kFollowUp, "c6", "FollowUp", R"(follow[- ]?up)"},
    {ContentCategory::kNA, "NA", "NA", R"(\bna\b|n/a|no matching)"},
}};

const CategoryInfo& info(ContentCategory c) {
  return kInfo[static_cast<std::size_t>(c)];
}

std::vector<ContentCategory> normalize(std::vector<ContentCategory> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  if (labels.size() > 1 && labels.back() == ContentCategory::kNA) labels.pop_back();
  return labels;
}

}  // namespace

std::string_view code(ContentCategory c) { return info(c).code; }
std::string_view name(ContentCategory c) { return info(c).name; }

ContentCategory content_category_from_string(std::string_view s) {
  const std::string lower = text::to_lower(text::trim(s));
  for (const auto& i : kInfo) {
    if (lower == text::to_lower(i.code) || lower == text::to_lower(i.name)) {
      return i.category;
    }
  }
  throw std::invalid_argument("unknown content category: " + std::string(s));
}

std::optional<std::vector<ContentCategory>> parse_content_labels(std::string_view reply) {
  static const std::regex code_re(R"((^|[^a-z0-9])c\s*([1-6])(?![0-9]))");
  static const std::regex na_re(R"((^|[^a-z0-9])(na|n/a)($|[^a-z0-9]))");
  const std::string lower = text::to_lower(reply);

  std::vector<ContentCategory> labels;
  for (auto it = std::sregex_iterator(lower.begin(), lower.end(), code_re);
       it != std::sregex_iterator(); ++it) {
    labels.push_back(static_cast<ContentCategory>((*it)[2].str()[0] - '1'));
  }
  if (std::regex_search(lower, na_re)) labels.push_back(ContentCategory::kNA);
  if (labels.empty()) {
    for (const auto& i : kInfo) {
      if (std::regex_search(lower, std::regex(i.name_pattern))) {
        labels.push_back(i.category);
      }
    }
  }
  if (labels.empty()) return std::nullopt;
  return normalize(std::move(labels));
}

std::string content_judge_prompt(std::string_view sentence) {
  return prompts::fill(prompts::load("content_judge.v1"),
                       {{"sentence", std::string(sentence)}});
}

std::vector<SentenceLabeling> classify_sentences(
    const dialogue::ConversationTranscript& transcript, gateway::ChatBackend& judge,
    const gateway::EndpointConfig& config) {
  std::vector<SentenceLabeling> out;
  const auto educator = transcript.educator_turns();
  for (std::size_t u = 0; u < educator.size(); ++u) {
    const auto sentences = text::split_sentences(educator[u]->text);
    for (std::size_t s = 0; s < sentences.size(); ++s) {
      const std::vector<gateway::ChatMessage> messages{
          {gateway::Role::kUser, content_judge_prompt(sentences[s])}};
      SentenceLabeling l;
      l.utterance_index = u;
      l.sentence_index = s;
      l.sentence = sentences[s];
      l.raw = judge.complete(config, messages);
      if (auto labels = parse_content_labels(l.raw)) {
        l.labels = std::move(*labels);
      } else {
        spdlog::warn("{}: utterance {} sentence {}: unreadable judge reply, using NA: \"{}\"",
                     transcript.scenario_id, u, s, l.raw);
        l.labels = {ContentCategory::kNA};
        l.parsed = false;
      }
      out.push_back(std::move(l));
    }
  }
  return out;
}

double log_token_denominator(std::size_t tokens) {
  return std::log(static_cast<double>(std::max<std::size_t>(tokens, 2)));
}

double content_score(std::span<const UtteranceCount> utterances) {
  if (utterances.empty()) throw EmptyTranscript("no educator utterances to score");
  double sum = 0.0;
  for (const auto& u : utterances) {
    sum += static_cast<double>(u.count) / log_token_denominator(u.tokens);
  }
  return sum / static_cast<double>(utterances.size());
}

double content_score(const dialogue::ConversationTranscript& transcript,
                     std::span<const SentenceLabeling> labelings, ContentCategory k) {
  const auto educator = transcript.educator_turns();
  std::vector<UtteranceCount> counts(educator.size());
  for (std::size_t i = 0; i < educator.size(); ++i) {
    counts[i].tokens = educator[i]->token_count;
  }
  for (const auto& l : labelings) {
    if (l.utterance_index >= counts.size()) {
      throw std::invalid_argument("labeling refers to educator utterance " +
                                  std::to_string(l.utterance_index) + " of " +
                                  std::to_string(counts.size()));
    }
    if (std::find(l.labels.begin(), l.labels.end(), k) != l.labels.end()) {
      ++counts[l.utterance_index].count;
    }
  }
  if (counts.empty()) {
    throw EmptyTranscript("transcript " + transcript.scenario_id +
                          " has no educator utterances");
  }
  return content_score(counts);
}

}  // namespace arena::judge
