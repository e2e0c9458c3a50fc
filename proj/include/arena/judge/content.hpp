#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "arena/dialogue/transcript.hpp"
#include "arena/gateway/backend.hpp"

namespace arena::judge {

class EmptyTranscript : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ContentCategory {
  kReturnToED,
  kMedication,
  kDiagnosis,
  kPostDischargeTreatment,
  kTestsAndTreatments,
  kFollowUp,
  kNA,
};

/// The six scored categories c1..c6 (NA excluded).
inline constexpr std::array<ContentCategory, 6> kContentCategories{
    ContentCategory::kReturnToED,         ContentCategory::kMedication,
    ContentCategory::kDiagnosis,          ContentCategory::kPostDischargeTreatment,
    ContentCategory::kTestsAndTreatments, ContentCategory::kFollowUp};

/// "c1".."c6" or "NA".
std::string_view code(ContentCategory c);
/// "ReturnToED", "Medication", ...
std::string_view name(ContentCategory c);
/// Accepts a code or a name.
ContentCategory content_category_from_string(std::string_view s);

struct SentenceLabeling {
  /// Ordinal among the transcript's educator utterances.
  std::size_t utterance_index = 0;
  std::size_t sentence_index = 0;
  std::string sentence;
  /// Sorted, unique, non-empty; NA only ever appears alone.
  std::vector<ContentCategory> labels;
  /// Judge reply as received.
  std::string raw;
  /// False when the reply could not be read and NA was substituted.
  bool parsed = true;

  friend bool operator==(const SentenceLabeling&, const SentenceLabeling&) = default;
};

/// Labels named in a judge reply, normalized (sorted, NA dropped when any
/// other label is present). Codes (c1..c6, NA) are preferred; category names
/// are accepted when no code is present. nullopt when nothing is recognized.
std::optional<std::vector<ContentCategory>> parse_content_labels(std::string_view reply);

std::string content_judge_prompt(std::string_view sentence);

/// Splits every educator utterance into sentences and asks the judge for
/// each one. Gateway errors propagate.
std::vector<SentenceLabeling> classify_sentences(
    const dialogue::ConversationTranscript& transcript,
    gateway::ChatBackend& judge, const gateway::EndpointConfig& config);

/// ln(max(tokens, 2)).
double log_token_denominator(std::size_t tokens);

struct UtteranceCount {
  std::size_t count = 0;
  std::size_t tokens = 0;
};

/// (1/m) * sum_i count_i / ln(max(tokens_i, 2)). Throws EmptyTranscript for
/// m = 0.
double content_score(std::span<const UtteranceCount> utterances);

/// Counts, per educator utterance, the sentences labeled `k` and scores them.
double content_score(const dialogue::ConversationTranscript& transcript,
                     std::span<const SentenceLabeling> labelings,
                     ContentCategory k);

}  // namespace arena::judge
