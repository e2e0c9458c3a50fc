#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>

#include "arena/common/text.hpp"
#include "arena/metrics/metrics.hpp"

namespace arena::metrics {

namespace {

constexpr double kEpsilon = 1e-9;

using NgramCounts = std::map<std::vector<std::string_view>, std::size_t>;

NgramCounts ngrams(const Tokens& tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::vector<std::string_view> key(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
    ++counts[key];
  }
  return counts;
}

}  // namespace

Tokens metric_tokens(std::string_view s) {
  Tokens out;
  for (const auto& raw : text::whitespace_tokens(s)) {
    std::string_view t = raw;
    while (!t.empty() && std::ispunct(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
    while (!t.empty() && std::ispunct(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
    if (!t.empty()) out.push_back(text::to_lower(t));
  }
  return out;
}

double bleu(const Tokens& candidate, std::span<const Tokens> references, int max_n) {
  if (candidate.empty()) throw EmptyCandidate("BLEU candidate has no tokens");
  if (references.empty()) throw std::invalid_argument("BLEU needs at least one reference");
  if (max_n < 1) throw std::invalid_argument("max_n must be >= 1");

  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    const auto cand = ngrams(candidate, static_cast<std::size_t>(n));
    std::map<std::vector<std::string_view>, std::size_t> max_ref;
    for (const auto& ref : references) {
      for (const auto& [gram, count] : ngrams(ref, static_cast<std::size_t>(n))) {
        auto& slot = max_ref[gram];
        slot = std::max(slot, count);
      }
    }
    std::size_t clipped = 0;
    std::size_t total = 0;
    for (const auto& [gram, count] : cand) {
      total += count;
      const auto it = max_ref.find(gram);
      if (it != max_ref.end()) clipped += std::min(count, it->second);
    }
    const double denominator = static_cast<double>(std::max<std::size_t>(total, 1));
    const double precision = clipped == 0 ? kEpsilon / denominator
                                          : static_cast<double>(clipped) / denominator;
    log_sum += std::log(precision) / static_cast<double>(max_n);
  }

  const auto c = static_cast<long long>(candidate.size());
  long long r = 0;
  long long best = std::numeric_limits<long long>::max();
  for (const auto& ref : references) {
    const auto len = static_cast<long long>(ref.size());
    const long long diff = std::llabs(len - c);
    if (diff < best || (diff == best && len < r)) {
      best = diff;
      r = len;
    }
  }
  const double bp =
      c > r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
  return bp * std::exp(log_sum);
}

double rouge_l(const Tokens& candidate, const Tokens& reference) {
  if (candidate.empty() || reference.empty()) {
    throw EmptyInput("ROUGE-L needs non-empty candidate and reference");
  }
  std::vector<std::size_t> prev(reference.size() + 1, 0), cur(reference.size() + 1, 0);
  for (std::size_t i = 1; i <= candidate.size(); ++i) {
    for (std::size_t j = 1; j <= reference.size(); ++j) {
      cur[j] = candidate[i - 1] == reference[j - 1] ? prev[j - 1] + 1
                                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  const auto lcs = static_cast<double>(prev[reference.size()]);
  if (lcs == 0.0) return 0.0;
  const double p = lcs / static_cast<double>(candidate.size());
  const double r = lcs / static_cast<double>(reference.size());
  return 2.0 * p * r / (p + r);
}

OverlapScores overlap(const dialogue::ConversationTranscript& transcript,
                      const forge::ReferenceConversation& reference) {
  const auto generated = transcript.educator_turns();
  std::vector<const forge::ReferenceTurn*> expected;
  for (const auto& t : reference.turns) {
    if (t.speaker == Speaker::kEducator) expected.push_back(&t);
  }
  const std::size_t pairs = std::min(generated.size(), expected.size());
  if (pairs == 0) {
    throw EmptyInput("no aligned educator utterances for " + transcript.scenario_id);
  }
  OverlapScores s;
  s.pairs = pairs;
  for (std::size_t i = 0; i < pairs; ++i) {
    const Tokens cand = metric_tokens(generated[i]->text);
    const std::vector<Tokens> refs{metric_tokens(expected[i]->text)};
    if (cand.empty() || refs[0].empty()) {
      throw EmptyInput("educator utterance " + std::to_string(i) + " of " +
                       transcript.scenario_id + " has no tokens");
    }
    s.bleu += bleu(cand, refs);
    s.rouge_l += rouge_l(cand, refs[0]);
  }
  s.bleu /= static_cast<double>(pairs);
  s.rouge_l /= static_cast<double>(pairs);
  return s;
}

}  // namespace arena::metrics
