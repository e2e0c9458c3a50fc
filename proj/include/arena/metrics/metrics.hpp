#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "arena/dialogue/transcript.hpp"
#include "arena/forge/conversation.hpp"

namespace arena::metrics {

class EmptyText : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class EmptyCandidate : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class EmptyInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class TooFewSamples : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Tokens = std::vector<std::string>;

// Readability

/// Vowel-group count with silent final "e", "-ed" and "-es" adjustments.
/// Never less than 1.
int count_syllables(std::string_view word);

struct ReadabilityBreakdown {
  std::size_t words = 0;
  std::size_t sentences = 0;
  std::size_t syllables = 0;
  double grade = 0.0;

  friend bool operator==(const ReadabilityBreakdown&, const ReadabilityBreakdown&) = default;
};

/// 0.39 * words/sentences + 11.8 * syllables/words - 15.59.
double fkgl_grade(std::size_t words, std::size_t sentences, std::size_t syllables);

/// Words are whitespace tokens holding a letter or digit; sentences come
/// from text::split_sentences. Throws EmptyText without a word.
ReadabilityBreakdown fkgl(std::string_view text);

/// Counts summed over the educator utterances (each split on its own).
ReadabilityBreakdown fkgl(const dialogue::ConversationTranscript& transcript);

// Overlap

/// Lowercased whitespace tokens with leading/trailing punctuation removed.
Tokens metric_tokens(std::string_view text);

/// Sentence BLEU: uniform weights over n = 1..max_n, modified precisions
/// with clipped counts, eps = 1e-9 added to zero numerators, brevity
/// penalty against the closest reference length. Throws EmptyCandidate.
double bleu(const Tokens& candidate, std::span<const Tokens> references, int max_n = 4);

/// LCS F1. Throws EmptyInput when either side is empty.
double rouge_l(const Tokens& candidate, const Tokens& reference);

struct OverlapScores {
  double bleu = 0.0;
  double rouge_l = 0.0;
  /// Aligned utterance pairs that were averaged.
  std::size_t pairs = 0;

  friend bool operator==(const OverlapScores&, const OverlapScores&) = default;
};

/// i-th educator utterance against the i-th reference educator utterance,
/// averaged over min(generated, reference) pairs. Throws EmptyInput when no
/// pair exists or a side of a pair has no tokens.
OverlapScores overlap(const dialogue::ConversationTranscript& transcript,
                      const forge::ReferenceConversation& reference);

// Statistics

struct IntervalEstimate {
  double mean = 0.0;
  double margin = 0.0;
  std::size_t n = 0;
  double level = 0.95;
};

/// Two-sided t quantile t_{alpha/2, df} for confidence `level`.
double t_critical(double level, std::size_t df);

/// mean +- t_{alpha/2,n-1} * sd / sqrt(n) with the sample standard
/// deviation. Throws TooFewSamples for n < 2.
IntervalEstimate confidence_interval(std::span<const double> samples, double level = 0.95);

struct PlotPoint {
  std::size_t step = 0;
  std::string metric;
  double mean = 0.0;
  /// nullopt for windows with a single value.
  std::optional<double> margin;
  std::size_t n = 0;

  friend bool operator==(const PlotPoint&, const PlotPoint&) = default;
};

/// Consecutive windows of `window` values (the last may be shorter); step is
/// the window ordinal starting at 1.
std::vector<PlotPoint> plot_series(std::string metric, std::span<const double> values,
                                   std::size_t window = 100, double level = 0.95);

}  // namespace arena::metrics
