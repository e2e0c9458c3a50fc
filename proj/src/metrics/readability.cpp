#include <cctype>

#include "arena/common/text.hpp"
#include "arena/metrics/metrics.hpp"

namespace arena::metrics {

namespace {

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool has_word_char(std::string_view token) {
  for (char c : token) {
    if (std::isalnum(static_cast<unsigned char>(c))) return true;
  }
  return false;
}

}  // namespace

int count_syllables(std::string_view word) {
  std::string w;
  for (char c : word) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (w.empty()) return 1;

  int count = 0;
  bool in_group = false;
  for (char c : w) {
    const bool v = is_vowel(c);
    if (v && !in_group) ++count;
    in_group = v;
  }

  const std::size_t n = w.size();
  const auto ends = [&](std::string_view suffix) { return w.ends_with(suffix); };
  if (count > 1 && n >= 3) {
    const char before = w[n - 3];
    if (ends("e") && !ends("ee")) {
      const bool consonant_le = ends("le") && !is_vowel(before);
      if (!consonant_le) --count;
    } else if (ends("ed")) {
      if (before != 't' && before != 'd') --count;
    } else if (ends("es")) {
      const bool sibilant = before == 's' || before == 'x' || before == 'z' ||
                            ends("ches") || ends("shes") || ends("ges") || ends("ces");
      if (!sibilant) --count;
    }
  }
  return count < 1 ? 1 : count;
}

double fkgl_grade(std::size_t words, std::size_t sentences, std::size_t syllables) {
  if (words == 0 || sentences == 0) throw EmptyText("FKGL needs at least one word");
  return 0.39 * (static_cast<double>(words) / static_cast<double>(sentences)) +
         11.8 * (static_cast<double>(syllables) / static_cast<double>(words)) - 15.59;
}

namespace {

ReadabilityBreakdown counts(std::string_view s) {
  ReadabilityBreakdown b;
  for (const auto& sentence : text::split_sentences(s)) {
    std::size_t words = 0;
    for (const auto& token : text::whitespace_tokens(sentence)) {
      if (!has_word_char(token)) continue;
      ++words;
      b.syllables += static_cast<std::size_t>(count_syllables(token));
    }
    if (words > 0) {
      b.words += words;
      ++b.sentences;
    }
  }
  return b;
}

}  // namespace

ReadabilityBreakdown fkgl(std::string_view s) {
  auto b = counts(s);
  if (b.words == 0) throw EmptyText("text has no words");
  b.grade = fkgl_grade(b.words, b.sentences, b.syllables);
  return b;
}

ReadabilityBreakdown fkgl(const dialogue::ConversationTranscript& transcript) {
  ReadabilityBreakdown total;
  for (const auto* turn : transcript.educator_turns()) {
    const auto b = counts(turn->text);
    total.words += b.words;
    total.sentences += b.sentences;
    total.syllables += b.syllables;
  }
  if (total.words == 0) {
    throw EmptyText("transcript " + transcript.scenario_id + " has no educator words");
  }
  total.grade = fkgl_grade(total.words, total.sentences, total.syllables);
  return total;
}

}  // namespace arena::metrics
