#include "arena/common/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace arena::text {

namespace {

bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

constexpr std::array<std::string_view, 13> kAbbreviations = {
    "dr", "mr", "mrs", "ms", "prof", "sr", "jr", "st", "vs", "e.g", "i.e",
    "approx", "fig"};

// The word immediately preceding position `dot` (exclusive), lowercased.
std::string word_before(std::string_view s, std::size_t dot) {
  std::size_t begin = dot;
  while (begin > 0 && !is_space(s[begin - 1]) && s[begin - 1] != '(' &&
         s[begin - 1] != '"') {
    --begin;
  }
  return to_lower(s.substr(begin, dot - begin));
}

bool period_is_boundary(std::string_view s, std::size_t dot) {
  const bool next_is_digit =
      dot + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[dot + 1]));
  const bool prev_is_digit =
      dot > 0 && std::isdigit(static_cast<unsigned char>(s[dot - 1]));
  if (next_is_digit && prev_is_digit) return false;
  // Period glued to the next word (e.g. "e.g", "U.S") is never a boundary.
  if (dot + 1 < s.size() && std::isalpha(static_cast<unsigned char>(s[dot + 1]))) {
    return false;
  }
  const std::string prev = word_before(s, dot);
  if (prev.size() == 1 && std::isupper(static_cast<unsigned char>(s[dot - 1]))) {
    return false;
  }
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), prev) ==
         kAbbreviations.end();
}

}  // namespace

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

bool contains_icase(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return true;
  return to_lower(haystack).find(to_lower(needle)) != std::string::npos;
}

bool is_blank(std::string_view s) { return trim(s).empty(); }

std::vector<std::string> whitespace_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

std::size_t count_whitespace_tokens(std::string_view s) {
  std::size_t n = 0;
  bool in_token = false;
  for (char c : s) {
    if (is_space(c)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++n;
    }
  }
  return n;
}

std::vector<std::string> split_sentences(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  std::size_t i = 0;
  auto emit = [&](std::size_t end) {
    const auto piece = trim(s.substr(start, end - start));
    if (!piece.empty()) out.emplace_back(piece);
    start = end;
  };
  while (i < s.size()) {
    if (!is_terminal(s[i])) {
      ++i;
      continue;
    }
    if (s[i] == '.' && !period_is_boundary(s, i)) {
      ++i;
      continue;
    }
    while (i < s.size() && is_terminal(s[i])) ++i;
    while (i < s.size() && (s[i] == '"' || s[i] == '\'' || s[i] == ')' ||
                            s[i] == ']')) {
      ++i;
    }
    emit(i);
  }
  emit(s.size());
  return out;
}

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t nl = s.find('\n', start);
    if (nl == std::string_view::npos) nl = s.size();
    std::string_view line = s.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.emplace_back(line);
    start = nl + 1;
  }
  return out;
}

}  // namespace arena::text
