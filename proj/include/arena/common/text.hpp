#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace arena::text {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
bool contains_icase(std::string_view haystack, std::string_view needle);
bool is_blank(std::string_view s);

/// Whitespace-delimited tokens. This is the token unit for every length
/// normalization in the harness (NumToken), so it must stay deterministic.
std::vector<std::string> whitespace_tokens(std::string_view s);
std::size_t count_whitespace_tokens(std::string_view s);

/// Splits on runs of terminal punctuation (. ! ?). A period does not end a
/// sentence inside a number ("2.5"), after a single capital initial, or after
/// a known abbreviation ("Dr.", "e.g."). Closing quotes/brackets that follow
/// the terminator stay with the sentence. Text without any terminator is one
/// sentence. Empty fragments are dropped.
std::vector<std::string> split_sentences(std::string_view s);

std::vector<std::string> split_lines(std::string_view s);

}  // namespace arena::text
