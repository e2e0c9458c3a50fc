#include "arena/forge/conversation.hpp"

#include <cctype>
#include <regex>
#include <set>

#include "arena/common/text.hpp"
#include "arena/forge/errors.hpp"

namespace arena::forge {

void validate_conversation(const ReferenceConversation& conv) {
  if (conv.turns.size() < 2) {
    throw GenerationRejected("conversation has fewer than two turns");
  }
  for (std::size_t i = 0; i < conv.turns.size(); ++i) {
    const Speaker expected = i % 2 == 0 ? Speaker::kEducator : Speaker::kPatient;
    if (conv.turns[i].speaker != expected) {
      throw GenerationRejected("turn " + std::to_string(i) + " should be " +
                               std::string(to_string(expected)) +
                               "; roles must alternate, educator first");
    }
    if (text::is_blank(conv.turns[i].text)) {
      throw GenerationRejected("turn " + std::to_string(i) + " is empty");
    }
  }
}

ReferenceConversation parse_conversation_reply(std::string_view reply,
                                               std::string note_id) {
  static const std::regex kSpeaker(
      R"(^[\s*#-]*(educator|patient|doctor|physician|nurse|chatbot|agent)[\s*]*:\s*\**\s*(.*)$)",
      std::regex::icase);
  static const std::regex kEvidence(R"(^[\s*(\[-]*evidence[\s*]*:\s*(.*?)[\s)\]]*$)",
                                    std::regex::icase);
  ReferenceConversation conv;
  conv.note_id = std::move(note_id);
  for (const auto& raw : text::split_lines(reply)) {
    const std::string line(text::trim(raw));
    if (line.empty()) continue;
    std::smatch m;
    if (std::regex_match(line, m, kEvidence)) {
      if (!conv.turns.empty() && conv.turns.back().speaker == Speaker::kEducator) {
        conv.turns.back().evidence = std::string(text::trim(m[1].str()));
      }
      continue;
    }
    if (std::regex_match(line, m, kSpeaker)) {
      const std::string who = text::to_lower(m[1].str());
      ReferenceTurn turn;
      turn.speaker = who == "patient" ? Speaker::kPatient : Speaker::kEducator;
      turn.text = std::string(text::trim(m[2].str()));
      conv.turns.push_back(std::move(turn));
      continue;
    }
    if (!conv.turns.empty()) {
      auto& t = conv.turns.back().text;
      if (!t.empty()) t.push_back(' ');
      t += line;
    }
  }
  validate_conversation(conv);
  return conv;
}

std::vector<std::size_t> unmentioned_items(const ReferenceConversation& conv,
                                           const ComprehensionExam& exam) {
  static const std::set<std::string> kStop = {
      "about", "after", "again", "their", "there", "these", "those", "which",
      "while", "would", "should", "could", "every", "other", "your", "with",
      "from", "that", "this", "have", "when", "what", "where"};
  std::string educator;
  for (const auto& t : conv.turns) {
    if (t.speaker == Speaker::kEducator) educator += text::to_lower(t.text) + " ";
  }
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < exam.items.size(); ++i) {
    const auto& item = exam.items[i];
    const auto& answer =
        item.options[static_cast<std::size_t>(item.correct_index)].text;
    bool found = false;
    for (auto& tok : text::whitespace_tokens(text::to_lower(answer))) {
      while (!tok.empty() && !std::isalnum(static_cast<unsigned char>(tok.back()))) {
        tok.pop_back();
      }
      while (!tok.empty() && !std::isalnum(static_cast<unsigned char>(tok.front()))) {
        tok.erase(tok.begin());
      }
      if (tok.size() < 4 || kStop.count(tok)) continue;
      if (educator.find(tok) != std::string::npos) {
        found = true;
        break;
      }
    }
    if (!found) missing.push_back(i);
  }
  return missing;
}

}  // namespace arena::forge
