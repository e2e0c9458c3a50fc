#include "arena/forge/exam.hpp"

#include <regex>
#include <span>
#include <stdexcept>

#include "arena/common/json.hpp"
#include "arena/common/random.hpp"
#include "arena/common/text.hpp"
#include "arena/forge/errors.hpp"

namespace arena::forge {

std::string_view to_string(OptionKind kind) {
  switch (kind) {
    case OptionKind::kAnswer:
      return "answer";
    case OptionKind::kDistractor:
      return "distractor";
    case OptionKind::kIrrelevant:
      return "irrelevant";
  }
  return "answer";
}

OptionKind option_kind_from_string(std::string_view s) {
  const std::string k = text::to_lower(text::trim(s));
  if (k == "answer") return OptionKind::kAnswer;
  if (k == "distractor") return OptionKind::kDistractor;
  if (k == "irrelevant") return OptionKind::kIrrelevant;
  throw SchemaError("unknown option kind: " + std::string(s));
}

void validate_exam(const ComprehensionExam& exam) {
  for (std::size_t i = 0; i < exam.items.size(); ++i) {
    const auto& item = exam.items[i];
    if (text::is_blank(item.question)) {
      throw SchemaError("item " + std::to_string(i) + " has no question");
    }
    int answers = 0;
    for (const auto& o : item.options) {
      if (o.kind == OptionKind::kAnswer) ++answers;
    }
    if (answers != 1) {
      throw SchemaError("item " + std::to_string(i) + " has " +
                        std::to_string(answers) + " options marked answer");
    }
    if (item.correct_index < 0 || item.correct_index > 2 ||
        item.options[static_cast<std::size_t>(item.correct_index)].kind !=
            OptionKind::kAnswer) {
      throw SchemaError("item " + std::to_string(i) +
                        " correct_index does not point at the answer");
    }
  }
  const auto n = exam.items.size();
  if (n < ComprehensionExam::kMinItems || n > ComprehensionExam::kMaxItems) {
    throw GenerationRejected("exam has " + std::to_string(n) +
                             " items; 5 to 10 are required");
  }
}

namespace {

std::string_view strip_to_array(std::string_view reply) {
  const auto open = reply.find('[');
  const auto close = reply.rfind(']');
  if (open == std::string_view::npos || close == std::string_view::npos ||
      close < open) {
    throw SchemaError("reply does not contain a JSON list");
  }
  return reply.substr(open, close - open + 1);
}

std::string required_string(const Json& j, const char* key, std::size_t item) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_string() || text::is_blank(it->get<std::string>())) {
    throw SchemaError("item " + std::to_string(item) + " lacks string field \"" +
                      key + "\"");
  }
  return std::string(text::trim(it->get<std::string>()));
}

ComprehensionItem parse_item(const Json& j, std::size_t idx) {
  if (!j.is_object()) {
    throw SchemaError("item " + std::to_string(idx) + " is not an object");
  }
  ComprehensionItem item;
  item.question = required_string(j, "question", idx);
  if (const auto opts = j.find("options"); opts != j.end()) {
    if (!opts->is_array() || opts->size() != 3) {
      throw SchemaError("item " + std::to_string(idx) +
                        " must have exactly 3 options");
    }
    for (std::size_t k = 0; k < 3; ++k) {
      const Json& o = (*opts)[k];
      if (!o.is_object()) {
        throw SchemaError("item " + std::to_string(idx) + " option is not an object");
      }
      item.options[k].text = required_string(o, "text", idx);
      item.options[k].kind =
          option_kind_from_string(required_string(o, "kind", idx));
    }
  } else {
    item.options[0] = {required_string(j, "answer", idx), OptionKind::kAnswer};
    item.options[1] = {required_string(j, "distractor", idx),
                       OptionKind::kDistractor};
    item.options[2] = {required_string(j, "irrelevant", idx),
                       OptionKind::kIrrelevant};
  }
  int answers = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    if (item.options[k].kind == OptionKind::kAnswer) {
      item.correct_index = static_cast<int>(k);
      ++answers;
    }
  }
  if (answers != 1) {
    throw SchemaError("item " + std::to_string(idx) + " has " +
                      std::to_string(answers) + " options marked answer");
  }
  return item;
}

}  // namespace

ComprehensionExam parse_exam_reply(std::string_view reply, std::string note_id) {
  Json j;
  try {
    j = Json::parse(strip_to_array(reply));
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("exam reply is not valid JSON: ") + e.what());
  }
  if (!j.is_array()) throw SchemaError("exam reply is not a list");
  ComprehensionExam exam;
  exam.note_id = std::move(note_id);
  for (std::size_t i = 0; i < j.size(); ++i) {
    exam.items.push_back(parse_item(j[i], i));
  }
  validate_exam(exam);
  return exam;
}

void shuffle_options(ComprehensionExam& exam) {
  for (std::size_t i = 0; i < exam.items.size(); ++i) {
    auto& item = exam.items[i];
    Rng rng(stable_hash(exam.note_id + "#" + std::to_string(i)));
    seeded_shuffle(std::span<ExamOption>(item.options), rng);
    for (std::size_t k = 0; k < 3; ++k) {
      if (item.options[k].kind == OptionKind::kAnswer) {
        item.correct_index = static_cast<int>(k);
      }
    }
  }
}

std::vector<std::string> uncovered_topics(const ComprehensionExam& exam) {
  struct Topic {
    const char* name;
    const char* pattern;
  };
  static const std::array<Topic, 6> kTopics = {{
      {"return-to-ED indications",
       R"(return|emergency|\bed\b|hospital|call|symptom|warning|sign)"},
      {"medication", R"(medic|drug|dose|dosage|tablet|pill|prescri|mg\b)"},
      {"diagnosis", R"(diagnos|condition|disease|admitted|cause)"},
      {"post-discharge treatment",
       R"(avoid|activity|diet|exercise|home|after discharge|post-discharge|should you)"},
      {"tests/treatments during stay",
       R"(test|procedure|during your stay|x-ray|scan|treatment|received)"},
      {"follow-up", R"(follow|appointment|visit|see your|check-up)"},
  }};
  std::string all;
  for (const auto& item : exam.items) all += item.question + "\n";
  std::vector<std::string> missing;
  for (const auto& t : kTopics) {
    if (!std::regex_search(all, std::regex(t.pattern, std::regex::icase))) {
      missing.emplace_back(t.name);
    }
  }
  return missing;
}

}  // namespace arena::forge
