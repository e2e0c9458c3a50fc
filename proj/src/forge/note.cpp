#include "arena/forge/note.hpp"

#include <optional>
#include <regex>
#include <sstream>
#include <vector>

#include "arena/common/text.hpp"
#include "arena/forge/errors.hpp"

namespace arena::forge {

namespace {

// Strips markdown decoration such as "**" or "##" around a line.
std::string_view undecorate(std::string_view line) {
  line = text::trim(line);
  while (!line.empty() && (line.front() == '#' || line.front() == '*')) {
    line.remove_prefix(1);
  }
  while (!line.empty() && (line.back() == '*' || line.back() == ':')) {
    line.remove_suffix(1);
  }
  return text::trim(line);
}

std::optional<std::size_t> heading_index(std::string_view line) {
  static const std::regex kHeading(R"(^([1-5])\s*[.)]\s*(.+)$)");
  const std::string s(undecorate(line));
  std::smatch m;
  if (!std::regex_match(s, m, kHeading)) return std::nullopt;
  const std::size_t idx = static_cast<std::size_t>(m[1].str()[0] - '1');
  if (text::to_lower(text::trim(m[2].str())) !=
      text::to_lower(kSectionTitles[idx])) {
    return std::nullopt;
  }
  return idx;
}

std::string capture(const std::string& header, const std::regex& re) {
  std::smatch m;
  if (std::regex_search(header, m, re)) {
    return std::string(text::trim(m[1].str()));
  }
  return {};
}

std::string join_body(const std::vector<std::string>& lines) {
  std::size_t b = 0;
  std::size_t e = lines.size();
  while (b < e && text::is_blank(lines[b])) ++b;
  while (e > b && text::is_blank(lines[e - 1])) --e;
  std::string out;
  for (std::size_t i = b; i < e; ++i) {
    if (i > b) out.push_back('\n');
    std::string_view l = lines[i];
    while (!l.empty() && (l.back() == ' ' || l.back() == '\t')) l.remove_suffix(1);
    out.append(l);
  }
  return out;
}

bool search_icase(const std::string& haystack, const char* pattern) {
  const std::regex re(pattern, std::regex::icase);
  return std::regex_search(haystack, re);
}

}  // namespace

std::string section_heading(std::size_t index) {
  return std::to_string(index + 1) + ". " + std::string(kSectionTitles.at(index));
}

DischargeNote parse_note(std::string_view text) {
  const auto end = text.find(kEndSentinel);
  if (end == std::string_view::npos) {
    throw GenerationRejected("note is missing the |||END sentinel");
  }
  const auto lines = text::split_lines(text.substr(0, end));

  std::vector<std::string> header;
  std::array<std::vector<std::string>, 5> bodies;
  std::optional<std::size_t> current;
  std::size_t expected = 0;
  for (const auto& line : lines) {
    if (const auto idx = heading_index(line)) {
      if (*idx != expected) {
        throw GenerationRejected("section \"" + section_heading(*idx) +
                                 "\" is out of order or repeated");
      }
      current = idx;
      ++expected;
      continue;
    }
    if (current) {
      bodies[*current].push_back(line);
    } else {
      header.push_back(line);
    }
  }
  if (expected != kSectionTitles.size()) {
    throw GenerationRejected("note is missing section \"" +
                             section_heading(expected) + "\"");
  }

  std::string header_text;
  for (const auto& h : header) {
    header_text += h;
    header_text.push_back('\n');
  }
  static const std::regex kNoteId(R"(Note[ \t]*ID[ \t]*:[ \t]*([^\s]+))",
                                  std::regex::icase);
  static const std::regex kSex(R"(\bSex[ \t]*:[ \t]*([A-Za-z]+))", std::regex::icase);
  static const std::regex kComplaint(R"(Chief\s+Complaint?[ \t]*:[ \t]*([^\n]*))",
                                     std::regex::icase);
  static const std::regex kPmh(R"(Past\s+Medical\s+History[ \t]*:[ \t]*([^\n]*))",
                               std::regex::icase);
  static const std::regex kFh(R"(Family\s+History[ \t]*:[ \t]*([^\n]*))",
                              std::regex::icase);
  static const std::regex kSh(R"(Social\s+History[ \t]*:[ \t]*([^\n]*))",
                              std::regex::icase);

  DischargeNote note;
  note.note_id = capture(header_text, kNoteId);
  note.sex = capture(header_text, kSex);
  note.chief_complaint = capture(header_text, kComplaint);
  note.past_medical_history = capture(header_text, kPmh);
  note.family_history = capture(header_text, kFh);
  note.social_history = capture(header_text, kSh);
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    note.sections[i] = join_body(bodies[i]);
  }
  note.content_flags = detect_content(note);
  return note;
}

std::string render_note(const DischargeNote& note) {
  std::ostringstream out;
  out << "Note ID: " << note.note_id << '\n';
  out << "Sex: " << note.sex << "    Chief Complaint: " << note.chief_complaint
      << '\n';
  out << "Past Medical History: " << note.past_medical_history << '\n';
  out << "Family History: " << note.family_history << '\n';
  out << "Social History: " << note.social_history << '\n';
  for (std::size_t i = 0; i < note.sections.size(); ++i) {
    out << '\n' << section_heading(i) << '\n';
    if (!note.sections[i].empty()) out << note.sections[i] << '\n';
  }
  out << '\n' << kEndSentinel << '\n';
  return out.str();
}

ContentFlags detect_content(const DischargeNote& note) {
  std::string all = note.chief_complaint + "\n" + note.past_medical_history;
  for (const auto& s : note.sections) all += "\n" + s;
  const std::string& stay = note.sections[2];

  ContentFlags f;
  f.return_to_ed = search_icase(
      all,
      R"(return(s|ing)?\s+to\s+(the\s+)?(hospital|ed\b|emergency|er\b)|emergency\s+department|call\s+911)");
  f.medication = search_icase(all, R"(medication|prescri)");
  f.diagnosis = search_icase(all, R"(diagnos(is|es|ed))");
  f.post_discharge_treatment =
      search_icase(all, R"(post[- ]?discharge|after\s+discharge)");
  f.tests_during_stay = search_icase(
      stay,
      R"(test|x-ray|imaging|\blab|scan|procedure|treat|performed|biopsy|ecg|ekg|mri|\bct\b)");
  f.follow_up = search_icase(all, R"(follow[- ]?up)");
  return f;
}

void require_complete(const DischargeNote& note) {
  const ContentFlags& f = note.content_flags;
  std::string missing;
  auto check = [&](bool ok, const char* name) {
    if (!ok) missing += missing.empty() ? name : std::string(", ") + name;
  };
  check(f.return_to_ed, "return-to-ED indications");
  check(f.medication, "medication");
  check(f.diagnosis, "diagnosis");
  check(f.post_discharge_treatment, "post-discharge treatment");
  check(f.tests_during_stay, "tests/treatments during stay");
  check(f.follow_up, "follow-up");
  if (!missing.empty()) {
    throw GenerationRejected("note lacks content: " + missing);
  }
}

}  // namespace arena::forge
