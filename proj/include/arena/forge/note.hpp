#pragma once

#include <array>
#include <string>
#include <string_view>

namespace arena::forge {

inline constexpr std::array<std::string_view, 5> kSectionTitles = {
    "Patient Summary",
    "Patient History",
    "Procedures and Progress during stay",
    "Discharge Instructions",
    "Discharge Summary",
};

/// "1. Patient Summary" etc.
std::string section_heading(std::size_t index);

inline constexpr std::string_view kEndSentinel = "|||END";

/// Presence of the six content topics a discharge note must carry.
struct ContentFlags {
  bool return_to_ed = false;
  bool medication = false;
  bool diagnosis = false;
  bool post_discharge_treatment = false;
  bool tests_during_stay = false;
  bool follow_up = false;

  bool all() const {
    return return_to_ed && medication && diagnosis &&
           post_discharge_treatment && tests_during_stay && follow_up;
  }
  friend bool operator==(const ContentFlags&, const ContentFlags&) = default;
};

struct DischargeNote {
  std::string note_id;
  std::string sex;
  std::string chief_complaint;
  std::string past_medical_history;
  std::string family_history;
  std::string social_history;
  /// Bodies of the five numbered sections, in order.
  std::array<std::string, 5> sections;
  ContentFlags content_flags;

  friend bool operator==(const DischargeNote&, const DischargeNote&) = default;
};

/// Parses generator output in the note template. The numbered section
/// headings are matched line by line; each must appear once and in order,
/// and the text must contain the |||END sentinel (anything after it is
/// ignored). Throws GenerationRejected with the reason otherwise. Content
/// flags are derived from the text; the caller decides whether a note with
/// missing topics is acceptable.
DischargeNote parse_note(std::string_view text);

/// Renders a note back into the template layout; parse_note(render_note(n))
/// reproduces n for every note that parse_note accepted.
std::string render_note(const DischargeNote& note);

ContentFlags detect_content(const DischargeNote& note);

/// Throws GenerationRejected unless every content flag is set.
void require_complete(const DischargeNote& note);

}  // namespace arena::forge
