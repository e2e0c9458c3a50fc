#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arena {

enum class Speaker { kEducator, kPatient };

inline std::string_view to_string(Speaker s) {
  return s == Speaker::kEducator ? "educator" : "patient";
}

inline Speaker speaker_from_string(std::string_view s) {
  if (s == "educator") return Speaker::kEducator;
  if (s == "patient") return Speaker::kPatient;
  throw std::invalid_argument("unknown speaker: " + std::string(s));
}

}  // namespace arena
