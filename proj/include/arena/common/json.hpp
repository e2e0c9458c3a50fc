#pragma once

#include <string>

#include <json.hpp>

namespace arena {

using Json = nlohmann::json;

/// Canonical record encoding: sorted keys (nlohmann's default object map),
/// no insignificant whitespace, shortest round-trip doubles, invalid UTF-8
/// replaced rather than thrown.
inline std::string canonical_dump(const Json& j) {
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

}  // namespace arena
