#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace arena::gateway {

enum class Role { kSystem, kUser, kAssistant };

std::string_view to_string(Role role);
Role role_from_string(std::string_view s);

struct ChatMessage {
  Role role = Role::kUser;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

/// Generation settings for one chat-completions endpoint. Defaults follow
/// the harness generation config: at most 200 new tokens per utterance,
/// temperature 0.6 for hosted models and 0.2 for local ones.
struct EndpointConfig {
  static constexpr int kDefaultMaxTokens = 200;
  static constexpr double kHostedTemperature = 0.6;
  static constexpr double kLocalTemperature = 0.2;

  std::string base_url;
  std::string model_name;
  double temperature = kHostedTemperature;
  int max_tokens = kDefaultMaxTokens;
  std::chrono::duration<double> request_timeout{60.0};
  int max_retries = 3;
  std::optional<std::int64_t> seed;
  /// Name of the environment variable holding the bearer token; empty means
  /// no Authorization header.
  std::string api_key_env;

  static EndpointConfig hosted(std::string base_url, std::string model);
  static EndpointConfig local(std::string base_url, std::string model);

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

}  // namespace arena::gateway
