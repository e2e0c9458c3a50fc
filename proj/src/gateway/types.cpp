#include "arena/gateway/types.hpp"

#include <stdexcept>

#include "arena/common/text.hpp"
#include "arena/gateway/backend.hpp"

namespace arena::gateway {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kSystem:
      return "system";
    case Role::kUser:
      return "user";
    case Role::kAssistant:
      return "assistant";
  }
  return "user";
}

Role role_from_string(std::string_view s) {
  if (s == "system") return Role::kSystem;
  if (s == "user") return Role::kUser;
  if (s == "assistant") return Role::kAssistant;
  throw std::invalid_argument("unknown chat role: " + std::string(s));
}

EndpointConfig EndpointConfig::hosted(std::string base_url, std::string model) {
  EndpointConfig c;
  c.base_url = std::move(base_url);
  c.model_name = std::move(model);
  c.temperature = kHostedTemperature;
  return c;
}

EndpointConfig EndpointConfig::local(std::string base_url, std::string model) {
  EndpointConfig c = hosted(std::move(base_url), std::move(model));
  c.temperature = kLocalTemperature;
  return c;
}

void EndpointConfig::validate() const {
  if (!(temperature >= 0.0 && temperature <= 2.0)) {
    throw std::invalid_argument("temperature must lie in [0, 2]");
  }
  if (max_tokens < 1) throw std::invalid_argument("max_tokens must be >= 1");
  if (max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  if (request_timeout.count() <= 0.0) {
    throw std::invalid_argument("request_timeout must be positive");
  }
}

std::string ChatBackend::complete(const EndpointConfig& config,
                                  std::span<const ChatMessage> messages) {
  if (messages.empty()) {
    throw std::invalid_argument("chat request needs at least one message");
  }
  for (const auto& m : messages) {
    if (m.role != Role::kSystem && text::is_blank(m.content)) {
      throw std::invalid_argument("user/assistant message content is empty");
    }
  }
  config.validate();
  return do_complete(config, messages);
}

}  // namespace arena::gateway
