#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>

#include "arena/gateway/types.hpp"

namespace arena::gateway {

/// A source of assistant replies. Implementations: HTTP chat-completions,
/// scripted mock, replay cache decorator.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;

  /// Returns exactly one assistant reply. Throws std::invalid_argument on an
  /// empty message list or an empty user/assistant message, and a
  /// GatewayError subclass on endpoint failure.
  std::string complete(const EndpointConfig& config,
                       std::span<const ChatMessage> messages);

 private:
  virtual std::string do_complete(const EndpointConfig& config,
                                  std::span<const ChatMessage> messages) = 0;
};

using BackendFactory = std::function<std::unique_ptr<ChatBackend>()>;

/// An endpoint seat: generation settings plus a factory that yields a
/// backend per session. HTTP factories hand out views of one shared client;
/// mock factories hand out a fresh script cursor each time.
struct Endpoint {
  EndpointConfig config;
  BackendFactory make_backend;
};

}  // namespace arena::gateway
