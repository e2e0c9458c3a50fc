#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>

#include "arena/common/json.hpp"
#include "arena/common/random.hpp"
#include "arena/gateway/backend.hpp"
#include "arena/gateway/retry.hpp"

namespace arena::gateway {

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Connection-level failure (no HTTP status).
class TransportFailure : public std::runtime_error {
 public:
  TransportFailure(const std::string& what, bool timed_out)
      : std::runtime_error(what), timed_out_(timed_out) {}
  bool timed_out() const { return timed_out_; }

 private:
  bool timed_out_;
};

using Headers = std::map<std::string, std::string>;

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  /// Throws TransportFailure when no response was received.
  virtual HttpResponse post(const std::string& url, const Headers& headers,
                            const std::string& body,
                            std::chrono::duration<double> timeout) = 0;
};

/// cpp-httplib transport; http:// and https:// URLs.
class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse post(const std::string& url, const Headers& headers,
                    const std::string& body,
                    std::chrono::duration<double> timeout) override;
};

/// Request envelope for POST {base_url}/v1/chat/completions.
Json build_request_body(const EndpointConfig& config,
                        std::span<const ChatMessage> messages);

/// Extracts choices[0].message.content; throws MalformedResponse.
std::string parse_reply_body(const std::string& body);

/// `base_url` with the chat-completions path appended. A base URL that
/// already ends in /v1 is not doubled.
std::string chat_completions_url(const std::string& base_url);

using Sleeper = std::function<void(std::chrono::duration<double>)>;

/// Chat-completions client with retry. Immutable after construction apart
/// from the jitter generator, which is locked; safe to share between
/// sessions.
class HttpChatClient final : public ChatBackend {
 public:
  explicit HttpChatClient(std::shared_ptr<HttpTransport> transport =
                              std::make_shared<HttplibTransport>(),
                          Backoff backoff = {}, Sleeper sleeper = {},
                          std::uint64_t jitter_seed = std::random_device{}());

  /// Factory for Endpoint: every session shares this client.
  static BackendFactory shared_factory(std::shared_ptr<HttpChatClient> client);

 private:
  std::string do_complete(const EndpointConfig& config,
                          std::span<const ChatMessage> messages) override;

  std::shared_ptr<HttpTransport> transport_;
  Backoff backoff_;
  Sleeper sleeper_;
  std::mutex rng_mu_;
  Rng jitter_rng_;
};

}  // namespace arena::gateway
