#include "arena/gateway/http_client.hpp"

#include <cstdlib>
#include <thread>

#include <spdlog/spdlog.h>

#include "arena/gateway/errors.hpp"

namespace arena::gateway {

std::chrono::duration<double> Backoff::delay(int retry, Rng& rng) const {
  double scale = 1.0;
  for (int i = 0; i < retry; ++i) scale *= factor;
  const double jitter_scale = 1.0 + jitter * (2.0 * unit_interval(rng) - 1.0);
  return base * scale * jitter_scale;
}

Json build_request_body(const EndpointConfig& config,
                        std::span<const ChatMessage> messages) {
  Json msgs = Json::array();
  for (const auto& m : messages) {
    msgs.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  Json body = {{"model", config.model_name},
               {"messages", std::move(msgs)},
               {"temperature", config.temperature},
               {"max_tokens", config.max_tokens}};
  if (config.seed) body["seed"] = *config.seed;
  return body;
}

std::string parse_reply_body(const std::string& body) {
  Json j;
  try {
    j = Json::parse(body);
  } catch (const Json::exception& e) {
    throw MalformedResponse(std::string("reply is not JSON: ") + e.what());
  }
  const auto choices = j.find("choices");
  if (choices == j.end() || !choices->is_array() || choices->empty()) {
    throw MalformedResponse("reply has no choices");
  }
  const Json& first = (*choices)[0];
  if (!first.contains("message") || !first["message"].is_object()) {
    throw MalformedResponse("choices[0] has no message");
  }
  const Json& message = first["message"];
  if (!message.contains("content") || !message["content"].is_string()) {
    throw MalformedResponse("choices[0].message.content missing");
  }
  return message["content"].get<std::string>();
}

std::string chat_completions_url(const std::string& base_url) {
  std::string url = base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  if (url.size() >= 3 && url.compare(url.size() - 3, 3, "/v1") == 0) {
    return url + "/chat/completions";
  }
  return url + "/v1/chat/completions";
}

HttpChatClient::HttpChatClient(std::shared_ptr<HttpTransport> transport,
                               Backoff backoff, Sleeper sleeper,
                               std::uint64_t jitter_seed)
    : transport_(std::move(transport)),
      backoff_(backoff),
      sleeper_(sleeper ? std::move(sleeper)
                       : Sleeper([](std::chrono::duration<double> d) {
                           std::this_thread::sleep_for(d);
                         })),
      jitter_rng_(jitter_seed) {}

BackendFactory HttpChatClient::shared_factory(
    std::shared_ptr<HttpChatClient> client) {
  class View final : public ChatBackend {
   public:
    explicit View(std::shared_ptr<HttpChatClient> c) : client_(std::move(c)) {}

   private:
    std::string do_complete(const EndpointConfig& config,
                            std::span<const ChatMessage> messages) override {
      return client_->complete(config, messages);
    }
    std::shared_ptr<HttpChatClient> client_;
  };
  return [client = std::move(client)]() -> std::unique_ptr<ChatBackend> {
    return std::make_unique<View>(client);
  };
}

std::string HttpChatClient::do_complete(const EndpointConfig& config,
                                        std::span<const ChatMessage> messages) {
  const std::string url = chat_completions_url(config.base_url);
  const std::string body = build_request_body(config, messages).dump();
  Headers headers{{"Content-Type", "application/json"}};
  if (!config.api_key_env.empty()) {
    if (const char* key = std::getenv(config.api_key_env.c_str())) {
      headers["Authorization"] = std::string("Bearer ") + key;
    } else {
      spdlog::warn("api key variable {} is not set", config.api_key_env);
    }
  }

  std::string last_error;
  bool last_timed_out = false;
  const int attempts = 1 + config.max_retries;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      std::chrono::duration<double> wait;
      {
        std::lock_guard lock(rng_mu_);
        wait = backoff_.delay(attempt - 1, jitter_rng_);
      }
      sleeper_(wait);
    }
    try {
      const HttpResponse res =
          transport_->post(url, headers, body, config.request_timeout);
      if (res.status >= 200 && res.status < 300) {
        return parse_reply_body(res.body);
      }
      last_timed_out = false;
      last_error = "HTTP " + std::to_string(res.status);
      if (res.status != 429 && res.status < 500) {
        throw EndpointUnreachable(url + " rejected the request: " + last_error);
      }
    } catch (const TransportFailure& e) {
      last_timed_out = e.timed_out();
      last_error = e.what();
    }
    spdlog::debug("{} attempt {}/{} failed: {}", url, attempt + 1, attempts,
                  last_error);
  }
  const std::string msg = url + " failed after " + std::to_string(attempts) +
                          " attempt(s): " + last_error;
  if (last_timed_out) throw Timeout(msg);
  throw EndpointUnreachable(msg);
}

}  // namespace arena::gateway
