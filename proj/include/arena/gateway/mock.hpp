#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arena/common/json.hpp"
#include "arena/gateway/backend.hpp"

namespace arena::gateway {

enum class MockFailure { kNone, kUnreachable, kTimeout, kMalformed };

struct MockEntry {
  /// Substring required in the last message; nullopt matches any request.
  std::optional<std::string> match;
  std::string reply;
  MockFailure fail = MockFailure::kNone;
};

/// Ordered (match rule, reply) pairs. A request is answered by the first
/// entry at or after the cursor whose rule matches; the cursor then moves
/// past it. With `cycle` set the search wraps to the start, otherwise an
/// unmatched request throws MockScriptExhausted.
struct MockScript {
  std::vector<MockEntry> entries;
  bool cycle = false;

  static MockScript always(std::string reply);
  static MockScript from_json(const Json& j);
  static MockScript load(const std::filesystem::path& path);
  Json to_json() const;
};

/// Scripted backend. One instance per session: the cursor is not locked.
class MockBackend final : public ChatBackend {
 public:
  explicit MockBackend(MockScript script) : script_(std::move(script)) {}

  std::size_t cursor() const { return cursor_; }
  /// Every message list this backend was asked to complete, in order.
  const std::vector<std::vector<ChatMessage>>& requests() const {
    return requests_;
  }

  static BackendFactory factory(MockScript script);

 private:
  std::string do_complete(const EndpointConfig& config,
                          std::span<const ChatMessage> messages) override;

  MockScript script_;
  std::size_t cursor_ = 0;
  std::vector<std::vector<ChatMessage>> requests_;
};

}  // namespace arena::gateway
