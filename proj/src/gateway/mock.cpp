#include "arena/gateway/mock.hpp"

#include <fstream>
#include <stdexcept>

#include "arena/gateway/errors.hpp"

namespace arena::gateway {

namespace {

MockFailure failure_from_string(const std::string& s) {
  if (s.empty() || s == "none") return MockFailure::kNone;
  if (s == "unreachable") return MockFailure::kUnreachable;
  if (s == "timeout") return MockFailure::kTimeout;
  if (s == "malformed") return MockFailure::kMalformed;
  throw std::invalid_argument("unknown mock failure: " + s);
}

std::string failure_to_string(MockFailure f) {
  switch (f) {
    case MockFailure::kNone:
      return "none";
    case MockFailure::kUnreachable:
      return "unreachable";
    case MockFailure::kTimeout:
      return "timeout";
    case MockFailure::kMalformed:
      return "malformed";
  }
  return "none";
}

}  // namespace

MockScript MockScript::always(std::string reply) {
  return MockScript{{MockEntry{std::nullopt, std::move(reply)}}, true};
}

MockScript MockScript::from_json(const Json& j) {
  MockScript script;
  script.cycle = j.value("cycle", false);
  for (const auto& e : j.at("entries")) {
    MockEntry entry;
    if (e.contains("match") && !e["match"].is_null()) {
      entry.match = e["match"].get<std::string>();
    }
    entry.reply = e.value("reply", "");
    entry.fail = failure_from_string(e.value("fail", "none"));
    script.entries.push_back(std::move(entry));
  }
  return script;
}

MockScript MockScript::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mock script " + path.string());
  return from_json(Json::parse(in));
}

Json MockScript::to_json() const {
  Json entries_json = Json::array();
  for (const auto& e : entries) {
    Json ej = {{"reply", e.reply}, {"fail", failure_to_string(e.fail)}};
    ej["match"] = e.match ? Json(*e.match) : Json(nullptr);
    entries_json.push_back(std::move(ej));
  }
  return {{"cycle", cycle}, {"entries", std::move(entries_json)}};
}

BackendFactory MockBackend::factory(MockScript script) {
  return [script = std::move(script)]() -> std::unique_ptr<ChatBackend> {
    return std::make_unique<MockBackend>(script);
  };
}

std::string MockBackend::do_complete(const EndpointConfig& /*config*/,
                                     std::span<const ChatMessage> messages) {
  requests_.emplace_back(messages.begin(), messages.end());
  const std::string& probe = messages.back().content;
  const std::size_t n = script_.entries.size();
  const std::size_t span = script_.cycle ? n : n - std::min(cursor_, n);
  for (std::size_t step = 0; step < span; ++step) {
    const std::size_t idx = (cursor_ + step) % n;
    const MockEntry& e = script_.entries[idx];
    if (e.match && probe.find(*e.match) == std::string::npos) continue;
    cursor_ = idx + 1;
    if (script_.cycle && cursor_ == n) cursor_ = 0;
    switch (e.fail) {
      case MockFailure::kUnreachable:
        throw EndpointUnreachable("mock endpoint unreachable");
      case MockFailure::kTimeout:
        throw Timeout("mock endpoint timed out");
      case MockFailure::kMalformed:
        throw MalformedResponse("mock endpoint returned a malformed envelope");
      case MockFailure::kNone:
        break;
    }
    return e.reply;
  }
  throw MockScriptExhausted("no mock entry matches request #" +
                            std::to_string(requests_.size()));
}

}  // namespace arena::gateway
