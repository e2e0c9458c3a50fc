#include <chrono>
#include <cstdlib>
#include <ctime>

#include <spdlog/spdlog.h>

#include "arena/common/digest.hpp"
#include "arena/dataset/ldj.hpp"
#include "arena/dataset/records.hpp"
#include "arena/gateway/http_client.hpp"
#include "arena/gateway/mock.hpp"
#include "arena/gateway/replay_cache.hpp"
#include "context.hpp"

namespace arena::cli {

namespace {

Json endpoint_defaults(int max_tokens) {
  return {{"url", nullptr},
          {"model", nullptr},
          {"preset", "hosted"},
          {"temperature", nullptr},
          {"max_tokens", max_tokens},
          {"mock", nullptr},
          {"api_key_env", nullptr},
          {"seed", nullptr},
          {"timeout_seconds", 60.0},
          {"max_retries", 3}};
}

std::string iso_utc(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// SOURCE_DATE_EPOCH pins both timestamps so reruns are byte-identical.
std::string timestamp() {
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    try {
      return iso_utc(static_cast<std::time_t>(std::stoll(epoch)));
    } catch (const std::exception&) {
      spdlog::warn("ignoring malformed SOURCE_DATE_EPOCH");
    }
  }
  return iso_utc(std::time(nullptr));
}

Json file_entry(const fs::path& path) {
  Json entry{{"path", path.generic_string()}};
  if (fs::is_regular_file(path)) {
    entry["sha256"] = sha256_hex(dataset::read_file(path));
  } else {
    entry["sha256"] = nullptr;
  }
  return entry;
}

}  // namespace

Json default_settings() {
  return {{"version", 1},
          {"seed", 0},
          {"prompts_dir", nullptr},
          {"replay_cache", nullptr},
          {"turn_cap", dialogue::kDefaultTurnCap},
          {"parallelism", 1},
          {"closing_marker", std::string(dialogue::kDefaultClosingMarker)},
          {"retry_budget", 3},
          {"window", 100},
          {"level", 0.95},
          {"session_seconds", 900.0},
          {"grace_seconds", 1.0},
          {"host", "127.0.0.1"},
          {"port", 8080},
          {"groups",
           {{"A", {{"description", "non-expert human educator"}, {"chatbot", false}}},
            {"B", {{"description", "chatbot educator"}, {"chatbot", true}}},
            {"C", {{"description", "expert human educator"}, {"chatbot", false}}}}},
          {"endpoints",
           {{"generator", endpoint_defaults(2048)},
            {"educator", endpoint_defaults(gateway::EndpointConfig::kDefaultMaxTokens)},
            {"patient", endpoint_defaults(gateway::EndpointConfig::kDefaultMaxTokens)},
            {"judge", endpoint_defaults(512)},
            {"chatbot", endpoint_defaults(gateway::EndpointConfig::kDefaultMaxTokens)}}}};
}

Json load_config(const fs::path& path) {
  Json j;
  try {
    j = Json::parse(dataset::read_file(path));
  } catch (const std::exception& e) {
    throw UsageError("config " + path.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("version") || j["version"] != 1) {
    throw UsageError("config " + path.string() + " must be an object with \"version\": 1");
  }
  return j;
}

bool endpoint_configured(const Json& settings, const std::string& role) {
  const Json& e = settings["endpoints"][role];
  return !e["mock"].is_null() || !e["url"].is_null();
}

gateway::Endpoint make_endpoint(const Json& settings, const std::string& role) {
  const Json& e = settings.at("endpoints").at(role);
  gateway::Endpoint ep;
  auto& c = ep.config;
  try {
    const bool local = e.at("preset") == "local";
    c.temperature = e.at("temperature").is_null()
                        ? (local ? gateway::EndpointConfig::kLocalTemperature
                                 : gateway::EndpointConfig::kHostedTemperature)
                        : e.at("temperature").get<double>();
    c.max_tokens = e.at("max_tokens").get<int>();
    c.request_timeout = std::chrono::duration<double>(e.at("timeout_seconds").get<double>());
    c.max_retries = e.at("max_retries").get<int>();
    if (!e.at("seed").is_null()) c.seed = e.at("seed").get<std::int64_t>();
    if (!e.at("api_key_env").is_null()) c.api_key_env = e.at("api_key_env").get<std::string>();
    if (!e.at("model").is_null()) c.model_name = e.at("model").get<std::string>();

    if (!e.at("mock").is_null()) {
      const fs::path script = e.at("mock").get<std::string>();
      c.base_url = "mock://" + role;
      if (c.model_name.empty()) c.model_name = "mock-" + role;
      ep.make_backend = gateway::MockBackend::factory(gateway::MockScript::load(script));
    } else if (!e.at("url").is_null()) {
      c.base_url = e.at("url").get<std::string>();
      if (c.model_name.empty()) throw UsageError("--" + role + "-model is required with a URL");
      ep.make_backend =
          gateway::HttpChatClient::shared_factory(std::make_shared<gateway::HttpChatClient>());
    } else {
      throw UsageError("no " + role + " endpoint: pass --" + role + "-url or --" + role + "-mock");
    }
    c.validate();
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& ex) {
    throw UsageError(role + " endpoint: " + ex.what());
  }
  if (!settings.at("replay_cache").is_null()) {
    auto cache = std::make_shared<gateway::ReplayCache>(
        settings.at("replay_cache").get<std::string>());
    ep.make_backend = gateway::caching_factory(cache, ep.make_backend);
  }
  return ep;
}

RunManifest::RunManifest(std::string command, std::vector<std::string> args,
                         const Json& settings)
    : command_(std::move(command)),
      args_(std::move(args)),
      config_digest_(sha256_hex(canonical_dump(settings))),
      seed_(settings.value("seed", Json(nullptr))),
      started_at_(timestamp()) {}

void RunManifest::add_input(const fs::path& path) { inputs_.push_back(file_entry(path)); }
void RunManifest::add_output(const fs::path& path) { outputs_.push_back(file_entry(path)); }

void RunManifest::write(const fs::path& dir, int exit_code) const {
  const Json j{{"command", command_},
               {"args", args_},
               {"config_digest", config_digest_},
               {"seed", seed_},
               {"inputs", inputs_},
               {"outputs", outputs_},
               {"counts", counts_},
               {"started_at", started_at_},
               {"finished_at", timestamp()},
               {"exit_code", exit_code}};
  dataset::write_file_atomic(dir / "run_manifest.json", j.dump(2) + "\n");
}

void prepare_out_dir(const fs::path& dir, bool force) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw UsageError(dir.string() + " is not a directory");
    if (!fs::is_empty(dir) && !force) {
      throw UsageError("refusing to write into non-empty " + dir.string() +
                       " (use --force to overwrite)");
    }
  }
  fs::create_directories(dir);
}

namespace {

template <typename T, typename F>
std::vector<T> read_kind(const fs::path& dir, const char* kind, F&& decode) {
  const fs::path path = dir / dataset::ldj_filename(kind);
  if (!fs::exists(path)) throw UsageError("missing " + path.string());
  std::vector<T> out;
  for (const auto& j : dataset::read_ldj(path, kind)) out.push_back(decode(j));
  return out;
}

}  // namespace

std::vector<forge::DischargeNote> read_notes(const fs::path& dir) {
  return read_kind<forge::DischargeNote>(dir, "notes", dataset::decode_note);
}

std::vector<forge::ComprehensionExam> read_exams(const fs::path& dir) {
  return read_kind<forge::ComprehensionExam>(dir, "exams", dataset::decode_exam);
}

std::vector<forge::ReferenceConversation> read_conversations(const fs::path& dir) {
  return read_kind<forge::ReferenceConversation>(dir, "conversations",
                                                 dataset::decode_conversation);
}

std::vector<std::string> read_split(const fs::path& dir, const std::string& split) {
  std::vector<std::string> ids;
  for (const auto& j : read_kind<Json>(dir, "splits", [](const Json& x) { return x; })) {
    if (j.at("split") == split) ids.push_back(j.at("id").get<std::string>());
  }
  return ids;
}

}  // namespace arena::cli
