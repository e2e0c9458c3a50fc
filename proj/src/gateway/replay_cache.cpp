#include "arena/gateway/replay_cache.hpp"

#include <fstream>
#include <sstream>

#include "arena/common/digest.hpp"
#include "arena/common/json.hpp"
#include "arena/gateway/errors.hpp"

namespace arena::gateway {

namespace {
constexpr std::string_view kMagic = "arena-replay/1";
}

std::string request_digest(const EndpointConfig& config,
                           std::span<const ChatMessage> messages) {
  Json msgs = Json::array();
  for (const auto& m : messages) {
    msgs.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  Json key = {{"model", config.model_name},
              {"temperature", config.temperature},
              {"max_tokens", config.max_tokens},
              {"messages", std::move(msgs)}};
  if (config.seed) key["seed"] = *config.seed;
  return sha256_hex(canonical_dump(key));
}

ReplayCache::ReplayCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path ReplayCache::path_for(const std::string& digest) const {
  return dir_ / (digest + ".reply");
}

std::optional<std::string> ReplayCache::lookup(const std::string& digest) const {
  std::ifstream in(path_for(digest), std::ios::binary);
  if (!in) return std::nullopt;
  std::string header;
  std::getline(in, header);
  std::stringstream body;
  body << in.rdbuf();
  std::istringstream hs(header);
  std::string magic, stored_digest, body_hash;
  hs >> magic >> stored_digest >> body_hash;
  if (magic != kMagic || stored_digest != digest) {
    throw CacheCorrupt("replay entry " + digest + " has a mismatched header");
  }
  std::string reply = body.str();
  if (sha256_hex(reply) != body_hash) {
    throw CacheCorrupt("replay entry " + digest + " body digest mismatch");
  }
  return reply;
}

void ReplayCache::store(const std::string& digest, const std::string& reply) {
  std::lock_guard lock(write_mu_);
  const auto final_path = path_for(digest);
  auto tmp = final_path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << kMagic << ' ' << digest << ' ' << sha256_hex(reply) << '\n'
        << reply;
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, final_path);
}

std::string record_replay(ReplayCache& cache, ChatBackend& backend,
                          const EndpointConfig& config,
                          std::span<const ChatMessage> messages) {
  const std::string digest = request_digest(config, messages);
  if (auto hit = cache.lookup(digest)) return *hit;
  std::string reply = backend.complete(config, messages);
  cache.store(digest, reply);
  return reply;
}

BackendFactory caching_factory(std::shared_ptr<ReplayCache> cache,
                               BackendFactory inner) {
  class Cached final : public ChatBackend {
   public:
    Cached(std::shared_ptr<ReplayCache> c, std::unique_ptr<ChatBackend> b)
        : cache_(std::move(c)), inner_(std::move(b)) {}

   private:
    std::string do_complete(const EndpointConfig& config,
                            std::span<const ChatMessage> messages) override {
      return record_replay(*cache_, *inner_, config, messages);
    }
    std::shared_ptr<ReplayCache> cache_;
    std::unique_ptr<ChatBackend> inner_;
  };
  return [cache = std::move(cache),
          inner = std::move(inner)]() -> std::unique_ptr<ChatBackend> {
    return std::make_unique<Cached>(cache, inner());
  };
}

}  // namespace arena::gateway
