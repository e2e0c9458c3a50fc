#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>

#include "arena/gateway/backend.hpp"

namespace arena::gateway {

/// Stable request digest: SHA-256 over the canonical encoding of
/// (model_name, temperature, max_tokens, messages), plus the seed when one
/// is configured.
std::string request_digest(const EndpointConfig& config,
                           std::span<const ChatMessage> messages);

/// On-disk reply cache: one file per request digest, `<digest>.reply`. The
/// first line is `arena-replay/1 <request digest> <sha256 of body>`, the
/// rest is the UTF-8 reply verbatim. Writes are serialized and atomic
/// (temp file + rename).
class ReplayCache {
 public:
  explicit ReplayCache(std::filesystem::path dir);

  /// Throws CacheCorrupt when the header does not match the file name or
  /// the body hash.
  std::optional<std::string> lookup(const std::string& digest) const;
  void store(const std::string& digest, const std::string& reply);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path path_for(const std::string& digest) const;

  std::filesystem::path dir_;
  std::mutex write_mu_;
};

/// Returns the cached reply for (config, messages) or asks `backend` and
/// persists its reply.
std::string record_replay(ReplayCache& cache, ChatBackend& backend,
                          const EndpointConfig& config,
                          std::span<const ChatMessage> messages);

/// Wraps every backend produced by `inner` with the cache.
BackendFactory caching_factory(std::shared_ptr<ReplayCache> cache,
                               BackendFactory inner);

}  // namespace arena::gateway
