#pragma once

#include <memory>
#include <string>

#include "arena/session/service.hpp"

namespace arena::session {

/// HTTP front end for SessionService. Lifecycle calls are request/response
/// JSON; /sessions/{id}/stream pushes view snapshots as server-sent events
/// and /sessions/{id}/poll is the long-poll fallback.
///
///   POST /sessions                      create (operator)
///   POST /sessions/{id}/join            {seat, token}
///   POST /sessions/{id}/pretest         {token, score?}
///   GET  /sessions/{id}/view?seat=&token=
///   POST /sessions/{id}/messages        {seat, token, text}
///   POST /sessions/{id}/finish          {seat, token}
///   POST /sessions/{id}/exam            {token, answers, humanness_guess}
///   GET  /sessions/{id}/reveal?token=
///   POST /sessions/{id}/close           {token}
///   GET  /sessions/{id}/stream?seat=&token=&after=
///   GET  /sessions/{id}/poll?seat=&token=&after=&timeout_ms=
///
/// Errors come back as {"error": <name>, "message": ...}.
class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();

  /// Binds; port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  bool serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// HTTP status for a SessionError code.
int http_status(const std::string& error_code);

}  // namespace arena::session
