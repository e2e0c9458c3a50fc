#include "arena/session/http.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

namespace arena::session {

namespace {

const char* kJson = "application/json";

void send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(canonical_dump(body), kJson);
}

Json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  try {
    auto j = Json::parse(req.body);
    if (!j.is_object()) throw InvalidRequest("request body must be a JSON object");
    return j;
  } catch (const Json::parse_error& e) {
    throw InvalidRequest(std::string("malformed JSON: ") + e.what());
  }
}

std::string str(const Json& j, const char* key, bool required = true) {
  if (!j.contains(key) || j[key].is_null()) {
    if (required) throw InvalidRequest(std::string("missing field ") + key);
    return {};
  }
  if (!j[key].is_string()) throw InvalidRequest(std::string(key) + " must be a string");
  return j[key].get<std::string>();
}

std::string param(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) throw InvalidRequest(std::string("missing query parameter ") + key);
  return req.get_param_value(key);
}

std::uint64_t uint_param(const httplib::Request& req, const char* key, std::uint64_t fallback) {
  if (!req.has_param(key)) return fallback;
  try {
    return std::stoull(req.get_param_value(key));
  } catch (const std::exception&) {
    throw InvalidRequest(std::string(key) + " must be a non-negative integer");
  }
}

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const SessionError& e) {
      send(res, http_status(e.code()), {{"error", e.code()}, {"message", e.what()}});
    } catch (const std::exception& e) {
      spdlog::error("{} {}: {}", req.method, req.path, e.what());
      send(res, 500, {{"error", "Internal"}, {"message", e.what()}});
    }
  };
}

}  // namespace

int http_status(const std::string& code) {
  if (code == "UnknownSession" || code == "UnknownNote" || code == "UnknownExam" ||
      code == "UnknownGroup") {
    return 404;
  }
  if (code == "Forbidden") return 403;
  if (code == "DuplicateSession" || code == "WrongState") return 409;
  if (code == "SessionExpired") return 410;
  if (code == "IncompleteAnswers") return 422;
  if (code == "EndpointError") return 502;
  return 400;
}

struct HttpServer::Impl {
  SessionService& service;
  httplib::Server server;
  explicit Impl(SessionService& s) : service(s) {}
};

HttpServer::HttpServer(SessionService& service) : impl_(std::make_unique<Impl>(service)) {
  auto& svc = impl_->service;
  auto& srv = impl_->server;
  const std::string id = R"(/sessions/([A-Za-z0-9_-]+))";

  srv.Post("/sessions", guarded([&svc](const auto& req, auto& res) {
             const Json body = parse_body(req);
             CreateRequest r;
             r.session_id = str(body, "session_id", false);
             r.group = str(body, "group");
             r.note_id = str(body, "note_id");
             r.exam_id = str(body, "exam_id");
             r.patient_subject = str(body, "patient_subject");
             r.educator_subject = str(body, "educator_subject", false);
             const auto created = svc.create_session(r);
             send(res, 201,
                  {{"session_id", created.session_id},
                   {"patient_token", created.patient_token},
                   {"educator_token", created.educator_token ? Json(*created.educator_token)
                                                             : Json(nullptr)}});
           }));

  srv.Post(id + "/join", guarded([&svc](const auto& req, auto& res) {
             const Json body = parse_body(req);
             send(res, 200,
                  svc.join(req.matches[1], seat_from_string(str(body, "seat")), str(body, "token")));
           }));

  srv.Post(id + "/pretest", guarded([&svc](const auto& req, auto& res) {
             const Json body = parse_body(req);
             std::optional<int> score;
             if (body.contains("score") && !body["score"].is_null()) {
               if (!body["score"].is_number_integer()) throw InvalidRequest("score must be an integer");
               score = body["score"].template get<int>();
             }
             send(res, 200, svc.submit_pretest(req.matches[1], str(body, "token"), score));
           }));

  srv.Get(id + "/view", guarded([&svc](const auto& req, auto& res) {
            send(res, 200,
                 svc.view(req.matches[1], seat_from_string(param(req, "seat")), param(req, "token")));
          }));

  srv.Post(id + "/messages", guarded([&svc](const auto& req, auto& res) {
             const Json body = parse_body(req);
             send(res, 200,
                  svc.post_message(req.matches[1], seat_from_string(str(body, "seat")),
                                   str(body, "token"), str(body, "text")));
           }));

  srv.Post(id + "/finish", guarded([&svc](const auto& req, auto& res) {
             const Json body = parse_body(req);
             send(res, 200,
                  svc.finish_chat(req.matches[1], seat_from_string(str(body, "seat")),
                                  str(body, "token")));
           }));

  srv.Post(id + "/exam", guarded([&svc](const auto& req, auto& res) {
             const Json body = parse_body(req);
             if (!body.contains("answers") || !body["answers"].is_array()) {
               throw InvalidRequest("answers must be an array");
             }
             std::vector<std::optional<int>> answers;
             for (const auto& a : body["answers"]) {
               if (a.is_null()) {
                 answers.emplace_back();
               } else if (a.is_number_integer()) {
                 answers.emplace_back(a.template get<int>());
               } else {
                 throw InvalidRequest("answers must be option indices or null");
               }
             }
             const auto sub = svc.submit_exam(req.matches[1], str(body, "token"), answers,
                                              humanness_from_string(str(body, "humanness_guess")));
             send(res, 200,
                  {{"session_id", sub.session_id},
                   {"answers", sub.answers},
                   {"score", sub.score},
                   {"humanness_guess", to_string(sub.humanness_guess)}});
           }));

  srv.Get(id + "/reveal", guarded([&svc](const auto& req, auto& res) {
            send(res, 200, svc.reveal(req.matches[1], param(req, "token")));
          }));

  srv.Post(id + "/close", guarded([&svc](const auto& req, auto& res) {
             const Json body = parse_body(req);
             send(res, 200, svc.close(req.matches[1], str(body, "token")));
           }));

  srv.Get(id + "/poll", guarded([&svc](const auto& req, auto& res) {
            const auto timeout = std::min<std::uint64_t>(uint_param(req, "timeout_ms", 25000), 60000);
            send(res, 200,
                 svc.wait_view(req.matches[1], seat_from_string(param(req, "seat")),
                               param(req, "token"), uint_param(req, "after", 0),
                               std::chrono::milliseconds(timeout)));
          }));

  srv.Get(id + "/stream", guarded([&svc](const auto& req, auto& res) {
            const std::string session = req.matches[1];
            const Seat seat = seat_from_string(param(req, "seat"));
            const std::string token = param(req, "token");
            // Validates the session and token before committing to a stream.
            svc.view(session, seat, token);
            auto version = std::make_shared<std::uint64_t>(uint_param(req, "after", 0));
            res.set_header("Cache-Control", "no-cache");
            res.set_chunked_content_provider(
                "text/event-stream",
                [&svc, session, seat, token, version](std::size_t, httplib::DataSink& sink) {
                  Json v;
                  try {
                    v = svc.wait_view(session, seat, token, *version, std::chrono::seconds(15));
                  } catch (const std::exception&) {
                    sink.done();
                    return true;
                  }
                  const auto seen = v["version"].get<std::uint64_t>();
                  std::string chunk = ": keepalive\n\n";
                  if (seen > *version) {
                    *version = seen;
                    chunk = "id: " + std::to_string(seen) + "\nevent: view\ndata: " +
                            canonical_dump(v) + "\n\n";
                  }
                  if (!sink.write(chunk.data(), chunk.size())) return false;
                  const auto state = v["state"].get<std::string>();
                  if (state == "revealed" || state == "closed") sink.done();
                  return true;
                });
          }));
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::serve() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  impl_->service.shutdown();
  impl_->server.stop();
}

}  // namespace arena::session
