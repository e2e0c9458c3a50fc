#include <atomic>
#include <csignal>
#include <pthread.h>
#include <thread>

#include <spdlog/spdlog.h>

#include "arena/dataset/ldj.hpp"
#include "arena/session/http.hpp"
#include "context.hpp"

namespace arena::cli {

int cmd_serve(const CommandInput& in) {
  const Json& s = in.settings;
  if (!s.contains("scenarios")) throw UsageError("--scenarios is required");
  if (!s.contains("out")) throw UsageError("--out is required");
  const fs::path dir = s["scenarios"].get<std::string>();
  const fs::path out = s["out"].get<std::string>();

  session::Catalog catalog;
  for (auto& n : read_notes(dir)) catalog.notes.emplace(n.note_id, std::move(n));
  for (auto& e : read_exams(dir)) catalog.exams.emplace(e.note_id, std::move(e));

  std::map<std::string, session::Condition> groups;
  for (const auto& [letter, g] : s["groups"].items()) {
    session::Condition c;
    c.description = g.value("description", letter);
    if (g.value("chatbot", false)) c.chatbot = make_endpoint(s, "chatbot");
    groups.emplace(letter, std::move(c));
  }
  if (groups.empty()) throw UsageError("no groups configured");

  session::ServiceOptions options;
  options.session_seconds = s["session_seconds"].get<double>();
  options.grace_seconds = s["grace_seconds"].get<double>();
  options.closing_marker = s["closing_marker"].get<std::string>();

  prepare_out_dir(out, in.force);
  RunManifest manifest("serve", in.args, s);
  for (const char* kind : {"notes", "exams"}) manifest.add_input(dir / dataset::ldj_filename(kind));

  session::SessionService service(std::move(catalog), std::move(groups), options);
  session::HttpServer server(service);
  const std::string host = s["host"].get<std::string>();
  const int port = server.bind(host, s["port"].get<int>());
  if (port < 0) throw UsageError("cannot bind " + host + ":" + std::to_string(s["port"].get<int>()));
  spdlog::info("serving sessions on http://{}:{}", host, port);
  if (s.contains("port_file")) {
    dataset::write_file_atomic(s["port_file"].get<std::string>(), std::to_string(port) + "\n");
  }

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  std::atomic<bool> signalled{false};
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    if (signalled.exchange(true)) return;
    spdlog::info("signal {}, shutting down", sig);
    server.stop();
  });
  const bool ok = server.serve();
  // Wake the waiter if serve() returned on its own.
  if (!signalled.exchange(true)) pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();

  manifest.counts() = {{"sessions", service.session_ids().size()}, {"port", port}};
  const int exit_code = ok ? kExitOk : kExitValidation;
  manifest.write(out, exit_code);
  return exit_code;
}

}  // namespace arena::cli
