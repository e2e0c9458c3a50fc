#include <httplib.h>

#include "arena/gateway/http_client.hpp"

namespace arena::gateway {

namespace {

// Splits "scheme://host[:port]/path" into origin and path.
std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto path_start =
      url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpResponse HttplibTransport::post(const std::string& url,
                                    const Headers& headers,
                                    const std::string& body,
                                    std::chrono::duration<double> timeout) {
  const auto [origin, path] = split_url(url);
  httplib::Client client(origin);
  const auto usec =
      std::chrono::duration_cast<std::chrono::microseconds>(timeout);
  client.set_connection_timeout(usec);
  client.set_read_timeout(usec);
  client.set_write_timeout(usec);
  httplib::Headers h;
  for (const auto& [k, v] : headers) {
    if (k != "Content-Type") h.emplace(k, v);
  }
  auto res = client.Post(path, h, body, "application/json");
  if (!res) {
    const auto err = res.error();
    const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                           err == httplib::Error::Read;
    throw TransportFailure("transport error: " + httplib::to_string(err),
                           timed_out);
  }
  return HttpResponse{res->status, res->body};
}

}  // namespace arena::gateway
