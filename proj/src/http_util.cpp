// SPDX-License-Identifier: Apache-2.0

#include "odal/http.hpp"

#include <httplib.h>

#include "odal/error.hpp"

namespace odal {

Url parse_url(std::string_view url, std::string_view default_path) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw Error(ErrorCode::kConfigInvalid, "URL needs a scheme: \"" + std::string(url) + "\"");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  Url out;
  if (path_start == std::string_view::npos) {
    out.scheme_host_port = std::string(url);
    out.path = std::string(default_path);
  } else {
    out.scheme_host_port = std::string(url.substr(0, path_start));
    out.path = std::string(url.substr(path_start));
    if (out.path == "/") out.path = std::string(default_path);
  }
  return out;
}

HttpService::HttpService(const Routes& routes) : server_(std::make_unique<httplib::Server>()) { routes(*server_); }

HttpService::~HttpService() { stop(); }

int HttpService::start(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else {
    port_ = server_->bind_to_port(host, port) ? port : -1;
  }
  if (port_ <= 0) throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void HttpService::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

void HttpService::wait() {
  if (thread_.joinable()) thread_.join();
}

}  // namespace odal
