// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <thread>

namespace httplib {
class Server;
}

namespace odal {

// "http://host:port/path" split into the part httplib::Client wants and the path.
struct Url {
  std::string scheme_host_port;
  std::string path;
};

Url parse_url(std::string_view url, std::string_view default_path = "/");

// An httplib server running on a background thread.
class HttpService {
 public:
  using Routes = std::function<void(httplib::Server&)>;

  explicit HttpService(const Routes& routes);
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  // port 0 picks a free port. Returns the bound port.
  int start(const std::string& host, int port);
  void stop();
  // Blocks until stop() is called from another thread or a signal.
  void wait();
  int port() const noexcept { return port_; }
  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace odal
