/*
 * Copyright 2026 The vecaxis Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <atomic>
#include <charconv>

#include "httplib.h"
#include "vecaxis/service.hpp"

namespace vecaxis {

struct HttpServer::Impl {
    Service& service;
    httplib::Server server;
    std::atomic<bool> bound{false};

    explicit Impl(Service& s) : service(s) {
        auto forward = [this](const httplib::Request& req, httplib::Response& res) {
            Response out = service.handle(req.method, req.path, req.body);
            res.status = out.status;
            res.set_content(out.body, out.content_type);
        };
        server.Get(".*", forward);
        server.Post(".*", forward);
        server.Delete(".*", forward);
        server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
        server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                    {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                                    {"Access-Control-Allow-Headers", "Content-Type"}});
    }
};

namespace {

std::pair<std::string, int> split_address(const std::string& address) {
    const auto colon = address.rfind(':');
    if (colon == std::string::npos) {
        throw Error(ErrorKind::ConfigError, "listen address '" + address + "' must be host:port");
    }
    std::string host = address.substr(0, colon);
    if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
    int port = 0;
    const char* begin = address.data() + colon + 1;
    const char* end = address.data() + address.size();
    auto [ptr, ec] = std::from_chars(begin, end, port);
    if (ec != std::errc() || ptr != end || port < 0 || port > 65535) {
        throw Error(ErrorKind::ConfigError, "listen address '" + address + "' has an invalid port");
    }
    return {host.empty() ? "0.0.0.0" : host, port};
}

}  // namespace

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

void HttpServer::listen(const std::string& address) {
    auto [host, port] = split_address(address);
    if (!impl_->server.bind_to_port(host, port)) {
        throw Error(ErrorKind::IoError, "cannot listen on " + address).about(address);
    }
    impl_->bound = true;
    run();
}

int HttpServer::bind_any(const std::string& host) {
    const int port = impl_->server.bind_to_any_port(host);
    if (port < 0) throw Error(ErrorKind::IoError, "cannot bind " + host).about(host);
    impl_->bound = true;
    return port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_ && impl_->bound) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace vecaxis
