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

// HTTP/JSON front end over the engine. Service::handle is transport-free so
// it can be driven directly from tests; HttpServer binds it to a socket.
//
// Endpoints (request and response schemas in docs/api.md):
//
//   GET    /api/spaces
//   POST   /api/project/cartesian
//   POST   /api/project/polar
//   POST   /api/project/pca
//   POST   /api/project/tsne        -> 202 + job handle
//   GET    /api/jobs/{id}
//   DELETE /api/jobs/{id}
//   POST   /api/compare
//   POST   /api/nearest

#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "vecaxis/embedding_store.hpp"
#include "vecaxis/error.hpp"
#include "vecaxis/filtering.hpp"
#include "vecaxis/serialize.hpp"

namespace vecaxis {

struct SpaceConfig {
    std::string name;
    std::filesystem::path vectors;
    std::optional<std::filesystem::path> metadata;
    bool normalize = true;
    bool frequency_sorted = true;
};

struct ServerConfig {
    std::string listen = "127.0.0.1:8080";
    std::vector<SpaceConfig> spaces;
    std::map<std::string, std::vector<std::string>, std::less<>> label_sets;
    std::size_t polar_item_cap = kDefaultPolarItemCap;
    std::size_t tsne_workers = 1;
    std::size_t tsne_max_items = 5000;
};

/// Environment variable that overrides ServerConfig::listen.
inline constexpr const char* kListenEnv = "VECAXIS_LISTEN";

/// Relative paths resolve against `base_dir`. Label sets are either an array
/// of labels or {"file": path} with one label per line. Throws ConfigError.
ServerConfig parse_server_config(const Json& doc, const std::filesystem::path& base_dir = {});
/// Reads the file and applies the VECAXIS_LISTEN override. Throws IoError, ConfigError.
ServerConfig load_server_config(const std::filesystem::path& path);

/// Loads every space (normalizing and attaching metadata as configured).
/// Throws IoError for unreadable files and ConfigError for duplicate names.
std::vector<EmbeddingSpace> load_spaces(const ServerConfig& config);

/// One label per line; blank lines and lines starting with '#' are skipped.
/// Throws IoError.
std::vector<std::string> load_label_file(const std::filesystem::path& path);

/// Named sets from the config merged over default_named_sets().
NamedSets build_named_sets(const ServerConfig& config);

enum class JobState { Queued, Running, Done, Failed, Canceled };
std::string_view to_string(JobState state) noexcept;

struct JobSnapshot {
    std::string id;
    JobState state = JobState::Queued;
    double progress = 0.0;
    std::optional<Json> result;  // Done
    std::optional<Json> error;   // Failed
};

/// Jobs run on a fixed number of worker threads. State only moves forward:
/// queued -> running -> {done, failed, canceled}, or queued -> canceled.
class JobQueue {
public:
    /// Work receives a stop token and a progress callback taking a fraction
    /// in [0, 1]. It returns the result document or throws.
    using Work = std::function<Json(std::stop_token, const std::function<void(double)>&)>;

    explicit JobQueue(std::size_t workers);
    ~JobQueue();
    JobQueue(const JobQueue&) = delete;
    JobQueue& operator=(const JobQueue&) = delete;

    std::string submit(Work work);
    /// Throws UnknownJob.
    JobSnapshot get(std::string_view id) const;
    /// Requests cancellation; a queued job is canceled at once, a running one
    /// when its work observes the stop token. Finished jobs are unchanged.
    /// Throws UnknownJob.
    JobSnapshot cancel(std::string_view id);
    /// Blocks until the job leaves queued/running.
    JobSnapshot wait(std::string_view id) const;

private:
    struct Job;
    void run(std::stop_token stop);

    mutable std::mutex mutex_;
    mutable std::condition_variable_any changed_;
    std::map<std::string, std::shared_ptr<Job>, std::less<>> jobs_;
    std::deque<std::shared_ptr<Job>> pending_;
    std::size_t next_id_ = 1;
    std::vector<std::jthread> workers_;
};

struct Response {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

struct ServiceOptions {
    std::size_t polar_item_cap = kDefaultPolarItemCap;
    std::size_t tsne_workers = 1;
    std::size_t tsne_max_items = 5000;  // exact t-SNE is quadratic per iteration
};

class Service {
public:
    Service(std::vector<EmbeddingSpace> spaces, NamedSets sets, ServiceOptions options = {});
    static std::unique_ptr<Service> from_config(const ServerConfig& config);

    Response handle(std::string_view method, std::string_view path, std::string_view body);

    const EmbeddingSpace& space(std::string_view name) const;  // throws UnknownSpace
    JobQueue& jobs() noexcept { return jobs_; }

private:
    Json list_spaces() const;
    Json cartesian(const Json& req) const;
    Json polar(const Json& req) const;
    Json pca(const Json& req) const;
    Json submit_tsne(const Json& req);
    Json compare(const Json& req) const;
    Json nearest(const Json& req) const;

    struct Selection {
        std::vector<std::string> items;
        std::vector<std::string> warnings;
    };
    Selection select_items(const EmbeddingSpace& space, const Json& req) const;

    std::map<std::string, EmbeddingSpace, std::less<>> spaces_;
    NamedSets sets_;
    ServiceOptions options_;
    JobQueue jobs_;
};

/// Error document {error_kind, message, offset?}.
Json error_to_json(const Error& error);
Json job_to_json(const JobSnapshot& job);

/// Binds a Service to an HTTP listener. `listen` is "host:port".
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Blocks until stop(). Throws IoError if the address cannot be bound.
    void listen(const std::string& address);
    /// Binds to an ephemeral port on `host` and returns it; serve with run().
    int bind_any(const std::string& host);
    void run();
    void stop();
    bool running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace vecaxis
