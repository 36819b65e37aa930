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

#include "vecaxis/service.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "vecaxis/comparison.hpp"
#include "vecaxis/dimreduce.hpp"
#include "vecaxis/error.hpp"
#include "vecaxis/projection.hpp"

namespace vecaxis {

// ---------------------------------------------------------------------------
// config

namespace {

[[noreturn]] void config_error(const std::string& message) { throw Error(ErrorKind::ConfigError, message); }

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base.empty() ? base / path : path;
}

}  // namespace

std::vector<std::string> load_label_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open label set file '" + path.string() + "'").about(path.string());
    std::vector<std::string> labels;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        labels.push_back(line.substr(first));
    }
    return labels;
}

namespace {

std::size_t config_count(const Json& doc, const char* key, std::size_t fallback, std::size_t min) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_number_unsigned() || v.get<std::size_t>() < min) {
        config_error(std::string("'") + key + "' must be an integer >= " + std::to_string(min));
    }
    return v.get<std::size_t>();
}

}  // namespace

ServerConfig parse_server_config(const Json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) config_error("config must be a JSON object");
    static const std::set<std::string> known{"listen", "spaces", "label_sets", "polar_item_cap", "tsne_workers",
                                             "tsne_max_items"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.contains(key)) config_error("unknown config key '" + key + "'");
    }
    ServerConfig cfg;
    if (doc.contains("listen")) {
        if (!doc["listen"].is_string()) config_error("'listen' must be a string");
        cfg.listen = doc["listen"].get<std::string>();
    }
    cfg.polar_item_cap = config_count(doc, "polar_item_cap", cfg.polar_item_cap, 1);
    cfg.tsne_workers = config_count(doc, "tsne_workers", cfg.tsne_workers, 1);
    cfg.tsne_max_items = config_count(doc, "tsne_max_items", cfg.tsne_max_items, 1);

    if (!doc.contains("spaces") || !doc["spaces"].is_array() || doc["spaces"].empty()) {
        config_error("'spaces' must be a non-empty array");
    }
    std::set<std::string> names;
    for (const auto& s : doc["spaces"]) {
        if (!s.is_object()) config_error("each space must be an object");
        static const std::set<std::string> space_keys{"name", "vectors", "metadata", "normalize", "frequency_sorted"};
        for (const auto& [key, value] : s.items()) {
            if (!space_keys.contains(key)) config_error("unknown space key '" + key + "'");
        }
        SpaceConfig sc;
        if (!s.contains("name") || !s["name"].is_string()) config_error("space needs a string 'name'");
        sc.name = s["name"].get<std::string>();
        if (!names.insert(sc.name).second) config_error("duplicate space name '" + sc.name + "'");
        if (!s.contains("vectors") || !s["vectors"].is_string()) {
            config_error("space '" + sc.name + "' needs a string 'vectors' path");
        }
        sc.vectors = resolve(base_dir, s["vectors"].get<std::string>());
        if (s.contains("metadata") && !s["metadata"].is_null()) {
            if (!s["metadata"].is_string()) config_error("space '" + sc.name + "': 'metadata' must be a path");
            sc.metadata = resolve(base_dir, s["metadata"].get<std::string>());
        }
        for (const char* flag : {"normalize", "frequency_sorted"}) {
            if (s.contains(flag) && !s[flag].is_boolean()) {
                config_error("space '" + sc.name + "': '" + flag + "' must be a boolean");
            }
        }
        sc.normalize = s.value("normalize", true);
        sc.frequency_sorted = s.value("frequency_sorted", true);
        cfg.spaces.push_back(std::move(sc));
    }

    if (doc.contains("label_sets")) {
        const auto& sets = doc["label_sets"];
        if (!sets.is_object()) config_error("'label_sets' must be an object");
        for (const auto& [name, value] : sets.items()) {
            if (value.is_array()) {
                std::vector<std::string> labels;
                for (const auto& l : value) {
                    if (!l.is_string()) config_error("label set '" + name + "' must contain strings");
                    labels.push_back(l.get<std::string>());
                }
                cfg.label_sets[name] = std::move(labels);
            } else if (value.is_object() && value.contains("file") && value["file"].is_string()) {
                cfg.label_sets[name] = load_label_file(resolve(base_dir, value["file"].get<std::string>()));
            } else {
                config_error("label set '" + name + "' must be an array or {\"file\": path}");
            }
        }
    }
    return cfg;
}

ServerConfig load_server_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open config '" + path.string() + "'").about(path.string());
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        config_error("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    ServerConfig cfg = parse_server_config(doc, path.parent_path());
    if (const char* env = std::getenv(kListenEnv); env && *env) cfg.listen = env;
    return cfg;
}

std::vector<EmbeddingSpace> load_spaces(const ServerConfig& config) {
    std::vector<EmbeddingSpace> out;
    std::set<std::string> names;
    for (const auto& sc : config.spaces) {
        if (!names.insert(sc.name).second) config_error("duplicate space name '" + sc.name + "'");
        EmbeddingSpace space = load_space_file(sc.vectors, sc.name).with_frequency_sorted(sc.frequency_sorted);
        if (sc.normalize) space = normalize(space);
        if (sc.metadata) {
            std::ifstream in(*sc.metadata);
            if (!in) {
                throw Error(ErrorKind::IoError, "cannot open metadata '" + sc.metadata->string() + "'")
                    .about(sc.metadata->string());
            }
            space = attach_metadata(space, load_metadata(in)).space;
        }
        out.push_back(std::move(space));
    }
    return out;
}

NamedSets build_named_sets(const ServerConfig& config) {
    NamedSets sets = default_named_sets();
    for (const auto& [name, labels] : config.label_sets) {
        sets[name] = std::make_shared<const LabelSet>(labels.begin(), labels.end());
    }
    return sets;
}

// ---------------------------------------------------------------------------
// jobs

std::string_view to_string(JobState state) noexcept {
    switch (state) {
        case JobState::Queued: return "queued";
        case JobState::Running: return "running";
        case JobState::Done: return "done";
        case JobState::Failed: return "failed";
        case JobState::Canceled: return "canceled";
    }
    return "queued";
}

struct JobQueue::Job {
    std::string id;
    Work work;
    JobState state = JobState::Queued;
    double progress = 0.0;
    std::optional<Json> result;
    std::optional<Json> error;
    std::stop_source stop;

    JobSnapshot snapshot() const { return JobSnapshot{id, state, progress, result, error}; }
};

JobQueue::JobQueue(std::size_t workers) {
    workers = std::max<std::size_t>(workers, 1);
    for (std::size_t i = 0; i < workers; ++i) {
        workers_.emplace_back([this](std::stop_token stop) { run(stop); });
    }
}

JobQueue::~JobQueue() {
    {
        std::lock_guard lock(mutex_);
        for (auto& [id, job] : jobs_) job->stop.request_stop();
    }
    for (auto& w : workers_) w.request_stop();
    changed_.notify_all();
    workers_.clear();  // joins
}

std::string JobQueue::submit(Work work) {
    std::lock_guard lock(mutex_);
    auto job = std::make_shared<Job>();
    job->id = "job-" + std::to_string(next_id_++);
    job->work = std::move(work);
    jobs_.emplace(job->id, job);
    pending_.push_back(job);
    changed_.notify_all();
    return job->id;
}

JobSnapshot JobQueue::get(std::string_view id) const {
    std::lock_guard lock(mutex_);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) {
        throw Error(ErrorKind::UnknownJob, "unknown job '" + std::string(id) + "'").about(std::string(id));
    }
    return it->second->snapshot();
}

JobSnapshot JobQueue::cancel(std::string_view id) {
    std::lock_guard lock(mutex_);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) {
        throw Error(ErrorKind::UnknownJob, "unknown job '" + std::string(id) + "'").about(std::string(id));
    }
    Job& job = *it->second;
    if (job.state == JobState::Queued) {
        job.state = JobState::Canceled;
        changed_.notify_all();
    } else if (job.state == JobState::Running) {
        job.stop.request_stop();
    }
    return job.snapshot();
}

JobSnapshot JobQueue::wait(std::string_view id) const {
    std::unique_lock lock(mutex_);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) {
        throw Error(ErrorKind::UnknownJob, "unknown job '" + std::string(id) + "'").about(std::string(id));
    }
    auto job = it->second;
    changed_.wait(lock, [&] { return job->state != JobState::Queued && job->state != JobState::Running; });
    return job->snapshot();
}

void JobQueue::run(std::stop_token stop) {
    while (true) {
        std::shared_ptr<Job> job;
        {
            std::unique_lock lock(mutex_);
            if (!changed_.wait(lock, stop, [&] { return !pending_.empty(); })) return;
            job = std::move(pending_.front());
            pending_.pop_front();
            if (job->state != JobState::Queued) continue;  // canceled while queued
            job->state = JobState::Running;
        }
        changed_.notify_all();

        auto progress = [&](double fraction) {
            std::lock_guard lock(mutex_);
            job->progress = std::clamp(fraction, job->progress, 1.0);
        };
        JobState final_state = JobState::Done;
        std::optional<Json> result;
        std::optional<Json> error;
        try {
            result = job->work(job->stop.get_token(), progress);
        } catch (const Error& e) {
            final_state = e.kind() == ErrorKind::Canceled ? JobState::Canceled : JobState::Failed;
            if (final_state == JobState::Failed) error = error_to_json(e);
        } catch (const std::exception& e) {
            final_state = JobState::Failed;
            error = Json{{"error_kind", "Internal"}, {"message", e.what()}};
        }
        {
            std::lock_guard lock(mutex_);
            job->state = final_state;
            if (final_state == JobState::Done) job->progress = 1.0;
            job->result = std::move(result);
            job->error = std::move(error);
            job->work = nullptr;
        }
        changed_.notify_all();
    }
}

// ---------------------------------------------------------------------------
// request helpers

namespace {

// An engine error tagged with the request field that caused it.
struct FieldError : Error {
    FieldError(const Error& e, std::string f) : Error(e), field(std::move(f)) {}
    std::string field;
};

template <typename F>
auto in_field(const std::string& field, F&& f) {
    try {
        return f();
    } catch (const FieldError&) {
        throw;
    } catch (const Error& e) {
        throw FieldError(e, field);
    }
}

[[noreturn]] void bad_request(const std::string& message) { throw Error(ErrorKind::BadRequest, message); }

void require_object(const Json& req, std::initializer_list<const char*> allowed) {
    if (!req.is_object()) bad_request("request body must be a JSON object");
    for (const auto& [key, value] : req.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            bad_request("unknown request field '" + key + "'");
        }
    }
}

std::string get_string(const Json& req, const char* key) {
    if (!req.contains(key)) bad_request(std::string("missing field '") + key + "'");
    if (!req[key].is_string()) bad_request(std::string("field '") + key + "' must be a string");
    return req[key].get<std::string>();
}

std::size_t get_count(const Json& req, const char* key, std::size_t fallback) {
    if (!req.contains(key)) return fallback;
    if (!req[key].is_number_unsigned()) bad_request(std::string("field '") + key + "' must be a non-negative integer");
    return req[key].get<std::size_t>();
}

Measure get_measure(const Json& req) {
    if (!req.contains("measure")) return Measure::Cosine;
    if (!req["measure"].is_string()) bad_request("field 'measure' must be a string");
    return in_field("measure", [&] { return parse_measure(req["measure"].get<std::string>()); });
}

std::vector<AxisSpec> get_axes(const Json& req) {
    if (!req.contains("axes")) bad_request("missing field 'axes'");
    if (!req["axes"].is_array()) bad_request("field 'axes' must be an array");
    std::vector<AxisSpec> axes;
    for (std::size_t i = 0; i < req["axes"].size(); ++i) {
        const auto& a = req["axes"][i];
        const std::string field = "axes[" + std::to_string(i) + "]";
        if (a.is_string()) {
            axes.push_back(in_field(field, [&] { return make_axis(a.get<std::string>()); }));
        } else if (a.is_object() && a.contains("formula") && a["formula"].is_string()) {
            std::string label;
            if (a.contains("label")) {
                if (!a["label"].is_string()) bad_request(field + ".label must be a string");
                label = a["label"].get<std::string>();
            }
            axes.push_back(in_field(field, [&] { return make_axis(a["formula"].get<std::string>(), label); }));
        } else {
            bad_request(field + " must be a formula string or {formula, label}");
        }
    }
    return axes;
}

Json with_warnings(Json doc, const std::vector<std::string>& warnings) {
    doc["warnings"] = warnings;
    return doc;
}

}  // namespace

Json error_to_json(const Error& error) {
    Json doc{{"error_kind", std::string(to_string(error.kind()))}, {"message", error.what()}};
    if (error.offset()) doc["offset"] = *error.offset();
    if (const auto* fe = dynamic_cast<const FieldError*>(&error)) doc["field"] = fe->field;
    return doc;
}

Json job_to_json(const JobSnapshot& job) {
    Json doc{{"id", job.id}, {"state", std::string(to_string(job.state))}, {"progress", job.progress}};
    if (job.result) doc["result"] = *job.result;
    if (job.error) doc["error"] = *job.error;
    return doc;
}

// ---------------------------------------------------------------------------
// Service

Service::Service(std::vector<EmbeddingSpace> spaces, NamedSets sets, ServiceOptions options)
    : sets_(std::move(sets)), options_(options), jobs_(options.tsne_workers) {
    for (auto& s : spaces) {
        std::string name = s.name();
        if (!spaces_.emplace(name, std::move(s)).second) config_error("duplicate space name '" + name + "'");
    }
}

std::unique_ptr<Service> Service::from_config(const ServerConfig& config) {
    ServiceOptions options{config.polar_item_cap, config.tsne_workers, config.tsne_max_items};
    return std::make_unique<Service>(load_spaces(config), build_named_sets(config), options);
}

const EmbeddingSpace& Service::space(std::string_view name) const {
    auto it = spaces_.find(name);
    if (it == spaces_.end()) {
        throw Error(ErrorKind::UnknownSpace, "unknown space '" + std::string(name) + "'").about(std::string(name));
    }
    return it->second;
}

Service::Selection Service::select_items(const EmbeddingSpace& space, const Json& req) const {
    Selection sel;
    const bool has_items = req.contains("items") && !req["items"].is_null();
    const bool has_filter = req.contains("filter") && !req["filter"].is_null();
    std::vector<std::string> explicit_items;
    if (has_items) {
        if (!req["items"].is_array()) bad_request("field 'items' must be an array of labels");
        for (const auto& i : req["items"]) {
            if (!i.is_string()) bad_request("field 'items' must be an array of labels");
            explicit_items.push_back(i.get<std::string>());
        }
    }
    if (!has_filter) {
        sel.items = has_items ? std::move(explicit_items) : space.labels();
        return sel;
    }
    if (!req["filter"].is_string()) bad_request("field 'filter' must be a string");
    const FilterRule rule = in_field("filter", [&] { return parse_filter(req["filter"].get<std::string>(), sets_); });
    FilterResult result = in_field("filter", [&] { return apply_filter(space, rule); });
    sel.warnings = std::move(result.warnings);
    if (!has_items) {
        sel.items = std::move(result.labels);
    } else {
        const std::set<std::string> pass(result.labels.begin(), result.labels.end());
        for (auto& item : explicit_items) {
            if (pass.contains(item)) sel.items.push_back(std::move(item));
        }
    }
    return sel;
}

Json Service::list_spaces() const {
    Json out = Json::array();
    for (const auto& [name, s] : spaces_) {
        out.push_back(Json{{"name", name},
                           {"dimension", s.dimension()},
                           {"size", s.size()},
                           {"normalized", s.normalized()},
                           {"frequency_sorted", s.frequency_sorted()},
                           {"has_metadata", s.has_metadata()}});
    }
    return Json{{"spaces", std::move(out)}};
}

Json Service::cartesian(const Json& req) const {
    require_object(req, {"space", "axes", "items", "filter", "measure", "analogy"});
    const EmbeddingSpace& s = space(get_string(req, "space"));
    auto axes = get_axes(req);
    const Measure measure = get_measure(req);
    Selection sel = select_items(s, req);
    CartesianProjection projection = project_cartesian(s, std::move(axes), std::move(sel.items), measure);

    std::optional<AnalogyDecoration> analogy;
    if (req.contains("analogy") && !req["analogy"].is_null() && req["analogy"] != false) {
        double band = kDefaultBandWidth;
        const auto& a = req["analogy"];
        if (a.is_object()) {
            for (const auto& [key, value] : a.items()) {
                if (key != "band_width") bad_request("unknown analogy field '" + key + "'");
                if (!value.is_number()) bad_request("analogy.band_width must be a number");
                band = value.get<double>();
            }
        } else if (a != true) {
            bad_request("field 'analogy' must be a boolean or {band_width}");
        }
        analogy = decorate_analogy(projection, band);
    }
    return with_warnings(to_json(projection, analogy ? &*analogy : nullptr), sel.warnings);
}

Json Service::polar(const Json& req) const {
    require_object(req, {"space", "axes", "items", "filter", "measure"});
    const EmbeddingSpace& s = space(get_string(req, "space"));
    auto axes = get_axes(req);
    const Measure measure = get_measure(req);
    Selection sel = select_items(s, req);
    return with_warnings(
        to_json(project_polar(s, std::move(axes), std::move(sel.items), measure, options_.polar_item_cap)),
        sel.warnings);
}

Json Service::pca(const Json& req) const {
    require_object(req, {"space", "items", "filter", "k"});
    const EmbeddingSpace& s = space(get_string(req, "space"));
    const std::size_t k = get_count(req, "k", 2);
    Selection sel = select_items(s, req);
    return with_warnings(to_json(project_pca_view(s, std::move(sel.items), k)), sel.warnings);
}

Json Service::submit_tsne(const Json& req) {
    require_object(req, {"space", "items", "filter", "config"});
    const EmbeddingSpace& s = space(get_string(req, "space"));
    const TsneConfig config = req.contains("config") ? tsne_config_from_json(req["config"]) : TsneConfig{};
    Selection sel = select_items(s, req);
    if (sel.items.size() > options_.tsne_max_items) {
        throw Error(ErrorKind::TooManyItems, "t-SNE accepts at most " + std::to_string(options_.tsne_max_items) +
                                                 " items, got " + std::to_string(sel.items.size()));
    }
    validate_tsne_config(sel.items.size(), config);
    Matrix rows = gather_rows(s, sel.items);  // UnknownLabel surfaces now, not in the job

    auto work = [rows = std::move(rows), items = std::move(sel.items), warnings = std::move(sel.warnings), config](
                    std::stop_token stop, const std::function<void(double)>& progress) {
        TsneView view;
        view.tsne = tsne(rows, config, stop, [&](std::size_t it, std::size_t total) {
            progress(total ? double(it) / double(total) : 1.0);
        });
        view.view.axis_labels = {"TSNE1", "TSNE2"};
        view.view.items = items;
        view.view.coords = view.tsne.embedding;
        return with_warnings(to_json(view), warnings);
    };
    return job_to_json(jobs_.get(jobs_.submit(std::move(work))));
}

Json Service::compare(const Json& req) const {
    require_object(req, {"space_a", "space_b", "axes", "items", "filter", "measure", "min_length"});
    const EmbeddingSpace& a = space(get_string(req, "space_a"));
    const EmbeddingSpace& b = space(get_string(req, "space_b"));
    auto axes = get_axes(req);
    const Measure measure = get_measure(req);
    std::optional<double> min_length;
    if (req.contains("min_length") && !req["min_length"].is_null()) {
        if (!req["min_length"].is_number()) bad_request("field 'min_length' must be a number");
        min_length = req["min_length"].get<double>();
    }
    Selection sel = select_items(a, req);
    ComparisonResult result = vecaxis::compare(a, b, std::move(axes), sel.items, measure);
    if (min_length) result = filter_by_segment_length(result, *min_length);
    return with_warnings(to_json(result, min_length), sel.warnings);
}

Json Service::nearest(const Json& req) const {
    require_object(req, {"space", "formula", "k", "measure", "exclude_atoms"});
    const EmbeddingSpace& s = space(get_string(req, "space"));
    const std::string text = get_string(req, "formula");
    const Formula formula = in_field("formula", [&] { return parse_formula(text); });
    const std::size_t k = get_count(req, "k", 10);
    const Measure measure = get_measure(req);
    bool exclude_atoms = false;
    if (req.contains("exclude_atoms")) {
        if (!req["exclude_atoms"].is_boolean()) bad_request("field 'exclude_atoms' must be a boolean");
        exclude_atoms = req["exclude_atoms"].get<bool>();
    }
    const Vector query = in_field("formula", [&] { return evaluate(formula, s); });
    const auto atoms = free_labels(formula);
    std::vector<Neighbor> ranked = vecaxis::nearest(s, query, exclude_atoms ? k + atoms.size() : k, measure);
    if (exclude_atoms) {
        std::erase_if(ranked, [&](const Neighbor& n) { return atoms.contains(n.label); });
        if (ranked.size() > k) ranked.resize(k);
    }
    return Json{{"kind", "nearest"},
                {"formula", format(formula)},
                {"measure", std::string(to_string(measure))},
                {"neighbors", to_json(ranked)}};
}

Response Service::handle(std::string_view method, std::string_view path, std::string_view body) {
    auto json_response = [](int status, const Json& doc) { return Response{status, doc.dump(), "application/json"}; };
    auto not_found = [&] {
        return json_response(404, Json{{"error_kind", "NotFound"}, {"message", "no route " + std::string(path)}});
    };
    auto not_allowed = [&] {
        return json_response(405, Json{{"error_kind", "MethodNotAllowed"},
                                       {"message", std::string(method) + " not allowed on " + std::string(path)}});
    };
    auto parse_body = [&] {
        try {
            return Json::parse(body);
        } catch (const Json::parse_error& e) {
            throw Error(ErrorKind::BadRequest, std::string("request body is not valid JSON: ") + e.what());
        }
    };

    try {
        if (path == "/api/spaces") {
            if (method != "GET") return not_allowed();
            return json_response(200, list_spaces());
        }
        constexpr std::string_view jobs_prefix = "/api/jobs/";
        if (path.starts_with(jobs_prefix) && path.size() > jobs_prefix.size()) {
            const std::string_view id = path.substr(jobs_prefix.size());
            if (method == "GET") return json_response(200, job_to_json(jobs_.get(id)));
            if (method == "DELETE") return json_response(200, job_to_json(jobs_.cancel(id)));
            return not_allowed();
        }
        using Handler = Json (Service::*)(const Json&) const;
        static const std::map<std::string_view, Handler> posts{
            {"/api/project/cartesian", &Service::cartesian},
            {"/api/project/polar", &Service::polar},
            {"/api/project/pca", &Service::pca},
            {"/api/compare", &Service::compare},
            {"/api/nearest", &Service::nearest},
        };
        if (auto it = posts.find(path); it != posts.end()) {
            if (method != "POST") return not_allowed();
            return json_response(200, (this->*(it->second))(parse_body()));
        }
        if (path == "/api/project/tsne") {
            if (method != "POST") return not_allowed();
            return json_response(202, submit_tsne(parse_body()));
        }
        return not_found();
    } catch (const Error& e) {
        return json_response(http_status(e.kind()), error_to_json(e));
    } catch (const Json::exception& e) {
        return json_response(400, Json{{"error_kind", "BadRequest"}, {"message", e.what()}});
    }
}

}  // namespace vecaxis
