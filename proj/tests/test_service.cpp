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

#include <gtest/gtest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "httplib.h"
#include "support/service_fixture.hpp"

using namespace vecaxis;
using namespace std::chrono_literals;

namespace {

struct Reply {
    int status;
    Json body;
};

Reply call(Service& s, std::string_view method, std::string_view path, const Json& body = nullptr) {
    auto r = s.handle(method, path, body.is_null() ? "" : body.dump());
    return {r.status, Json::parse(r.body)};
}

Reply post(Service& s, std::string_view path, const Json& body) { return call(s, "POST", path, body); }

int state_rank(const std::string& state) {
    if (state == "queued") return 0;
    if (state == "running") return 1;
    return 2;
}

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() /
               ("vecaxis_service_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir);
    return dir;
}

void write_file(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(Service, ListsSpaces) {
    auto svc = fixture::make_service();
    auto r = call(*svc, "GET", "/api/spaces");
    ASSERT_EQ(r.status, 200);
    ASSERT_EQ(r.body["spaces"].size(), 3u);
    // sorted by name
    EXPECT_EQ(r.body["spaces"][0]["name"], "raw");
    EXPECT_EQ(r.body["spaces"][0]["normalized"], false);
    EXPECT_EQ(r.body["spaces"][2]["name"], "wiki");
    EXPECT_EQ(r.body["spaces"][2]["dimension"], 12);
    EXPECT_EQ(r.body["spaces"][2]["size"], 55);
}

TEST(Service, CartesianWithNamedSet) {
    auto svc = fixture::make_service();
    auto r = post(*svc, "/api/project/cartesian",
                  {{"space", "wiki"},
                   {"axes", {"avg(he,him)", "avg(she,her)"}},
                   {"filter", "in(@professions)"},
                   {"measure", "cosine"}});
    ASSERT_EQ(r.status, 200) << r.body.dump();
    EXPECT_EQ(r.body["kind"], "cartesian");
    EXPECT_EQ(r.body["axes"].size(), 2u);
    EXPECT_EQ(r.body["axes"][0]["formula"], "avg(he, him)");
    EXPECT_EQ(r.body["items"], Json(fixture::professions()));
    EXPECT_EQ(r.body["coords"].size(), fixture::professions().size());
    EXPECT_TRUE(r.body["warnings"].empty());
}

TEST(Service, ItemsAndFilterCombine) {
    auto svc = fixture::make_service();
    auto r = post(*svc, "/api/project/cartesian",
                  {{"space", "wiki"}, {"axes", {"he", "she"}}, {"items", {"the", "nurse", "chef"}}, {"filter", "not in(@stopwords)"}});
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(r.body["items"], (Json{"nurse", "chef"}));
    auto all = post(*svc, "/api/project/cartesian", {{"space", "wiki"}, {"axes", {"he", "she"}}});
    EXPECT_EQ(all.body["items"].size(), 55u);
}

TEST(Service, AxisObjectsAndAnalogy) {
    auto svc = fixture::make_service();
    auto r = post(*svc, "/api/project/cartesian",
                  {{"space", "wiki"},
                   {"axes", Json::array({Json{{"formula", "king - man"}, {"label", "royal"}}, "woman"})},
                   {"items", {"king", "queen", "man", "woman", "chef"}},
                   {"analogy", {{"band_width", 0.2}}}});
    ASSERT_EQ(r.status, 200) << r.body.dump();
    EXPECT_EQ(r.body["axes"][0]["label"], "royal");
    EXPECT_EQ(r.body["analogy"]["band_width"], 0.2);
    EXPECT_EQ(r.body["analogy"]["entries"].size(), 5u);
}

TEST(Service, SyntaxErrorCarriesOffset) {
    auto svc = fixture::make_service();
    auto r = post(*svc, "/api/project/cartesian", {{"space", "wiki"}, {"axes", {"avg(he,", "she"}}});
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(r.body["error_kind"], "SyntaxError");
    EXPECT_EQ(r.body["offset"], 7);
    EXPECT_EQ(r.body["field"], "axes[0]");

    auto f = post(*svc, "/api/project/cartesian", {{"space", "wiki"}, {"axes", {"he", "she"}}, {"filter", "rank <= "}});
    EXPECT_EQ(f.status, 400);
    EXPECT_EQ(f.body["offset"], 8);
    EXPECT_EQ(f.body["field"], "filter");
}

TEST(Service, ErrorStatusMapping) {
    auto svc = fixture::make_service();
    auto unknown_space = post(*svc, "/api/project/pca", {{"space", "nope"}});
    EXPECT_EQ(unknown_space.status, 404);
    EXPECT_EQ(unknown_space.body["error_kind"], "UnknownSpace");

    auto not_normalized = post(*svc, "/api/compare", {{"space_a", "wiki"}, {"space_b", "raw"}, {"axes", {"he", "she"}}});
    EXPECT_EQ(not_normalized.status, 409);
    EXPECT_EQ(not_normalized.body["error_kind"], "NotNormalized");

    auto too_many = post(*svc, "/api/project/polar", {{"space", "wiki"}, {"axes", {"he", "she", "him"}}});
    EXPECT_EQ(too_many.status, 422);
    EXPECT_EQ(too_many.body["error_kind"], "TooManyItems");

    auto unknown_label = post(*svc, "/api/project/cartesian", {{"space", "wiki"}, {"axes", {"he", "ghost"}}});
    EXPECT_EQ(unknown_label.status, 422);
    EXPECT_EQ(unknown_label.body["error_kind"], "UnknownLabel");

    auto type_error = post(*svc, "/api/project/cartesian", {{"space", "wiki"}, {"axes", {"he", "norm(she)"}}});
    EXPECT_EQ(type_error.status, 400);
    EXPECT_EQ(type_error.body["error_kind"], "TypeError");

    EXPECT_EQ(svc->handle("POST", "/api/project/pca", "{not json").status, 400);
    EXPECT_EQ(post(*svc, "/api/project/pca", {{"space", "wiki"}, {"colour", 1}}).status, 400);
    EXPECT_EQ(post(*svc, "/api/project/pca", Json::array()).status, 400);
    EXPECT_EQ(call(*svc, "GET", "/api/nowhere").status, 404);
    EXPECT_EQ(call(*svc, "GET", "/api/project/pca").status, 405);
    EXPECT_EQ(call(*svc, "GET", "/api/jobs/job-999").status, 404);
}

TEST(Service, PolarPcaCompareNearest) {
    auto svc = fixture::make_service();
    auto polar = post(*svc, "/api/project/polar",
                      {{"space", "wiki"}, {"axes", {"he", "she", "king"}}, {"filter", "in(@professions)"}});
    ASSERT_EQ(polar.status, 200) << polar.body.dump();
    EXPECT_EQ(polar.body["kind"], "polar");

    auto pca = post(*svc, "/api/project/pca", {{"space", "wiki"}, {"filter", "rank <= 20"}, {"k", 3}});
    ASSERT_EQ(pca.status, 200) << pca.body.dump();
    EXPECT_EQ(pca.body["axes"].size(), 3u);
    EXPECT_EQ(pca.body["items"].size(), 20u);

    auto cmp = post(*svc, "/api/compare",
                    {{"space_a", "wiki"}, {"space_b", "twitter"}, {"axes", {"avg(he,him)", "avg(she,her)"}},
                     {"filter", "in(@professions)"}, {"min_length", 0.05}});
    ASSERT_EQ(cmp.status, 200) << cmp.body.dump();
    EXPECT_EQ(cmp.body["space_b"], "twitter");
    for (const auto& item : cmp.body["items"]) EXPECT_GT(item["len"].get<double>(), 0.05);

    auto nn = post(*svc, "/api/nearest", {{"space", "wiki"}, {"formula", "king - man + woman"}, {"k", 3}, {"exclude_atoms", true}});
    ASSERT_EQ(nn.status, 200) << nn.body.dump();
    ASSERT_EQ(nn.body["neighbors"].size(), 3u);
    for (const auto& n : nn.body["neighbors"]) {
        EXPECT_NE(n["label"], "king");
        EXPECT_NE(n["label"], "woman");
    }
}

TEST(Service, IdenticalRequestsGiveIdenticalBytes) {
    auto svc = fixture::make_service();
    const std::vector<std::pair<std::string, Json>> requests{
        {"/api/project/cartesian", {{"space", "wiki"}, {"axes", {"avg(he,him)", "avg(she,her)"}}, {"filter", "rank > 3"}}},
        {"/api/project/polar", {{"space", "wiki"}, {"axes", {"he", "she", "king"}}, {"items", {"nurse", "chef"}}}},
        {"/api/project/pca", {{"space", "twitter"}, {"k", 2}}},
        {"/api/compare", {{"space_a", "wiki"}, {"space_b", "twitter"}, {"axes", {"he", "she"}}}},
        {"/api/nearest", {{"space", "wiki"}, {"formula", "nqnot(king, man)"}, {"k", 5}}},
        {"/api/project/cartesian", {{"space", "wiki"}, {"axes", {"avg(he,", "she"}}}},
    };
    for (const auto& [path, body] : requests) {
        const std::string text = body.dump();
        auto first = svc->handle("POST", path, text);
        auto other = fixture::make_service();
        for (int i = 0; i < 3; ++i) {
            EXPECT_EQ(svc->handle("POST", path, text).body, first.body) << path;
            EXPECT_EQ(other->handle("POST", path, text).body, first.body) << path;
        }
    }
}

TEST(Service, TsneJobLifecycle) {
    auto svc = fixture::make_service();
    auto submit = post(*svc, "/api/project/tsne",
                       {{"space", "wiki"}, {"config", {{"perplexity", 5}, {"iterations", 400}, {"seed", 3}}}});
    ASSERT_EQ(submit.status, 202) << submit.body.dump();
    const std::string id = submit.body["id"];

    auto first = call(*svc, "GET", "/api/jobs/" + id);
    ASSERT_EQ(first.status, 200);
    EXPECT_TRUE(first.body["state"] == "queued" || first.body["state"] == "running");
    EXPECT_GE(first.body["progress"].get<double>(), 0.0);
    EXPECT_LE(first.body["progress"].get<double>(), 1.0);

    int rank = 0;
    double progress = 0.0;
    Json last;
    for (auto deadline = std::chrono::steady_clock::now() + 60s; std::chrono::steady_clock::now() < deadline;) {
        last = call(*svc, "GET", "/api/jobs/" + id).body;
        const int r = state_rank(last["state"]);
        ASSERT_GE(r, rank);
        ASSERT_GE(last["progress"].get<double>(), progress);
        ASSERT_LE(last["progress"].get<double>(), 1.0);
        rank = r;
        progress = last["progress"];
        if (r == 2) break;
        std::this_thread::sleep_for(5ms);
    }
    ASSERT_EQ(last["state"], "done") << last.dump();
    EXPECT_EQ(last["progress"], 1.0);
    EXPECT_EQ(last["result"]["kind"], "tsne");
    EXPECT_EQ(last["result"]["items"].size(), 55u);

    // a second run with the same seed is bitwise identical
    auto again = post(*svc, "/api/project/tsne",
                      {{"space", "wiki"}, {"config", {{"perplexity", 5}, {"iterations", 400}, {"seed", 3}}}});
    auto done = job_to_json(svc->jobs().wait(again.body["id"].get<std::string>()));
    EXPECT_EQ(done["result"].dump(), last["result"].dump());
}

TEST(Service, TsneCancel) {
    auto svc = fixture::make_service();
    const Json req{{"space", "wiki"}, {"config", {{"perplexity", 5}, {"iterations", 1000000}}}};
    const std::string running = post(*svc, "/api/project/tsne", req).body["id"];
    const std::string queued = post(*svc, "/api/project/tsne", req).body["id"];

    auto q = call(*svc, "DELETE", "/api/jobs/" + queued);
    EXPECT_EQ(q.status, 200);
    EXPECT_EQ(q.body["state"], "canceled");

    call(*svc, "DELETE", "/api/jobs/" + running);
    auto snap = svc->jobs().wait(running);
    EXPECT_EQ(snap.state, JobState::Canceled);
    EXPECT_LT(snap.progress, 1.0);
    // canceling again leaves the final state alone
    EXPECT_EQ(call(*svc, "DELETE", "/api/jobs/" + running).body["state"], "canceled");
    EXPECT_EQ(call(*svc, "GET", "/api/jobs/" + queued).body["state"], "canceled");
}

TEST(Service, TsneRejectsBadRequestsUpFront) {
    ServiceOptions opt;
    opt.tsne_max_items = 10;
    auto svc = fixture::make_service(opt);
    auto many = post(*svc, "/api/project/tsne", {{"space", "wiki"}});
    EXPECT_EQ(many.status, 422);
    EXPECT_EQ(many.body["error_kind"], "TooManyItems");
    auto perp = post(*svc, "/api/project/tsne", {{"space", "wiki"}, {"filter", "rank <= 9"}});
    EXPECT_EQ(perp.status, 422);
    EXPECT_EQ(perp.body["error_kind"], "InvalidPerplexity");
    auto bad_cfg = post(*svc, "/api/project/tsne", {{"space", "wiki"}, {"config", {{"perplexitee", 2}}}});
    EXPECT_EQ(bad_cfg.status, 422);
}

TEST(JobQueue, FailedJobKeepsError) {
    JobQueue q(1);
    auto id = q.submit([](std::stop_token, const std::function<void(double)>&) -> Json {
        throw Error(ErrorKind::NonFinite, "diverged at iteration 3");
    });
    auto snap = q.wait(id);
    EXPECT_EQ(snap.state, JobState::Failed);
    ASSERT_TRUE(snap.error);
    EXPECT_EQ((*snap.error)["error_kind"], "NonFinite");
    EXPECT_THROW(q.get("job-77"), Error);
}

TEST(JobQueue, ProgressNeverDecreases) {
    JobQueue q(1);
    auto id = q.submit([](std::stop_token, const std::function<void(double)>& progress) -> Json {
        progress(0.5);
        progress(0.25);
        progress(7.0);
        return Json{{"ok", true}};
    });
    auto snap = q.wait(id);
    EXPECT_EQ(snap.state, JobState::Done);
    EXPECT_EQ(snap.progress, 1.0);
}

// ---------------------------------------------------------------------------
// configuration

TEST(Config, ParsesSpacesAndSets) {
    auto dir = temp_dir();
    write_file(dir / "v.txt", "he 1 0\nshe 0 1\nnurse 0.2 0.9\n");
    write_file(dir / "m.tsv", "label\tpos\nnurse\tNOUN\n");
    write_file(dir / "prof.txt", "# professions\nnurse\n\ndoctor\n");
    auto cfg = parse_server_config(Json::parse(R"({
        "listen": "0.0.0.0:9000",
        "spaces": [{"name": "toy", "vectors": "v.txt", "metadata": "m.tsv"},
                   {"name": "toy_raw", "vectors": "v.txt", "normalize": false, "frequency_sorted": false}],
        "label_sets": {"professions": {"file": "prof.txt"}, "pronouns": ["he", "she"]},
        "polar_item_cap": 8
    })"), dir);
    EXPECT_EQ(cfg.listen, "0.0.0.0:9000");
    ASSERT_EQ(cfg.spaces.size(), 2u);
    EXPECT_EQ(cfg.spaces[0].vectors, dir / "v.txt");
    EXPECT_FALSE(cfg.spaces[1].normalize);
    EXPECT_EQ(cfg.label_sets.at("professions"), (std::vector<std::string>{"nurse", "doctor"}));
    EXPECT_EQ(cfg.polar_item_cap, 8u);

    auto svc = Service::from_config(cfg);
    auto r = post(*svc, "/api/project/cartesian", {{"space", "toy"}, {"axes", {"he", "she"}}, {"filter", "in(@professions) and pos == \"NOUN\""}});
    ASSERT_EQ(r.status, 200) << r.body.dump();
    EXPECT_EQ(r.body["items"], Json{"nurse"});
    EXPECT_EQ(svc->space("toy_raw").normalized(), false);
    std::filesystem::remove_all(dir);
}

TEST(Config, Rejections) {
    auto expect_config_error = [](const char* text) {
        try {
            parse_server_config(Json::parse(text));
            ADD_FAILURE() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::ConfigError) << text;
        }
    };
    expect_config_error(R"({"spaces": [{"name": "a", "vectors": "x"}, {"name": "a", "vectors": "y"}]})");
    expect_config_error(R"({"spaces": [{"name": "a"}]})");
    expect_config_error(R"({"spaces": []})");
    expect_config_error(R"({"spaces": [{"name": "a", "vectors": "x"}], "port": 3})");
    expect_config_error(R"({"spaces": [{"name": "a", "vectors": "x", "normalise": true}]})");
    expect_config_error(R"({"spaces": [{"name": "a", "vectors": "x"}], "label_sets": {"s": 4}})");
    expect_config_error(R"([])");
}

TEST(Config, EnvironmentOverridesListen) {
    auto dir = temp_dir();
    write_file(dir / "server.json", R"({"listen": "127.0.0.1:1", "spaces": [{"name": "a", "vectors": "v.txt"}]})");
    ::unsetenv(kListenEnv);
    EXPECT_EQ(load_server_config(dir / "server.json").listen, "127.0.0.1:1");
    ::setenv(kListenEnv, "127.0.0.1:4321", 1);
    EXPECT_EQ(load_server_config(dir / "server.json").listen, "127.0.0.1:4321");
    ::unsetenv(kListenEnv);
    try {
        load_server_config(dir / "missing.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IoError);
    }
    std::filesystem::remove_all(dir);
}

TEST(Config, MissingVectorFileIsIoError) {
    ServerConfig cfg;
    cfg.spaces.push_back({"a", "/nonexistent/vectors.txt"});
    try {
        load_spaces(cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IoError);
    }
}

// ---------------------------------------------------------------------------
// HTTP

TEST(Http, RoundTripMatchesHandle) {
    auto svc = fixture::make_service();
    HttpServer server(*svc);
    const int port = server.bind_any("127.0.0.1");
    ASSERT_GT(port, 0);
    std::thread t([&] { server.run(); });
    while (!server.running()) std::this_thread::sleep_for(1ms);

    httplib::Client client("127.0.0.1", port);
    const std::string body =
        Json{{"space", "wiki"}, {"axes", {"avg(he,him)", "avg(she,her)"}}, {"filter", "in(@professions)"}}.dump();
    auto r = client.Post("/api/project/cartesian", body, "application/json");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 200);
    EXPECT_EQ(r->body, svc->handle("POST", "/api/project/cartesian", body).body);
    EXPECT_EQ(r->get_header_value("Content-Type"), "application/json");

    auto bad = client.Post("/api/project/cartesian", R"({"space":"wiki","axes":["avg(he,","she"]})", "application/json");
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->status, 400);
    EXPECT_EQ(Json::parse(bad->body)["offset"], 7);

    auto spaces = client.Get("/api/spaces");
    ASSERT_TRUE(spaces);
    EXPECT_EQ(spaces->status, 200);
    auto missing = client.Delete("/api/jobs/job-41");
    ASSERT_TRUE(missing);
    EXPECT_EQ(missing->status, 404);

    server.stop();
    t.join();
}
