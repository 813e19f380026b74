#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <memory>
#include <thread>

#include <httplib.h>

#include "prefact/prefact.hpp"

namespace fs = std::filesystem;
using namespace prefact;

namespace {

// Engine + ApiServer on an ephemeral loopback port, torn down with the test.
struct LiveServer {
    fs::path dir;
    std::unique_ptr<Engine> engine;
    std::unique_ptr<ApiServer> server;
    std::thread thread;
    int port = 0;

    LiveServer() {
        dir = fs::temp_directory_path() /
              ("prefact-api-" + std::to_string(::getpid()) + "-" +
               std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::remove_all(dir);
        fs::create_directories(dir);
        write_fixture_files(generate_corpus(golden_spec()), dir);

        EngineConfig cfg;
        cfg.articles_path = (dir / "articles.jsonl").string();
        cfg.outlets_path = (dir / "outlets.jsonl").string();
        cfg.store_dir = (dir / "store").string();
        cfg.article_reliability_mode = ArticleReliabilityMode::site_prior_only;
        cfg.group_weights = {{"text", 0.0}, {"url", 0.0}};
        cfg.fixed_now = 1700000000;
        engine = std::make_unique<Engine>(cfg);
        engine->profile_all();

        server = std::make_unique<ApiServer>(*engine);
        port = server->bind_any("127.0.0.1");
        REQUIRE(port > 0);
        thread = std::thread([this] { server->listen_after_bind(); });
        server->raw().wait_until_ready();
    }

    ~LiveServer() {
        server->stop();
        thread.join();
        fs::remove_all(dir);
    }

    httplib::Client client() const { return httplib::Client("127.0.0.1", port); }
};

void check_envelope(const httplib::Result& res, const Engine& engine) {
    REQUIRE(res);
    REQUIRE(res->get_header_value("X-Engine-Version") == kEngineVersion);
    REQUIRE(res->get_header_value("X-Config-Hash") == engine.hash());
    REQUIRE(res->get_header_value("Content-Type") == "application/json");
    REQUIRE_FALSE(res->body.empty());
    REQUIRE(res->body.back() == '\n');
}

}  // namespace

TEST_CASE("api health reports the live snapshot", "[server]") {
    LiveServer live;
    auto client = live.client();
    auto res = client.Get("/v1/health");
    check_envelope(res, *live.engine);
    REQUIRE(res->status == 200);
    json body = json::parse(res->body);
    REQUIRE(body.at("status") == "ok");
    REQUIRE(body.at("snapshot_id") == 1);
}

TEST_CASE("api serves stored profiles", "[server]") {
    LiveServer live;
    auto client = live.client();

    auto res = client.Get("/v1/profile/outlet000.test");
    check_envelope(res, *live.engine);
    REQUIRE(res->status == 200);
    json body = json::parse(res->body);
    REQUIRE(body.at("domain") == "outlet000.test");
    REQUIRE(body.at("reliability") == 0.9);
    REQUIRE(res->body == canonical_document(to_json(live.engine->profile("outlet000.test"))));

    auto missing = client.Get("/v1/profile/nowhere.test");
    check_envelope(missing, *live.engine);
    REQUIRE(missing->status == 404);
    REQUIRE(json::parse(missing->body).at("error").get<std::string>().find("nowhere.test") !=
            std::string::npos);
}

TEST_CASE("api scores posted articles", "[server]") {
    LiveServer live;
    auto client = live.client();

    json article{{"id", "fresh1"},
                 {"source_domain", "outlet000.test"},
                 {"url", "https://outlet000.test/fresh1"},
                 {"title", "entity000 coverage update"},
                 {"body", "entity000 causes effect000. officials reviewed the schedule."},
                 {"published_at", 1700000000},
                 {"language_tag", "en"}};
    auto res = client.Post("/v1/score/article", article.dump(), "application/json");
    check_envelope(res, *live.engine);
    REQUIRE(res->status == 200);
    json body = json::parse(res->body);
    REQUIRE(body.at("article_id") == "fresh1");
    REQUIRE(body.at("r_site") == 0.9);
    REQUIRE(res->body ==
            canonical_document(live.engine->score_article(article_from_json(article))));

    SECTION("malformed article bodies are 400s") {
        auto bad = client.Post("/v1/score/article", "{ nope", "application/json");
        check_envelope(bad, *live.engine);
        REQUIRE(bad->status == 400);

        json unknown = article;
        unknown["surprise"] = 1;
        auto rejected = client.Post("/v1/score/article", unknown.dump(), "application/json");
        REQUIRE(rejected->status == 400);
        REQUIRE(json::parse(rejected->body).contains("error"));
    }
}

TEST_CASE("api scores claims with a strict body schema", "[server]") {
    LiveServer live;
    auto client = live.client();

    auto res = client.Post("/v1/score/claim", json{{"claim", "entity000 causes effect000"}}.dump(),
                           "application/json");
    check_envelope(res, *live.engine);
    REQUIRE(res->status == 200);
    json body = json::parse(res->body);
    REQUIRE(body.at("band") == "likely-true");
    REQUIRE(body.at("factuality").get<double>() == Catch::Approx(27.0 / 28.0).margin(1e-12));
    REQUIRE(res->body ==
            canonical_document(to_json(live.engine->score_claim("entity000 causes effect000"))));

    SECTION("schema violations are 400s") {
        for (const std::string& payload :
             {std::string("[1,2]"), json{{"claim", 7}}.dump(), json{{"text", "x"}}.dump(),
              json{{"claim", "x"}, {"extra", true}}.dump(), json{{"claim", ""}}.dump(),
              std::string("not json")}) {
            auto bad = client.Post("/v1/score/claim", payload, "application/json");
            check_envelope(bad, *live.engine);
            REQUIRE(bad->status == 400);
            REQUIRE(json::parse(bad->body).contains("error"));
        }
    }
    SECTION("stopword-only claims are validation errors, not crashes") {
        auto bad = client.Post("/v1/score/claim", json{{"claim", "the of and"}}.dump(),
                               "application/json");
        REQUIRE(bad->status == 400);
    }
}

TEST_CASE("api and engine agree verbatim across repeated calls", "[server]") {
    LiveServer live;
    auto client = live.client();
    auto first = client.Post("/v1/score/claim",
                             json{{"claim", "entity000 causes effect000 never"}}.dump(),
                             "application/json");
    auto second = client.Post("/v1/score/claim",
                              json{{"claim", "entity000 causes effect000 never"}}.dump(),
                              "application/json");
    REQUIRE(first->status == 200);
    REQUIRE(first->body == second->body);
    REQUIRE(json::parse(first->body).at("band") == "likely-false");
}
