#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <iostream>
#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "prefact/engine.hpp"
#include "prefact/error.hpp"
#include "prefact/util.hpp"
#include "prefact/version.hpp"

namespace prefact {

// Read-only HTTP facade over an Engine. Profile building stays a batch/CLI
// concern; every response body is the same canonical document the CLI
// prints, stamped with the engine version and config hash.
class ApiServer {
public:
    explicit ApiServer(Engine& engine) : engine_(engine) {
        server_.Get("/v1/health", [this](const httplib::Request& req, httplib::Response& res) {
            handle(req, res, [this] {
                auto snap = engine_.store().snapshot();
                return std::pair<int, json>{
                    200, json{{"snapshot_id", snap->snapshot_id}, {"status", "ok"}}};
            });
        });

        server_.Get(R"(/v1/profile/(.+))",
                    [this](const httplib::Request& req, httplib::Response& res) {
                        handle(req, res, [this, &req] {
                            MediaProfile p = engine_.profile(req.matches[1]);
                            return std::pair<int, json>{200, to_json(p)};
                        });
                    });

        server_.Post("/v1/score/article",
                     [this](const httplib::Request& req, httplib::Response& res) {
                         handle(req, res, [this, &req] {
                             ArticleRecord a = article_from_json(parse_body(req));
                             return std::pair<int, json>{200, engine_.score_article(a)};
                         });
                     });

        server_.Post("/v1/score/claim",
                     [this](const httplib::Request& req, httplib::Response& res) {
                         handle(req, res, [this, &req] {
                             json body = parse_body(req);
                             if (!body.is_object() || !body.contains("claim") ||
                                 !body.at("claim").is_string()) {
                                 throw ValidationError("body must be {\"claim\": \"<text>\"}");
                             }
                             for (const auto& item : body.items()) {
                                 if (item.key() != "claim") {
                                     throw ValidationError("unknown field '" + item.key() + "'");
                                 }
                             }
                             std::string claim = body.at("claim").get<std::string>();
                             if (claim.empty()) throw ValidationError("claim must be non-empty");
                             return std::pair<int, json>{200, to_json(engine_.score_claim(claim))};
                         });
                     });
    }

    // Blocking serve on a fixed port.
    bool listen(const std::string& host, int port) { return server_.listen(host, port); }

    // For tests: bind an ephemeral port, then listen_after_bind() on a thread.
    int bind_any(const std::string& host) { return server_.bind_to_any_port(host); }
    bool listen_after_bind() { return server_.listen_after_bind(); }
    void stop() { server_.stop(); }
    httplib::Server& raw() { return server_; }

private:
    static json parse_body(const httplib::Request& req) {
        try {
            return json::parse(req.body);
        } catch (const json::exception& e) {
            throw ValidationError("body is not valid JSON: " + std::string(e.what()));
        }
    }

    void handle(const httplib::Request&, httplib::Response& res,
                const std::function<std::pair<int, json>()>& fn) {
        int status = 200;
        json body;
        try {
            auto [code, b] = fn();
            status = code;
            body = std::move(b);
        } catch (const NotFoundError& e) {
            status = 404;
            body = json{{"error", e.what()}};
        } catch (const ParseError& e) {
            status = 400;
            body = json{{"error", e.what()}};
        } catch (const ValidationError& e) {
            status = 400;
            body = json{{"error", e.what()}};
        } catch (const std::exception& e) {
            std::string id = to_hex64(fnv1a64(e.what()) ^ error_seq_.fetch_add(1));
            std::cerr << "[prefact-api] error " << id << ": " << e.what() << "\n";
            status = 500;
            body = json{{"error", "internal error"}, {"error_id", id}};
        }
        res.status = status;
        res.set_header("X-Engine-Version", kEngineVersion);
        res.set_header("X-Config-Hash", engine_.hash());
        res.set_content(canonical_document(body), "application/json");
    }

    Engine& engine_;
    httplib::Server server_;
    std::atomic<std::uint64_t> error_seq_{0};
};

}  // namespace prefact
